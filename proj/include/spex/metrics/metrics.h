#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spex/selectors/ranking.h"
#include "spex/spectra/dataset.h"

namespace spex::metrics {

double mse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

inline constexpr double kDefaultBinWidth = 14.2;

struct BinScheme {
  double width = kDefaultBinWidth;
  double origin = 0.0;

  void validate() const;
  // Twice the axis resolution, starting at the first axis point.
  static BinScheme for_axis(const spectra::WavenumberAxis& axis);
};

// floor((w - origin) / width), duplicates collapsed.
std::set<long long> bin_set(const std::vector<double>& wavenumbers, const BinScheme& scheme);

struct JaccardResult {
  double value = 0.0;
  bool both_empty = false;  // J(empty, empty) is reported as 0
};

JaccardResult jaccard_detail(const std::set<long long>& a, const std::set<long long>& b);
double jaccard(const std::set<long long>& a, const std::set<long long>& b);

struct ExpertFeatureSet {
  std::vector<double> wavenumbers;
  std::string source;
};

// One wavenumber per line, '#' comments.
ExpertFeatureSet load_expert_features(const std::filesystem::path& path);
void save_expert_features(const std::filesystem::path& path, const ExpertFeatureSet& expert);

struct CorrectnessResult {
  double jaccard = 0.0;
  double percent = 0.0;
  std::size_t k = 0;
  std::string method;
  std::vector<std::string> warnings;
};

// Binned Jaccard between the top-k wavenumbers of a ranking and the expert set.
CorrectnessResult correctness(const selectors::FeatureRanking& r, const ExpertFeatureSet& expert, std::size_t k,
                              const BinScheme& scheme, const spectra::WavenumberAxis& axis);

// 120, 140, ..., 500.
std::vector<std::size_t> default_curve_ks();

std::vector<CorrectnessResult> correctness_curve(const selectors::FeatureRanking& r,
                                                 const ExpertFeatureSet& expert,
                                                 const std::vector<std::size_t>& ks, const BinScheme& scheme,
                                                 const spectra::WavenumberAxis& axis);

// method,k,jaccard,percent
void write_curve_csv(const std::filesystem::path& path, const std::vector<CorrectnessResult>& rows);

struct TradeoffRow {
  std::string method;
  double correctness = 0.0;
  double test_mse_mean = 0.0;
  double test_mse_sd = 0.0;
};

// Rows sorted by method name.
std::vector<TradeoffRow> tradeoff(std::vector<TradeoffRow> rows);
void write_tradeoff_csv(const std::filesystem::path& path, const std::vector<TradeoffRow>& rows);

}  // namespace spex::metrics
