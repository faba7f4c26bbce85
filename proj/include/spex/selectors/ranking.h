#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spex/spectra/dataset.h"

namespace spex::selectors {

// Non-negative per-feature importances plus their ordering. `order` sorts
// scores descending with ties broken by ascending feature index.
struct FeatureRanking {
  Eigen::VectorXd scores;
  std::vector<std::size_t> order;
  std::string method;

  std::size_t size() const { return static_cast<std::size_t>(scores.size()); }

  // Builds the order from the scores. Throws on negative or non-finite scores.
  static FeatureRanking from_scores(Eigen::VectorXd scores, std::string method);
};

// Feature positions in ascending axis order, with their wavenumbers.
struct FeatureSubset {
  std::vector<std::size_t> indices;
  std::vector<double> wavenumbers;

  std::size_t size() const { return indices.size(); }
};

struct SelectionRule {
  enum class Kind { kCount, kCumulative };
  Kind kind = Kind::kCount;
  std::size_t k = 120;
  double q = 0.8;

  static SelectionRule count(std::size_t k) { return {Kind::kCount, k, 0.0}; }
  static SelectionRule cumulative(double q) { return {Kind::kCumulative, 0, q}; }
};

// Count rule keeps the first k of `order`; cumulative rule keeps the shortest
// prefix whose score sum reaches q of the total (at least one feature).
FeatureSubset select_top(const FeatureRanking& r, const SelectionRule& rule,
                         const spectra::WavenumberAxis& axis);

// Prefix length the rule would keep.
std::size_t selection_size(const FeatureRanking& r, const SelectionRule& rule);

FeatureSubset subset_from_indices(std::vector<std::size_t> indices, const spectra::WavenumberAxis& axis);

// Maps wavenumbers to their nearest axis points (duplicates collapse).
FeatureSubset subset_from_wavenumbers(const std::vector<double>& wavenumbers,
                                      const spectra::WavenumberAxis& axis);

// "wavenumber,score" lines in ranked order, preceded by a '#' method line.
void save_ranking(const std::filesystem::path& path, const FeatureRanking& r,
                  const spectra::WavenumberAxis& axis);
FeatureRanking load_ranking(const std::filesystem::path& path, const spectra::WavenumberAxis& axis);

// One wavenumber per line.
void save_subset(const std::filesystem::path& path, const FeatureSubset& s);
FeatureSubset load_subset(const std::filesystem::path& path, const spectra::WavenumberAxis& axis);

}  // namespace spex::selectors
