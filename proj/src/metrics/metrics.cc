#include "spex/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "spex/spectra/io.h"

namespace spex::metrics {

double mse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
  if (y.size() != yhat.size()) throw std::invalid_argument("mse: length mismatch");
  if (y.size() == 0) throw std::invalid_argument("mse: empty input");
  return (y - yhat).squaredNorm() / static_cast<double>(y.size());
}

void BinScheme::validate() const {
  if (!(width > 0) || !std::isfinite(width)) throw std::invalid_argument("bin width must be positive");
  if (!std::isfinite(origin)) throw std::invalid_argument("bin origin must be finite");
}

BinScheme BinScheme::for_axis(const spectra::WavenumberAxis& axis) {
  return BinScheme{2.0 * axis.resolution, axis.values.empty() ? 0.0 : axis.front()};
}

std::set<long long> bin_set(const std::vector<double>& wavenumbers, const BinScheme& scheme) {
  scheme.validate();
  std::set<long long> out;
  for (double w : wavenumbers) {
    // The small offset keeps exact multiples of the width from landing one bin low.
    out.insert(static_cast<long long>(std::floor((w - scheme.origin) / scheme.width + 1e-9)));
  }
  return out;
}

JaccardResult jaccard_detail(const std::set<long long>& a, const std::set<long long>& b) {
  if (a.empty() && b.empty()) return {0.0, true};
  std::size_t inter = 0;
  for (auto v : a) inter += b.count(v);
  const std::size_t uni = a.size() + b.size() - inter;
  return {static_cast<double>(inter) / static_cast<double>(uni), false};
}

double jaccard(const std::set<long long>& a, const std::set<long long>& b) { return jaccard_detail(a, b).value; }

ExpertFeatureSet load_expert_features(const std::filesystem::path& path) {
  return {spectra::load_wavenumber_list(path), path.string()};
}

void save_expert_features(const std::filesystem::path& path, const ExpertFeatureSet& expert) {
  spectra::save_wavenumber_list(path, expert.wavenumbers, "expert wavenumbers (cm^-1)");
}

CorrectnessResult correctness(const selectors::FeatureRanking& r, const ExpertFeatureSet& expert, std::size_t k,
                              const BinScheme& scheme, const spectra::WavenumberAxis& axis) {
  if (r.size() != axis.size()) throw std::invalid_argument("correctness: ranking and axis widths differ");
  if (k > r.size()) throw std::invalid_argument("correctness: k exceeds feature count");
  std::vector<double> top;
  top.reserve(k);
  for (std::size_t i = 0; i < k; ++i) top.push_back(axis.values[r.order[i]]);
  const auto detail = jaccard_detail(bin_set(top, scheme), bin_set(expert.wavenumbers, scheme));
  CorrectnessResult out;
  out.jaccard = detail.value;
  out.percent = 100.0 * detail.value;
  out.k = k;
  out.method = r.method;
  if (detail.both_empty) out.warnings.push_back("both selections are empty; jaccard reported as 0");
  return out;
}

std::vector<std::size_t> default_curve_ks() {
  std::vector<std::size_t> ks;
  for (std::size_t k = 120; k <= 500; k += 20) ks.push_back(k);
  return ks;
}

std::vector<CorrectnessResult> correctness_curve(const selectors::FeatureRanking& r,
                                                 const ExpertFeatureSet& expert,
                                                 const std::vector<std::size_t>& ks, const BinScheme& scheme,
                                                 const spectra::WavenumberAxis& axis) {
  if (ks.empty()) throw std::invalid_argument("correctness_curve: ks must be nonempty");
  if (!std::is_sorted(ks.begin(), ks.end())) throw std::invalid_argument("correctness_curve: ks must ascend");
  std::vector<CorrectnessResult> out;
  out.reserve(ks.size());
  for (auto k : ks) out.push_back(correctness(r, expert, k, scheme, axis));
  return out;
}

void write_curve_csv(const std::filesystem::path& path, const std::vector<CorrectnessResult>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write curve table '" + path.string() + "'");
  out << "method,k,jaccard,percent\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.k << ',' << spectra::format_double(r.jaccard) << ','
        << spectra::format_double(r.percent) << '\n';
  }
}

std::vector<TradeoffRow> tradeoff(std::vector<TradeoffRow> rows) {
  if (rows.empty()) throw std::invalid_argument("tradeoff: at least one method is required");
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.method < b.method; });
  return rows;
}

void write_tradeoff_csv(const std::filesystem::path& path, const std::vector<TradeoffRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trade-off table '" + path.string() + "'");
  out << "method,correctness,test_mse_mean,test_mse_sd\n";
  for (const auto& r : rows) {
    out << r.method << ',' << spectra::format_double(r.correctness) << ','
        << spectra::format_double(r.test_mse_mean) << ',' << spectra::format_double(r.test_mse_sd) << '\n';
  }
}

}  // namespace spex::metrics
