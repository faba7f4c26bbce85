#include "spex/selectors/ranking.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "spex/spectra/io.h"

namespace spex::selectors {

FeatureRanking FeatureRanking::from_scores(Eigen::VectorXd scores, std::string method) {
  for (Eigen::Index j = 0; j < scores.size(); ++j) {
    if (!std::isfinite(scores(j)) || scores(j) < 0.0) {
      throw std::invalid_argument("ranking '" + method + "': scores must be finite and non-negative");
    }
  }
  FeatureRanking r;
  r.order.resize(static_cast<std::size_t>(scores.size()));
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
    return scores(static_cast<Eigen::Index>(a)) > scores(static_cast<Eigen::Index>(b));
  });
  r.scores = std::move(scores);
  r.method = std::move(method);
  return r;
}

std::size_t selection_size(const FeatureRanking& r, const SelectionRule& rule) {
  const std::size_t m = r.size();
  if (rule.kind == SelectionRule::Kind::kCount) {
    if (rule.k > m) throw std::invalid_argument("select_top: k exceeds feature count");
    return rule.k;
  }
  if (!(rule.q > 0.0 && rule.q <= 1.0)) throw std::invalid_argument("select_top: q must lie in (0, 1]");
  if (m == 0) return 0;
  const double target = rule.q * r.scores.sum() * (1.0 - 1e-12);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    acc += r.scores(static_cast<Eigen::Index>(r.order[i]));
    if (acc >= target) return i + 1;
  }
  return m;
}

FeatureSubset subset_from_indices(std::vector<std::size_t> indices, const spectra::WavenumberAxis& axis) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  FeatureSubset s;
  for (auto i : indices) {
    if (i >= axis.size()) throw std::invalid_argument("feature index outside the axis");
    s.wavenumbers.push_back(axis.values[i]);
  }
  s.indices = std::move(indices);
  return s;
}

FeatureSubset select_top(const FeatureRanking& r, const SelectionRule& rule,
                         const spectra::WavenumberAxis& axis) {
  if (r.size() != axis.size()) throw std::invalid_argument("select_top: ranking and axis widths differ");
  const std::size_t n = std::max<std::size_t>(selection_size(r, rule), r.size() > 0 ? 1 : 0);
  return subset_from_indices(std::vector<std::size_t>(r.order.begin(), r.order.begin() + static_cast<long>(n)),
                             axis);
}

FeatureSubset subset_from_wavenumbers(const std::vector<double>& wavenumbers,
                                      const spectra::WavenumberAxis& axis) {
  std::vector<std::size_t> idx;
  idx.reserve(wavenumbers.size());
  for (double w : wavenumbers) idx.push_back(axis.nearest_index(w));
  return subset_from_indices(std::move(idx), axis);
}

void save_ranking(const std::filesystem::path& path, const FeatureRanking& r,
                  const spectra::WavenumberAxis& axis) {
  if (r.size() != axis.size()) throw std::invalid_argument("save_ranking: ranking and axis widths differ");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ranking file '" + path.string() + "'");
  out << "# method: " << r.method << "\n";
  out << "# wavenumber,score\n";
  for (auto j : r.order) {
    out << spectra::format_double(axis.values[j]) << ','
        << spectra::format_double(r.scores(static_cast<Eigen::Index>(j))) << '\n';
  }
}

FeatureRanking load_ranking(const std::filesystem::path& path, const spectra::WavenumberAxis& axis) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ranking file '" + path.string() + "'");
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(axis.size()));
  std::string method = "file";
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# method: ", 0) == 0) {
      method = line.substr(10);
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("ranking file: expected 'wavenumber,score'");
    const double w = std::stod(line.substr(0, comma));
    const double s = std::stod(line.substr(comma + 1));
    scores(static_cast<Eigen::Index>(axis.nearest_index(w))) = s;
  }
  return FeatureRanking::from_scores(std::move(scores), method);
}

void save_subset(const std::filesystem::path& path, const FeatureSubset& s) {
  spectra::save_wavenumber_list(path, s.wavenumbers, "selected wavenumbers (cm^-1)");
}

FeatureSubset load_subset(const std::filesystem::path& path, const spectra::WavenumberAxis& axis) {
  return subset_from_wavenumbers(spectra::load_wavenumber_list(path), axis);
}

}  // namespace spex::selectors
