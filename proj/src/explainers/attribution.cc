#include "spex/explainers/attribution.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "spex/common/random.h"
#include "spex/spectra/io.h"

namespace spex::explainers {

std::vector<std::size_t> stratified_background(const Eigen::MatrixXd& x, const models::Regressor& f,
                                               std::size_t n, std::uint64_t seed, std::size_t strata) {
  const auto rows = static_cast<std::size_t>(x.rows());
  if (n > rows) throw std::invalid_argument("stratified_background: n exceeds row count");
  if (strata < 1) throw std::invalid_argument("stratified_background: need at least one stratum");
  std::vector<std::size_t> all(rows);
  std::iota(all.begin(), all.end(), 0);
  if (n == rows) return all;
  if (n == 0) return {};

  const Eigen::VectorXd out = f.predict_rows(x);
  std::vector<std::size_t> sorted = all;
  std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
    return out(static_cast<Eigen::Index>(a)) < out(static_cast<Eigen::Index>(b));
  });

  // Quantile stratum by rank; ties inherit the stratum of their first member.
  std::vector<std::vector<std::size_t>> groups(strata);
  std::size_t current = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const bool tie = r > 0 && out(static_cast<Eigen::Index>(sorted[r])) == out(static_cast<Eigen::Index>(sorted[r - 1]));
    if (!tie) current = std::max(current, r * strata / rows);
    groups[current].push_back(sorted[r]);
  }

  std::vector<std::size_t> occupied;
  for (std::size_t s = 0; s < strata; ++s) {
    if (!groups[s].empty()) occupied.push_back(s);
  }
  std::vector<std::size_t> take(strata, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (auto s : occupied) {
    const double share = static_cast<double>(n) * static_cast<double>(groups[s].size()) / static_cast<double>(rows);
    take[s] = static_cast<std::size_t>(share);
    assigned += take[s];
    remainders.emplace_back(share - static_cast<double>(take[s]), s);
  }
  if (n >= occupied.size()) {
    for (auto s : occupied) {
      if (take[s] == 0) {
        take[s] = 1;
        ++assigned;
      }
    }
    // Over-assignment from the minimum-one rule is taken back from the largest strata.
    while (assigned > n) {
      auto it = std::max_element(occupied.begin(), occupied.end(),
                                 [&](std::size_t a, std::size_t b) { return take[a] < take[b]; });
      --take[*it];
      --assigned;
    }
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % remainders.size()) {
    const auto s = remainders[i].second;
    if (take[s] < groups[s].size()) {
      ++take[s];
      ++assigned;
    }
  }

  std::vector<std::size_t> picked;
  picked.reserve(n);
  for (std::size_t s = 0; s < strata; ++s) {
    if (take[s] == 0) continue;
    Rng rng(derive_seed(seed, s));
    auto members = groups[s];
    std::sort(members.begin(), members.end());
    rng.shuffle(members);
    picked.insert(picked.end(), members.begin(), members.begin() + static_cast<long>(take[s]));
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

void write_attributions(const std::filesystem::path& path, const std::vector<Attribution>& attrs,
                        const spectra::WavenumberAxis& axis) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write attribution table '" + path.string() + "'");
  out << "instance_id,wavenumber,value\n";
  for (const auto& a : attrs) {
    if (static_cast<std::size_t>(a.values.size()) != axis.size()) {
      throw std::invalid_argument("write_attributions: attribution width differs from axis");
    }
    for (std::size_t j = 0; j < axis.size(); ++j) {
      out << a.instance_id << ',' << spectra::format_double(axis.values[j]) << ','
          << spectra::format_double(a.values(static_cast<Eigen::Index>(j))) << '\n';
    }
  }
}

}  // namespace spex::explainers
