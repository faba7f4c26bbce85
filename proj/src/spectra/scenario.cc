#include "spex/spectra/scenario.h"

#include <cmath>
#include <stdexcept>

#include "spex/common/random.h"

namespace spex::spectra {
namespace {

std::size_t floor_count(double fraction, std::size_t n) {
  // The small slack keeps products such as 0.2 * 145 = 28.999... from losing a row.
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

std::vector<std::size_t> slice(const std::vector<std::size_t>& v, std::size_t begin, std::size_t end) {
  return {v.begin() + static_cast<std::ptrdiff_t>(begin), v.begin() + static_cast<std::ptrdiff_t>(end)};
}

}  // namespace

const char* scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kControl: return "control";
    case ScenarioKind::kMixed: return "mixed";
    case ScenarioKind::kRealtime: return "realtime";
  }
  return "unknown";
}

ScenarioKind parse_scenario(const std::string& s) {
  if (s == "control" || s == "Control") return ScenarioKind::kControl;
  if (s == "mixed" || s == "Mixed") return ScenarioKind::kMixed;
  if (s == "realtime" || s == "Realtime" || s == "real-time" || s == "Real-time") {
    return ScenarioKind::kRealtime;
  }
  throw std::invalid_argument("unknown scenario '" + s + "'");
}

ScenarioSpec ScenarioSpec::defaults(ScenarioKind kind, std::uint64_t seed) {
  ScenarioSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  if (kind == ScenarioKind::kRealtime) spec.fractions = {0.8, 0.2, 0.0};
  return spec;
}

SplitSizes split_sizes(std::size_t n, double val_fraction, double test_fraction) {
  SplitSizes s{};
  s.val = floor_count(val_fraction, n);
  s.test = floor_count(test_fraction, n);
  if (s.val + s.test > n) throw std::invalid_argument("split fractions exceed the pool");
  s.train = n - s.val - s.test;
  return s;
}

ScenarioSplit make_scenario(const SpectraDataset& old_data, const SpectraDataset& new_data,
                            const ScenarioSpec& spec) {
  const auto& f = spec.fractions;
  if (f.train < 0 || f.val < 0 || f.test < 0) throw std::invalid_argument("negative split fraction");
  Rng rng(derive_seed(spec.seed, 0x5ce7a210));
  ScenarioSplit out;

  if (spec.kind == ScenarioKind::kRealtime) {
    if (old_data.empty()) throw std::invalid_argument("realtime scenario: empty old pool");
    if (new_data.empty()) throw std::invalid_argument("realtime scenario: empty new set");
    if (std::abs(f.train + f.val - 1.0) > 1e-9) {
      throw std::invalid_argument("realtime fractions (train, val) must sum to 1");
    }
    const std::size_t n = old_data.n_samples();
    const auto sizes = split_sizes(n, f.val, 0.0);
    auto perm = rng.permutation(n);
    out.val_rows = slice(perm, 0, sizes.val);
    out.train_rows = slice(perm, sizes.val, n);
    out.test_rows.resize(new_data.n_samples());
    for (std::size_t i = 0; i < out.test_rows.size(); ++i) out.test_rows[i] = i;
    out.train = old_data.rows(out.train_rows);
    out.val = old_data.rows(out.val_rows);
    out.test = new_data;
    return out;
  }

  if (std::abs(f.train + f.val + f.test - 1.0) > 1e-9) {
    throw std::invalid_argument("split fractions must sum to 1");
  }
  const SpectraDataset pool =
      spec.kind == ScenarioKind::kMixed && !new_data.empty() ? concat(old_data, new_data) : old_data;
  if (pool.empty()) throw std::invalid_argument("scenario pool is empty");
  const std::size_t n = pool.n_samples();
  const auto sizes = split_sizes(n, f.val, f.test);
  auto perm = rng.permutation(n);
  out.val_rows = slice(perm, 0, sizes.val);
  out.test_rows = slice(perm, sizes.val, sizes.val + sizes.test);
  out.train_rows = slice(perm, sizes.val + sizes.test, n);
  out.train = pool.rows(out.train_rows);
  out.val = pool.rows(out.val_rows);
  out.test = pool.rows(out.test_rows);
  return out;
}

}  // namespace spex::spectra
