#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spex/spectra/dataset.h"

namespace spex::spectra {

enum class ScenarioKind { kControl, kMixed, kRealtime };

const char* scenario_name(ScenarioKind kind);
ScenarioKind parse_scenario(const std::string& s);

struct SplitFractions {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kControl;
  // Control/Mixed use all three fractions. Realtime uses train/val only,
  // applied to the old pool; the defaults for it are (0.8, 0.2).
  SplitFractions fractions{};
  std::uint64_t seed = 0;

  static ScenarioSpec defaults(ScenarioKind kind, std::uint64_t seed);
};

struct ScenarioSplit {
  SpectraDataset train;
  SpectraDataset val;
  SpectraDataset test;
  // Row positions in the source pool (old rows first, then new rows for Mixed;
  // for Realtime, test indices refer to the new dataset).
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> val_rows;
  std::vector<std::size_t> test_rows;
};

// Partition sizes for a pool of n rows: floor for val and test, remainder to
// train.
struct SplitSizes {
  std::size_t train, val, test;
};
SplitSizes split_sizes(std::size_t n, double val_fraction, double test_fraction);

ScenarioSplit make_scenario(const SpectraDataset& old_data, const SpectraDataset& new_data,
                            const ScenarioSpec& spec);

}  // namespace spex::spectra
