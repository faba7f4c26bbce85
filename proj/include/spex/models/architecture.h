#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spex/models/mlp.h"

namespace spex::models {

enum class ArchPattern { kUp, kDown, kUpDown, kDownUp, kRandom };

const char* arch_pattern_name(ArchPattern p);
ArchPattern parse_arch_pattern(const std::string& s);

inline constexpr std::size_t kMinHiddenWidth = 32;
inline constexpr std::size_t kMaxHiddenWidth = 8000;
inline constexpr std::size_t kHiddenWidthStep = 32;

struct ArchitectureRequest {
  ArchPattern pattern = ArchPattern::kUp;
  std::size_t depth = 1;
  std::size_t base_width = 512;
  std::size_t max_width = kMaxHiddenWidth;
  std::uint64_t seed = 0;
  // Layer index where up-down / down-up patterns reverse direction. Unset
  // gives the symmetric shape; any value in [1, depth) is accepted.
  std::optional<std::size_t> turn;
};

// Hidden-layer widths for a pattern. Widths double (up) or halve (down) per
// layer and are clamped to [1, max_width]; random draws each width from
// {32, 64, ...} up to max_width.
std::vector<std::size_t> gen_architecture(const ArchitectureRequest& req);

// [input_width, hidden..., 1]
MlpArchitecture make_architecture(std::size_t input_width, const std::vector<std::size_t>& hidden,
                                  Activation hidden_act = Activation::kRelu,
                                  Activation output_act = Activation::kLinear);

}  // namespace spex::models
