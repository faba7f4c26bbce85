#include "spex/models/architecture.h"

#include <algorithm>
#include <stdexcept>

#include "spex/common/random.h"

namespace spex::models {

const char* arch_pattern_name(ArchPattern p) {
  switch (p) {
    case ArchPattern::kUp: return "up";
    case ArchPattern::kDown: return "down";
    case ArchPattern::kUpDown: return "up-down";
    case ArchPattern::kDownUp: return "down-up";
    case ArchPattern::kRandom: return "random";
  }
  return "?";
}

ArchPattern parse_arch_pattern(const std::string& s) {
  if (s == "up") return ArchPattern::kUp;
  if (s == "down") return ArchPattern::kDown;
  if (s == "up-down") return ArchPattern::kUpDown;
  if (s == "down-up") return ArchPattern::kDownUp;
  if (s == "random") return ArchPattern::kRandom;
  throw std::invalid_argument("unknown architecture pattern '" + s + "'");
}

std::vector<std::size_t> gen_architecture(const ArchitectureRequest& req) {
  if (req.depth < 1) throw std::invalid_argument("gen_architecture: depth must be >= 1");
  if (req.base_width < 1) throw std::invalid_argument("gen_architecture: base_width must be >= 1");
  if (req.max_width < 1) throw std::invalid_argument("gen_architecture: max_width must be >= 1");

  std::vector<std::size_t> widths;
  widths.reserve(req.depth);
  if (req.pattern == ArchPattern::kRandom) {
    Rng rng(req.seed);
    const std::size_t top = std::max(kMinHiddenWidth, req.max_width);
    const auto slots = static_cast<std::int64_t>((top - kMinHiddenWidth) / kHiddenWidthStep);
    for (std::size_t i = 0; i < req.depth; ++i) {
      widths.push_back(kMinHiddenWidth +
                       kHiddenWidthStep * static_cast<std::size_t>(rng.integer(0, slots)));
    }
    return widths;
  }

  const std::size_t turn = req.turn.value_or((req.depth + 1) / 2);
  if (req.turn && (*req.turn < 1 || *req.turn >= std::max<std::size_t>(req.depth, 2))) {
    throw std::invalid_argument("gen_architecture: turn must lie in [1, depth)");
  }
  auto grows = [&](std::size_t layer) {
    switch (req.pattern) {
      case ArchPattern::kUp: return true;
      case ArchPattern::kDown: return false;
      case ArchPattern::kUpDown: return layer < turn;
      case ArchPattern::kDownUp: return layer >= turn;
      default: return true;
    }
  };

  std::size_t w = std::min(req.base_width, req.max_width);
  widths.push_back(w);
  for (std::size_t i = 1; i < req.depth; ++i) {
    // Symmetric shapes repeat the peak width when depth is even.
    const bool plateau = !req.turn && req.depth % 2 == 0 && i == turn &&
                         (req.pattern == ArchPattern::kUpDown || req.pattern == ArchPattern::kDownUp);
    if (!plateau) {
      w = grows(i) ? std::min(w * 2, req.max_width) : std::max<std::size_t>(w / 2, 1);
    }
    widths.push_back(w);
  }
  return widths;
}

MlpArchitecture make_architecture(std::size_t input_width, const std::vector<std::size_t>& hidden,
                                  Activation hidden_act, Activation output_act) {
  MlpArchitecture arch;
  arch.layer_sizes.reserve(hidden.size() + 2);
  arch.layer_sizes.push_back(input_width);
  arch.layer_sizes.insert(arch.layer_sizes.end(), hidden.begin(), hidden.end());
  arch.layer_sizes.push_back(1);
  arch.hidden = hidden_act;
  arch.output = output_act;
  return arch;
}

}  // namespace spex::models
