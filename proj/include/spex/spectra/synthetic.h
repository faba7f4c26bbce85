#pragma once

#include <cstdint>
#include <vector>

#include "spex/spectra/dataset.h"

namespace spex::spectra {

struct Peak {
  double center;     // cm^-1
  double width;      // Gaussian standard deviation, cm^-1
  double amplitude;  // base amplitude
};

struct BatchShift {
  double baseline = 0.0;         // additive offset applied to every new-batch intensity
  double noise_inflation = 1.0;  // multiplies noise_sd for the new batch
  double gain = 1.0;             // multiplicative intensity gain for the new batch
};

// Quadratic response terms on active-peak amplitudes (positions index into
// active_peaks): response += weight * amp[a] * amp[b].
struct InteractionTerm {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
};

struct SynthConfig {
  std::size_t m_features = 1562;
  double axis_lo = 181.45;
  double axis_hi = 3200.82;
  double resolution = 7.1;
  std::vector<Peak> peaks;
  std::vector<std::size_t> active_peaks;
  std::vector<double> response_weights;  // one per active peak
  double response_intercept = 45.0;
  std::vector<InteractionTerm> nonlinearity;
  double amplitude_sd = 0.25;  // relative spread of per-sample amplitudes
  double noise_sd = 0.01;      // intensity noise
  double response_noise_sd = 0.0;
  double baseline = 0.0;  // constant intensity floor for every spectrum
  BatchShift batch_shift{};
  std::size_t n_old = 145;
  std::size_t n_new = 100;
  std::size_t replicates = 5;  // consecutive rows sharing one sample_id

  // Desk-scale stand-in for the real data: 1562 points on the trimmed axis,
  // 10 well-separated peaks, 4 of them driving the response.
  static SynthConfig defaults();

  // Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct SyntheticData {
  SpectraDataset old_data;
  SpectraDataset new_data;
  // Ground-truth expert features: axis indices within one width of each
  // active-peak center, and their wavenumbers.
  std::vector<std::size_t> expert_indices;
  std::vector<double> expert_wavenumbers;
  // Wavenumbers of the active-peak centers.
  std::vector<double> active_centers;
  // Per-sample peak amplitudes (rows follow old then new), for oracles.
  Eigen::MatrixXd old_amplitudes;
  Eigen::MatrixXd new_amplitudes;
};

SyntheticData generate_synthetic(const SynthConfig& cfg, std::uint64_t seed);

WavenumberAxis linear_axis(double lo, double hi, std::size_t m, double resolution);

}  // namespace spex::spectra
