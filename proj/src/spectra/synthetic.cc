#include "spex/spectra/synthetic.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spex/common/random.h"

namespace spex::spectra {
namespace {

Eigen::MatrixXd peak_profiles(const WavenumberAxis& axis, const std::vector<Peak>& peaks) {
  Eigen::MatrixXd g(static_cast<Eigen::Index>(peaks.size()), static_cast<Eigen::Index>(axis.size()));
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    for (std::size_t j = 0; j < axis.size(); ++j) {
      const double d = (axis.values[j] - peaks[k].center) / peaks[k].width;
      g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = std::exp(-0.5 * d * d);
    }
  }
  return g;
}

struct BatchDraw {
  SpectraDataset data;
  Eigen::MatrixXd amplitudes;
};

BatchDraw draw_batch(const SynthConfig& cfg, const WavenumberAxis& axis,
                     const Eigen::MatrixXd& profiles, std::size_t n, Batch batch,
                     std::size_t first_sample, Rng& rng) {
  const auto n_peaks = static_cast<Eigen::Index>(cfg.peaks.size());
  const auto m = static_cast<Eigen::Index>(axis.size());
  const auto rows = static_cast<Eigen::Index>(n);
  const bool is_new = batch == Batch::kNew;
  const double noise = cfg.noise_sd * (is_new ? cfg.batch_shift.noise_inflation : 1.0);
  const double gain = is_new ? cfg.batch_shift.gain : 1.0;
  const double offset = is_new ? cfg.batch_shift.baseline : 0.0;
  const std::size_t reps = std::max<std::size_t>(1, cfg.replicates);

  BatchDraw out;
  out.amplitudes.resize(rows, n_peaks);
  out.data.axis = axis;
  out.data.intensities.resize(rows, m);
  out.data.response.resize(rows);

  Eigen::VectorXd amp(n_peaks);
  double response_noise = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto r = static_cast<std::size_t>(i);
    // Replicates of one sample share composition (amplitudes and response).
    if (r % reps == 0) {
      for (Eigen::Index k = 0; k < n_peaks; ++k) {
        const double rel = 1.0 + cfg.amplitude_sd * rng.normal();
        amp(k) = cfg.peaks[static_cast<std::size_t>(k)].amplitude * std::max(0.0, rel);
      }
      response_noise = cfg.response_noise_sd > 0 ? cfg.response_noise_sd * rng.normal() : 0.0;
    }
    out.amplitudes.row(i) = amp.transpose();

    Eigen::RowVectorXd spectrum = amp.transpose() * profiles;
    spectrum.array() += cfg.baseline;
    spectrum *= gain;
    spectrum.array() += offset;
    if (noise > 0) {
      for (Eigen::Index j = 0; j < m; ++j) spectrum(j) += noise * rng.normal();
    }
    out.data.intensities.row(i) = spectrum;

    double y = cfg.response_intercept;
    for (std::size_t a = 0; a < cfg.active_peaks.size(); ++a) {
      y += cfg.response_weights[a] * amp(static_cast<Eigen::Index>(cfg.active_peaks[a]));
    }
    for (const auto& t : cfg.nonlinearity) {
      y += t.weight * amp(static_cast<Eigen::Index>(cfg.active_peaks[t.a])) *
           amp(static_cast<Eigen::Index>(cfg.active_peaks[t.b]));
    }
    out.data.response(i) = y + response_noise;

    out.data.batch.push_back(batch);
    out.data.sample_id.push_back("S" + std::to_string(first_sample + r / reps));
    out.data.replicate_id.push_back(std::to_string(r % reps));
  }
  return out;
}

}  // namespace

SynthConfig SynthConfig::defaults() {
  SynthConfig cfg;
  cfg.peaks = {
      {310.0, 12.0, 0.30},  {520.0, 10.0, 0.42},  {780.0, 11.0, 0.36},  {1003.0, 9.0, 0.54},
      {1260.0, 12.0, 0.30}, {1445.0, 13.0, 0.48}, {1650.0, 10.0, 0.27}, {2100.0, 14.0, 0.18},
      {2870.0, 12.0, 0.60}, {2935.0, 12.0, 0.45},
  };
  cfg.active_peaks = {1, 3, 5, 8};
  cfg.response_weights = {10.0, -8.0, 7.0, 8.0};
  cfg.nonlinearity = {{0, 1, 5.5}};
  cfg.response_intercept = 40.0;
  cfg.amplitude_sd = 0.25;
  cfg.noise_sd = 0.012;
  cfg.response_noise_sd = 0.3;
  // New-batch drift: laser power rose from 350.5 mW to 364.2 mW, with a
  // small offset and much noisier acquisitions.
  cfg.batch_shift = {0.01, 15.0, 364.2 / 350.5};
  return cfg;
}

void SynthConfig::validate() const {
  if (m_features < 2) throw std::invalid_argument("synth: m_features must be at least 2");
  if (!(axis_lo < axis_hi)) throw std::invalid_argument("synth: axis_lo must be below axis_hi");
  if (!(resolution > 0)) throw std::invalid_argument("synth: resolution must be positive");
  if (peaks.empty()) throw std::invalid_argument("synth: at least one peak is required");
  for (const auto& p : peaks) {
    if (p.center < axis_lo || p.center > axis_hi) {
      throw std::invalid_argument("synth: peak center " + std::to_string(p.center) +
                                  " outside the axis range");
    }
    if (!(p.width > 0)) throw std::invalid_argument("synth: peak width must be positive");
  }
  if (active_peaks.size() != response_weights.size()) {
    throw std::invalid_argument("synth: one response weight per active peak is required");
  }
  for (auto a : active_peaks) {
    if (a >= peaks.size()) throw std::invalid_argument("synth: active peak index out of range");
  }
  for (const auto& t : nonlinearity) {
    if (t.a >= active_peaks.size() || t.b >= active_peaks.size()) {
      throw std::invalid_argument("synth: interaction term refers to a missing active peak");
    }
  }
  if (amplitude_sd < 0 || noise_sd < 0 || response_noise_sd < 0 || batch_shift.noise_inflation < 0) {
    throw std::invalid_argument("synth: noise scales must be non-negative");
  }
  if (n_old == 0) throw std::invalid_argument("synth: n_old must be positive");
}

WavenumberAxis linear_axis(double lo, double hi, std::size_t m, double resolution) {
  WavenumberAxis axis;
  axis.resolution = resolution;
  axis.values.resize(m);
  const double step = (hi - lo) / static_cast<double>(m - 1);
  for (std::size_t j = 0; j < m; ++j) axis.values[j] = lo + step * static_cast<double>(j);
  axis.values.back() = hi;
  return axis;
}

SyntheticData generate_synthetic(const SynthConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const auto axis = linear_axis(cfg.axis_lo, cfg.axis_hi, cfg.m_features, cfg.resolution);
  const auto profiles = peak_profiles(axis, cfg.peaks);
  const std::size_t reps = std::max<std::size_t>(1, cfg.replicates);

  SyntheticData out;
  Rng old_rng(derive_seed(seed, 1));
  Rng new_rng(derive_seed(seed, 2));
  auto old_batch = draw_batch(cfg, axis, profiles, cfg.n_old, Batch::kOld, 0, old_rng);
  auto new_batch = draw_batch(cfg, axis, profiles, cfg.n_new, Batch::kNew,
                              (cfg.n_old + reps - 1) / reps, new_rng);
  out.old_data = std::move(old_batch.data);
  out.new_data = std::move(new_batch.data);
  out.old_amplitudes = std::move(old_batch.amplitudes);
  out.new_amplitudes = std::move(new_batch.amplitudes);

  std::vector<bool> expert(axis.size(), false);
  for (auto a : cfg.active_peaks) {
    const auto& p = cfg.peaks[a];
    out.active_centers.push_back(p.center);
    for (std::size_t j = 0; j < axis.size(); ++j) {
      if (std::abs(axis.values[j] - p.center) <= p.width) expert[j] = true;
    }
  }
  for (std::size_t j = 0; j < axis.size(); ++j) {
    if (expert[j]) {
      out.expert_indices.push_back(j);
      out.expert_wavenumbers.push_back(axis.values[j]);
    }
  }
  return out;
}

}  // namespace spex::spectra
