#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spex::spectra {

// Wavenumber grid (cm^-1). Grid spacing and instrument resolution are
// independent: the resolution is only used to derive default bin widths.
struct WavenumberAxis {
  std::vector<double> values;
  double resolution = 7.1;

  std::size_t size() const { return values.size(); }
  double front() const { return values.front(); }
  double back() const { return values.back(); }

  // Index of the grid point closest to `wavenumber`.
  std::size_t nearest_index(double wavenumber) const;

  // Throws std::invalid_argument unless strictly increasing and finite.
  void validate() const;
};

enum class Batch { kOld, kNew };

const char* batch_name(Batch b);
Batch parse_batch(const std::string& s);

struct SpectraDataset {
  WavenumberAxis axis;
  Eigen::MatrixXd intensities;  // N x M
  Eigen::VectorXd response;     // N
  std::vector<Batch> batch;
  std::vector<std::string> sample_id;
  std::vector<std::string> replicate_id;

  std::size_t n_samples() const { return static_cast<std::size_t>(intensities.rows()); }
  std::size_t n_features() const { return static_cast<std::size_t>(intensities.cols()); }
  bool empty() const { return intensities.rows() == 0; }

  // Throws std::invalid_argument if any shape or finiteness invariant fails.
  void validate() const;

  SpectraDataset rows(const std::vector<std::size_t>& indices) const;
  SpectraDataset columns(const std::vector<std::size_t>& indices) const;
};

// Rows of `a` followed by rows of `b`; axes must match exactly.
SpectraDataset concat(const SpectraDataset& a, const SpectraDataset& b);

// Keeps features with lo <= wavenumber <= hi.
SpectraDataset trim_axis(const SpectraDataset& ds, double lo, double hi);

// Column indices of `axis` that fall inside [lo, hi].
std::vector<std::size_t> indices_in_range(const WavenumberAxis& axis, double lo, double hi);

// Column selection helper for bare matrices.
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, const std::vector<std::size_t>& indices);
Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& indices);
Eigen::VectorXd select_rows(const Eigen::VectorXd& v, const std::vector<std::size_t>& indices);

}  // namespace spex::spectra
