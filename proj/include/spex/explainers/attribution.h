#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spex/models/regressor.h"
#include "spex/spectra/dataset.h"

namespace spex::explainers {

struct Attribution {
  std::size_t instance_id = 0;
  Eigen::VectorXd values;
  double base_value = 0.0;
  double model_output = 0.0;
  // Weighted R^2 of the local surrogate (LIME only).
  double local_r2 = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;
};

// Rows of x drawn proportionally from `strata` quantile strata of f(x).
// Rows with equal outputs share a stratum; every occupied stratum receives at
// least one pick when n allows. Returned indices are ascending.
std::vector<std::size_t> stratified_background(const Eigen::MatrixXd& x, const models::Regressor& f,
                                               std::size_t n, std::uint64_t seed, std::size_t strata = 5);

// Long-format table: instance_id,wavenumber,value.
void write_attributions(const std::filesystem::path& path, const std::vector<Attribution>& attrs,
                        const spectra::WavenumberAxis& axis);

}  // namespace spex::explainers
