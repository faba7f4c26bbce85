#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "spex/common/random.h"
#include "spex/spectra/synthetic.h"

namespace spex::test {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double sd = 1.0) {
  Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal(0.0, sd);
  }
  return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed, double sd = 1.0) {
  return random_matrix(n, 1, seed, sd).col(0);
}

// Fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("spex_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Small synthetic setup for fast harness tests.
inline spectra::SynthConfig small_synth(std::size_t m = 120, std::size_t n_old = 40, std::size_t n_new = 20) {
  auto cfg = spectra::SynthConfig::defaults();
  cfg.m_features = m;
  cfg.n_old = n_old;
  cfg.n_new = n_new;
  return cfg;
}

}  // namespace spex::test
