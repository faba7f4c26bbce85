#include "spex/spectra/dataset.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spex::spectra {

std::size_t WavenumberAxis::nearest_index(double wavenumber) const {
  if (values.empty()) throw std::invalid_argument("nearest_index on empty axis");
  auto it = std::lower_bound(values.begin(), values.end(), wavenumber);
  if (it == values.begin()) return 0;
  if (it == values.end()) return values.size() - 1;
  const auto hi = static_cast<std::size_t>(it - values.begin());
  return (values[hi] - wavenumber) < (wavenumber - values[hi - 1]) ? hi : hi - 1;
}

void WavenumberAxis::validate() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw std::invalid_argument("axis contains a non-finite value");
    if (i > 0 && !(values[i] > values[i - 1])) {
      std::ostringstream msg;
      msg << "axis is not strictly increasing at position " << i << " (" << values[i - 1]
          << " then " << values[i] << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  if (!(resolution > 0.0)) throw std::invalid_argument("axis resolution must be positive");
}

const char* batch_name(Batch b) { return b == Batch::kOld ? "old" : "new"; }

Batch parse_batch(const std::string& s) {
  if (s == "old" || s == "0") return Batch::kOld;
  if (s == "new" || s == "1") return Batch::kNew;
  throw std::invalid_argument("unknown batch label '" + s + "'");
}

void SpectraDataset::validate() const {
  axis.validate();
  const auto n = static_cast<std::size_t>(intensities.rows());
  if (static_cast<std::size_t>(intensities.cols()) != axis.size()) {
    throw std::invalid_argument("intensity column count does not match axis length");
  }
  if (static_cast<std::size_t>(response.size()) != n || batch.size() != n ||
      sample_id.size() != n || replicate_id.size() != n) {
    throw std::invalid_argument("row count mismatch between intensities and per-row fields");
  }
  if (!intensities.allFinite()) throw std::invalid_argument("intensities contain non-finite values");
  if (!response.allFinite()) throw std::invalid_argument("response contains non-finite values");
}

SpectraDataset SpectraDataset::rows(const std::vector<std::size_t>& indices) const {
  SpectraDataset out;
  out.axis = axis;
  out.intensities = select_rows(intensities, indices);
  out.response = select_rows(response, indices);
  out.batch.reserve(indices.size());
  out.sample_id.reserve(indices.size());
  out.replicate_id.reserve(indices.size());
  for (auto i : indices) {
    out.batch.push_back(batch.at(i));
    out.sample_id.push_back(sample_id.at(i));
    out.replicate_id.push_back(replicate_id.at(i));
  }
  return out;
}

SpectraDataset SpectraDataset::columns(const std::vector<std::size_t>& indices) const {
  SpectraDataset out = *this;
  out.axis.values.clear();
  out.axis.values.reserve(indices.size());
  for (auto j : indices) out.axis.values.push_back(axis.values.at(j));
  out.intensities = select_columns(intensities, indices);
  return out;
}

SpectraDataset concat(const SpectraDataset& a, const SpectraDataset& b) {
  if (a.axis.values != b.axis.values) throw std::invalid_argument("concat: axes differ");
  SpectraDataset out;
  out.axis = a.axis;
  out.intensities.resize(a.intensities.rows() + b.intensities.rows(), a.intensities.cols());
  out.intensities << a.intensities, b.intensities;
  out.response.resize(a.response.size() + b.response.size());
  out.response << a.response, b.response;
  out.batch = a.batch;
  out.batch.insert(out.batch.end(), b.batch.begin(), b.batch.end());
  out.sample_id = a.sample_id;
  out.sample_id.insert(out.sample_id.end(), b.sample_id.begin(), b.sample_id.end());
  out.replicate_id = a.replicate_id;
  out.replicate_id.insert(out.replicate_id.end(), b.replicate_id.begin(), b.replicate_id.end());
  return out;
}

std::vector<std::size_t> indices_in_range(const WavenumberAxis& axis, double lo, double hi) {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < axis.size(); ++j) {
    if (axis.values[j] >= lo && axis.values[j] <= hi) keep.push_back(j);
  }
  return keep;
}

SpectraDataset trim_axis(const SpectraDataset& ds, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("trim_axis requires lo < hi");
  auto keep = indices_in_range(ds.axis, lo, hi);
  if (keep.empty()) throw std::invalid_argument("trim_axis retains no features");
  return ds.columns(keep);
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& x, const std::vector<std::size_t>& indices) {
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = x.col(static_cast<Eigen::Index>(indices[k]));
  }
  return out;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& x, const std::vector<std::size_t>& indices) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(indices.size()), x.cols());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = x.row(static_cast<Eigen::Index>(indices[k]));
  }
  return out;
}

Eigen::VectorXd select_rows(const Eigen::VectorXd& v, const std::vector<std::size_t>& indices) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = v(static_cast<Eigen::Index>(indices[k]));
  }
  return out;
}

}  // namespace spex::spectra
