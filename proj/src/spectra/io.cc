#include "spex/spectra/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace spex::spectra {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

// Finite decimal number or nothing. "nan"/"inf" spellings are rejected.
std::optional<double> parse_finite(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string where(const std::string& origin, std::size_t line_no) {
  return origin + ":" + std::to_string(line_no) + ": ";
}

}  // namespace

const char* load_error_name(LoadErrorKind kind) {
  switch (kind) {
    case LoadErrorKind::kIo: return "io";
    case LoadErrorKind::kNonMonotonicAxis: return "non_monotonic_axis";
    case LoadErrorKind::kRowWidthMismatch: return "row_width_mismatch";
    case LoadErrorKind::kNonNumericCell: return "non_numeric_cell";
    case LoadErrorKind::kMissingResponse: return "missing_response";
    case LoadErrorKind::kMissingColumn: return "missing_column";
    case LoadErrorKind::kEmpty: return "empty";
  }
  return "unknown";
}

LoadError::LoadError(LoadErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(load_error_name(kind)) + ": " + message), kind_(kind) {}

SpectraDataset parse_dataset(const std::string& text, const ColumnSchema& schema,
                             const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  // Header.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto cell : split_csv(line)) header.emplace_back(cell);
    break;
  }
  if (header.empty()) throw LoadError(LoadErrorKind::kEmpty, origin + ": no header row");

  std::vector<std::size_t> feature_cols;
  long response_col = -1, batch_col = -1, sample_col = -1, replicate_col = -1;
  WavenumberAxis axis;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto& name = header[c];
    if (name == schema.response) {
      response_col = static_cast<long>(c);
    } else if (name == schema.batch) {
      batch_col = static_cast<long>(c);
    } else if (name == schema.sample_id) {
      sample_col = static_cast<long>(c);
    } else if (name == schema.replicate_id) {
      replicate_col = static_cast<long>(c);
    } else if (auto w = parse_finite(name)) {
      if (!axis.values.empty() && !(*w > axis.values.back())) {
        throw LoadError(LoadErrorKind::kNonMonotonicAxis,
                        where(origin, line_no) + "header wavenumber '" + name +
                            "' does not increase over the previous column");
      }
      axis.values.push_back(*w);
      feature_cols.push_back(c);
    } else {
      throw LoadError(LoadErrorKind::kNonNumericCell,
                      where(origin, line_no) + "header cell '" + name +
                          "' is neither a wavenumber nor a known column");
    }
  }
  if (response_col < 0) {
    throw LoadError(LoadErrorKind::kMissingColumn,
                    origin + ": response column '" + schema.response + "' not found");
  }
  if (feature_cols.empty()) {
    throw LoadError(LoadErrorKind::kEmpty, origin + ": header carries no wavenumber columns");
  }

  std::vector<std::vector<double>> rows;
  std::vector<double> responses;
  SpectraDataset ds;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw LoadError(LoadErrorKind::kRowWidthMismatch,
                      where(origin, line_no) + "expected " + std::to_string(header.size()) +
                          " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(feature_cols.size());
    for (auto c : feature_cols) {
      auto v = parse_finite(cells[c]);
      if (!v) {
        throw LoadError(LoadErrorKind::kNonNumericCell,
                        where(origin, line_no) + "cell '" + std::string(cells[c]) + "' in column " +
                            header[c] + " is not a finite number");
      }
      row.push_back(*v);
    }
    rows.push_back(std::move(row));

    const auto response_cell = cells[static_cast<std::size_t>(response_col)];
    if (response_cell.empty()) {
      throw LoadError(LoadErrorKind::kMissingResponse,
                      where(origin, line_no) + "response cell is empty");
    }
    auto y = parse_finite(response_cell);
    if (!y) {
      throw LoadError(LoadErrorKind::kNonNumericCell,
                      where(origin, line_no) + "response '" + std::string(response_cell) +
                          "' is not a finite number");
    }
    responses.push_back(*y);

    if (batch_col >= 0) {
      try {
        ds.batch.push_back(parse_batch(std::string(cells[static_cast<std::size_t>(batch_col)])));
      } catch (const std::invalid_argument& e) {
        throw LoadError(LoadErrorKind::kNonNumericCell, where(origin, line_no) + e.what());
      }
    } else {
      ds.batch.push_back(Batch::kOld);
    }
    const std::string row_name = std::to_string(rows.size() - 1);
    ds.sample_id.emplace_back(sample_col >= 0 ? std::string(cells[static_cast<std::size_t>(sample_col)])
                                              : row_name);
    ds.replicate_id.emplace_back(
        replicate_col >= 0 ? std::string(cells[static_cast<std::size_t>(replicate_col)]) : "0");
  }

  ds.axis = std::move(axis);
  ds.response = Eigen::Map<const Eigen::VectorXd>(responses.data(),
                                                  static_cast<Eigen::Index>(responses.size()));
  ds.intensities.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(feature_cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      ds.intensities(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  ds.validate();
  return ds;
}

SpectraDataset load_dataset(const std::filesystem::path& path, const ColumnSchema& schema) {
  std::ifstream in(path);
  if (!in) throw LoadError(LoadErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str(), schema, path.string());
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_dataset(const SpectraDataset& ds, const ColumnSchema& schema) {
  std::string out;
  for (double w : ds.axis.values) {
    out += format_double(w);
    out += ',';
  }
  out += schema.response + "," + schema.batch + "," + schema.sample_id + "," + schema.replicate_id + "\n";
  for (Eigen::Index i = 0; i < ds.intensities.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.intensities.cols(); ++j) {
      out += format_double(ds.intensities(i, j));
      out += ',';
    }
    const auto r = static_cast<std::size_t>(i);
    out += format_double(ds.response(i)) + "," + batch_name(ds.batch[r]) + "," + ds.sample_id[r] +
           "," + ds.replicate_id[r] + "\n";
  }
  return out;
}

void save_dataset(const std::filesystem::path& path, const SpectraDataset& ds,
                  const ColumnSchema& schema) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_dataset(ds, schema);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<double> load_wavenumber_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(LoadErrorKind::kIo, "cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    // Tolerate the two-column ranking format: take the first cell.
    const auto comma = t.find(',');
    if (comma != std::string_view::npos) t = trim(t.substr(0, comma));
    auto v = parse_finite(t);
    if (!v) {
      throw LoadError(LoadErrorKind::kNonNumericCell,
                      where(path.string(), line_no) + "'" + std::string(t) + "' is not a wavenumber");
    }
    values.push_back(*v);
  }
  return values;
}

void save_wavenumber_list(const std::filesystem::path& path, const std::vector<double>& values,
                          const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  for (double v : values) out << format_double(v) << "\n";
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace spex::spectra
