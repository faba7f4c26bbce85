#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "spex/spectra/dataset.h"

namespace spex::spectra {

enum class LoadErrorKind {
  kIo,
  kNonMonotonicAxis,
  kRowWidthMismatch,
  kNonNumericCell,
  kMissingResponse,
  kMissingColumn,
  kEmpty,
};

const char* load_error_name(LoadErrorKind kind);

class LoadError : public std::runtime_error {
 public:
  LoadError(LoadErrorKind kind, const std::string& message);
  LoadErrorKind kind() const { return kind_; }

 private:
  LoadErrorKind kind_;
};

// Names of the metadata columns. Every other header cell must parse as a
// wavenumber. Only the response column is mandatory; absent batch/id columns
// default to "old" and the row number.
struct ColumnSchema {
  std::string response = "cn";
  std::string batch = "batch";
  std::string sample_id = "sample_id";
  std::string replicate_id = "replicate_id";
};

SpectraDataset load_dataset(const std::filesystem::path& path, const ColumnSchema& schema = {});
SpectraDataset parse_dataset(const std::string& text, const ColumnSchema& schema = {},
                             const std::string& origin = "<memory>");

void save_dataset(const std::filesystem::path& path, const SpectraDataset& ds,
                  const ColumnSchema& schema = {});
std::string format_dataset(const SpectraDataset& ds, const ColumnSchema& schema = {});

// One wavenumber per line; blank lines and lines starting with '#' are ignored.
std::vector<double> load_wavenumber_list(const std::filesystem::path& path);
void save_wavenumber_list(const std::filesystem::path& path, const std::vector<double>& values,
                          const std::string& header_comment = "");

// Shortest round-trippable decimal representation.
std::string format_double(double v);

}  // namespace spex::spectra
