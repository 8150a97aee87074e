#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radviz3d/dataset.hpp"

namespace radviz {

struct CsvOptions {
  std::optional<std::string> label_column;
  std::optional<std::string> id_column;
  std::vector<std::string> drop_columns;  // skipped entirely, not parsed
};

// Header row required. Every column other than the label/id/dropped ones is
// a numeric feature; a cell that does not parse as a finite number raises
// ParseError naming its row and column.
DataSet read_csv(std::istream& in, const CsvOptions& options = {});
DataSet load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Writes id, features..., label with shortest round-trip numbers.
void write_csv(std::ostream& out, const DataSet& data, std::string_view id_column = "id",
               std::string_view label_column = "label");

// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_line(std::string_view line);

// Quotes a field when it contains a delimiter, quote or newline.
std::string csv_field(std::string_view text);

// Shortest decimal that reads back to the same double.
std::string format_double(double v);

// Writes to a sibling temp file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace radviz
