#include "radviz3d/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "radviz3d/error.hpp"

namespace radviz {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw MissingColumn("column '" + name + "' not found in header");
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw InputError("unterminated quote in CSV record");
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericError("cannot format number");
  return std::string(buf, ptr);
}

DataSet read_csv(std::istream& in, const CsvOptions& options) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("CSV is empty");
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = std::string(trim(h));

  std::optional<std::size_t> label_col;
  std::optional<std::size_t> id_col;
  if (options.label_column) label_col = find_column(header, *options.label_column);
  if (options.id_column) id_col = find_column(header, *options.id_column);
  std::vector<bool> skip(header.size(), false);
  for (const auto& name : options.drop_columns) skip[find_column(header, name)] = true;

  std::vector<std::size_t> feature_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (skip[c] || c == label_col || c == id_col) continue;
    feature_cols.push_back(c);
    names.push_back(header[c]);
  }
  if (feature_cols.size() < 3)
    throw TooFewFeatures("need at least 3 numeric feature columns, found " + std::to_string(feature_cols.size()));

  std::vector<double> cells;
  std::vector<std::string> labels;
  std::vector<std::string> ids;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError(row, "*", "expected " + std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
    for (std::size_t c : feature_cols) {
      const auto v = parse_number(fields[c]);
      if (!v) throw ParseError(row, header[c], "'" + fields[c] + "' is not a finite number");
      cells.push_back(*v);
    }
    if (label_col) labels.emplace_back(trim(fields[*label_col]));
    if (id_col) ids.emplace_back(trim(fields[*id_col]));
  }
  if (row == 0) throw InputError("CSV has no data rows");

  const auto p = static_cast<Eigen::Index>(feature_cols.size());
  Eigen::MatrixXd values(static_cast<Eigen::Index>(row), p);
  for (Eigen::Index i = 0; i < values.rows(); ++i)
    for (Eigen::Index j = 0; j < p; ++j) values(i, j) = cells[static_cast<std::size_t>(i * p + j)];
  DataSet data = make_dataset(std::move(values), std::move(names), std::move(labels), std::move(ids));
  data.validate();
  return data;
}

DataSet load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return read_csv(in, options);
}

void write_csv(std::ostream& out, const DataSet& data, std::string_view id_column, std::string_view label_column) {
  out << csv_field(id_column);
  for (const auto& name : data.feature_names) out << ',' << csv_field(name);
  out << ',' << csv_field(label_column) << '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out << csv_field(data.row_ids[i]);
    for (std::size_t j = 0; j < data.features(); ++j)
      out << ',' << format_double(data.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    out << ',' << csv_field(data.labels[i]) << '\n';
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace radviz
