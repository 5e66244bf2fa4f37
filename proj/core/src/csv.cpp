#include "stdpgen/csv.hpp"

#include <cmath>
#include <cstdio>

#include "stdpgen/errors.hpp"

namespace stdpgen {

std::string_view library_version() noexcept { return STDPGEN_VERSION; }

std::string output_header(std::uint64_t seed, std::string_view config_inline) {
  std::string h = "# stdpgen ";
  h += library_version();
  h += " seed=" + std::to_string(seed) + " config=";
  for (char c : config_inline) h += c == '\n' ? ' ' : c;
  return h;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace {
std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}
}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path, std::string_view header,
                     const std::vector<std::string>& columns)
    : path_(path), out_(path), columns_(columns.size()) {
  if (!out_) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  if (!header.empty()) out_ << header << '\n';
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw InvalidArgument("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                                                      std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quote(cells[i]);
  out_ << '\n';
  if (!out_) throw Error(ErrorCode::kIo, "write failed: " + path_.string());
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw Error(ErrorCode::kIo, "close failed: " + path_.string());
}

}  // namespace stdpgen
