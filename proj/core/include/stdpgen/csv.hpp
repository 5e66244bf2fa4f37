#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace stdpgen {

std::string_view library_version() noexcept;

/// "# stdpgen <version> seed=<seed> config=<config>"
std::string output_header(std::uint64_t seed, std::string_view config_inline);

/// %.10g; non-finite values print as nan / inf / -inf.
std::string format_number(double v);

/// Comma-separated output file with a leading comment header line. Cells
/// containing commas or quotes are quoted.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::string_view header, const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);
  void close();

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
};

}  // namespace stdpgen
