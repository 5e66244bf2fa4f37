#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "stdpgen/bayesopt.hpp"

namespace stdpgen {

/// One JSON object per line. NaN objectives are written as null.
std::string trial_to_json(const Trial& t);
Trial trial_from_json(const std::string& line);

void write_trial_log(std::ostream& out, const std::vector<Trial>& trials);
void write_trial_log(const std::filesystem::path& path, const std::vector<Trial>& trials);

/// Appends one record and flushes.
void append_trial(std::ostream& out, const Trial& t);

/// Blank lines are skipped; malformed lines throw Error(kDataFormat) with the
/// line number.
std::vector<Trial> read_trial_log(std::istream& in);
std::vector<Trial> read_trial_log(const std::filesystem::path& path);

}  // namespace stdpgen
