#include "gw/bench/records.hpp"

#include <cerrno>
#include <cmath>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gw/error.hpp"

namespace gw::bench {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
T parse_integer(const std::string& field, std::size_t line, const char* name) {
  errno = 0;
  char* end = nullptr;
  T out;
  if constexpr (std::is_signed_v<T>) {
    out = static_cast<T>(std::strtoll(field.c_str(), &end, 10));
  } else {
    require(field.empty() || field[0] != '-', ErrorCategory::config,
            "csv line " + std::to_string(line) + ": negative " + name);
    out = static_cast<T>(std::strtoull(field.c_str(), &end, 10));
  }
  // Subnormal results set ERANGE but are exact round-trips of %.17g output.
  const bool range_ok = errno == 0 || (errno == ERANGE && std::isfinite(out) && out != 0.0);
  require(!field.empty() && range_ok && end && *end == '\0', ErrorCategory::config,
          "csv line " + std::to_string(line) + ": bad " + name + " '" + field + "'");
  return out;
}

double parse_real(const std::string& field, std::size_t line, const char* name) {
  errno = 0;
  char* end = nullptr;
  const double out = std::strtod(field.c_str(), &end);
  // Subnormal results set ERANGE but are exact round-trips of %.17g output.
  const bool range_ok = errno == 0 || (errno == ERANGE && std::isfinite(out) && out != 0.0);
  require(!field.empty() && range_ok && end && *end == '\0', ErrorCategory::config,
          "csv line " + std::to_string(line) + ": bad " + name + " '" + field + "'");
  return out;
}

}  // namespace

bool is_csv_safe(std::string_view field) noexcept {
  return field.find_first_of(",\"\r\n") == std::string_view::npos;
}

void write_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    require(is_csv_safe(r.label) && is_csv_safe(r.metric), ErrorCategory::invalid_argument,
            "csv fields may not contain commas, quotes or line breaks");
    out << r.run_id << ',' << r.label << ',' << r.game_seed << ',' << r.iteration << ','
        << r.wall_ns << ',' << r.metric << ',' << format_double(r.value) << ','
        << format_double(r.weight) << '\n';
  }
}

std::string to_csv(std::span<const RunRecord> records) {
  std::ostringstream out;
  write_csv(out, records);
  return out.str();
}

std::vector<RunRecord> parse_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCategory::config, "csv is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kCsvHeader, ErrorCategory::config, "csv header mismatch: '" + line + "'");
  std::vector<RunRecord> out;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    require(fields.size() == 8, ErrorCategory::config,
            "csv line " + std::to_string(number) + ": expected 8 fields");
    RunRecord r;
    r.run_id = parse_integer<long>(fields[0], number, "run_id");
    r.label = fields[1];
    r.game_seed = parse_integer<std::uint64_t>(fields[2], number, "game_seed");
    r.iteration = parse_integer<long>(fields[3], number, "iteration");
    r.wall_ns = parse_integer<std::int64_t>(fields[4], number, "wall_ns");
    r.metric = fields[5];
    r.value = parse_real(fields[6], number, "value");
    r.weight = parse_real(fields[7], number, "weight");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

void write_csv_file(const std::filesystem::path& path, std::span<const RunRecord> records) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCategory::io, "cannot write " + path.string());
  write_csv(out, records);
  require(static_cast<bool>(out), ErrorCategory::io, "failed writing " + path.string());
}

std::vector<RunRecord> read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCategory::io, "cannot read " + path.string());
  return parse_csv(in);
}

}  // namespace gw::bench
