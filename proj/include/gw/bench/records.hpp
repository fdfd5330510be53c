#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gw::bench {

inline constexpr std::string_view kCsvHeader =
    "run_id,label,game_seed,iteration,wall_ns,metric,value,weight";

struct RunRecord {
  long run_id = 0;
  std::string label;
  std::uint64_t game_seed = 0;
  long iteration = 0;
  std::int64_t wall_ns = 0;
  std::string metric;
  double value = 0.0;
  double weight = 1.0;  // chosen weight relative to the running mean

  bool operator==(const RunRecord&) const = default;
};

// Labels and metric names may not contain commas, quotes or line breaks.
// Doubles use %.17g, so parse(emit(records)) == records.
void write_csv(std::ostream& out, std::span<const RunRecord> records);
std::string to_csv(std::span<const RunRecord> records);
std::vector<RunRecord> parse_csv(std::istream& in);
std::vector<RunRecord> parse_csv(const std::string& text);
void write_csv_file(const std::filesystem::path& path, std::span<const RunRecord> records);
std::vector<RunRecord> read_csv_file(const std::filesystem::path& path);

// Checks a label or metric name is safe to emit unquoted.
bool is_csv_safe(std::string_view field) noexcept;

}  // namespace gw::bench
