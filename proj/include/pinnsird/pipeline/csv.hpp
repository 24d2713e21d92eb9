#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pinnsird::csv {

/// Shortest decimal text that parses back to exactly `x`.
std::string format(double x);

std::vector<std::string> split(std::string_view line, char sep = ',');

/// Strict parse of a full field; nullopt on garbage or trailing characters.
std::optional<double> parse_double(std::string_view field);
std::optional<std::chrono::sys_days> parse_date(std::string_view field);
std::string format_date(std::chrono::sys_days d);

/// Header row plus data rows, with the 1-based file line of each data row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;

  /// Column index by name; throws UsageError naming the file if absent.
  std::size_t column(std::string_view name) const;
  std::string source;
};

/// Reads a comma-separated file; blank lines are skipped, CR stripped.
Table read(const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pinnsird::csv
