#include "pinnsird/pipeline/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pinnsird/errors.hpp"

namespace pinnsird::csv {

std::string format(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

std::optional<double> parse_double(std::string_view field) {
  if (field.empty()) {
    return std::nullopt;
  }
  if (field.front() == '+') {
    field.remove_prefix(1);
  }
  double x = 0.0;
  const auto r = std::from_chars(field.data(), field.data() + field.size(), x);
  if (r.ec != std::errc() || r.ptr != field.data() + field.size()) {
    return std::nullopt;
  }
  return x;
}

std::optional<std::chrono::sys_days> parse_date(std::string_view field) {
  int y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (field.size() != 10 || field[4] != '-' || field[7] != '-') {
    return std::nullopt;
  }
  auto num = [&](std::size_t pos, std::size_t len, auto& out) {
    const auto r = std::from_chars(field.data() + pos, field.data() + pos + len, out);
    return r.ec == std::errc() && r.ptr == field.data() + pos + len;
  };
  if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) {
    return std::nullopt;
  }
  return std::chrono::sys_days{ymd};
}

std::string format_date(std::chrono::sys_days d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) {
      return k;
    }
  }
  throw UsageError(source + ": missing column '" + std::string(name) + "'");
}

Table read(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw UsageError("cannot open " + path.string());
  }
  Table t;
  t.source = path.string();
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) {
      line.erase(0, 3);
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      continue;
    }
    if (!have_header) {
      t.header = split(line);
      have_header = true;
      continue;
    }
    auto fields = split(line);
    if (fields.size() != t.header.size()) {
      std::ostringstream os;
      os << t.source << ": row " << lineno << ": expected " << t.header.size()
         << " fields, found " << fields.size();
      throw UsageError(os.str());
    }
    t.rows.push_back(std::move(fields));
    t.lines.push_back(lineno);
  }
  if (!have_header) {
    throw UsageError(t.source + ": empty file");
  }
  return t;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw UsageError("cannot write " + path.string());
  }
  os << text;
  if (!os) {
    throw UsageError("write failed: " + path.string());
  }
}

}  // namespace pinnsird::csv
