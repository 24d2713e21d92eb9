#include "pinnsird/pipeline/timeseries.hpp"

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "pinnsird/errors.hpp"
#include "pinnsird/pipeline/csv.hpp"
#include "pinnsird/sird/rk4.hpp"

namespace pinnsird::pipeline {

namespace {

[[noreturn]] void row_error(const csv::Table& t, std::size_t row, const std::string& what) {
  std::ostringstream os;
  os << t.source << ": row " << t.lines[row] << ": " << what;
  throw UsageError(os.str());
}

}  // namespace

void TimeSeriesData::validate() const {
  if (dates.size() != states.size()) {
    throw UsageError("time series: dates and states differ in length");
  }
  for (std::size_t k = 1; k < dates.size(); ++k) {
    if (dates[k] - dates[k - 1] != std::chrono::days{1}) {
      throw UsageError("time series: dates are not consecutive at " + csv::format_date(dates[k]));
    }
  }
  for (std::size_t k = 0; k < states.size(); ++k) {
    try {
      sird::validate(states[k]);
    } catch (const DomainError& e) {
      throw DomainError("time series day " + std::to_string(k) + ": " + e.what());
    }
  }
}

TimeSeriesData TimeSeriesData::slice(std::size_t first, std::size_t count) const {
  if (first + count > size()) {
    throw UsageError("time series slice out of range");
  }
  TimeSeriesData out{region, population, {}, {}};
  out.dates.assign(dates.begin() + static_cast<std::ptrdiff_t>(first),
                   dates.begin() + static_cast<std::ptrdiff_t>(first + count));
  out.states.assign(states.begin() + static_cast<std::ptrdiff_t>(first),
                    states.begin() + static_cast<std::ptrdiff_t>(first + count));
  return out;
}

TimeSeriesData ingest_csv(const std::filesystem::path& path, double population,
                          std::vector<std::string>* warnings, std::string region) {
  if (!(population > 0.0) || !std::isfinite(population)) {
    throw UsageError("population must be positive");
  }
  const csv::Table t = csv::read(path);
  const std::size_t c_date = t.column("date");
  const std::array<std::size_t, 3> c_counts{t.column("cumulative_positive"),
                                            t.column("cumulative_recovered"),
                                            t.column("cumulative_deaths")};
  static constexpr std::array<const char*, 3> kNames{"cumulative_positive",
                                                     "cumulative_recovered", "cumulative_deaths"};
  if (t.rows.empty()) {
    throw UsageError(t.source + ": no data rows");
  }

  TimeSeriesData out;
  out.region = region.empty() ? path.stem().string() : std::move(region);
  out.population = population;

  std::array<double, 3> last{};
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto date = csv::parse_date(row[c_date]);
    if (!date) {
      row_error(t, r, "malformed date '" + row[c_date] + "'");
    }
    if (!out.dates.empty() && *date <= out.dates.back()) {
      row_error(t, r, "dates must be strictly ascending");
    }
    std::array<double, 3> counts{};
    for (std::size_t k = 0; k < 3; ++k) {
      const std::string& field = row[c_counts[k]];
      if (field.empty()) {
        if (r == 0) {
          row_error(t, r, std::string("missing ") + kNames[k] + " on the first row");
        }
        counts[k] = last[k];
        if (warnings != nullptr) {
          warnings->push_back("row " + std::to_string(t.lines[r]) + ": empty " + kNames[k] +
                              ", forward-filled");
        }
        continue;
      }
      const auto v = csv::parse_double(field);
      if (!v || !std::isfinite(*v)) {
        row_error(t, r, std::string("malformed ") + kNames[k] + " '" + field + "'");
      }
      if (*v < 0.0) {
        row_error(t, r, std::string("negative ") + kNames[k]);
      }
      counts[k] = *v;
    }
    const double positive = counts[0];
    const double recovered = counts[1];
    const double deaths = counts[2];
    if (recovered + deaths > positive) {
      row_error(t, r, "recovered + deaths exceed positive (negative infectious compartment)");
    }
    if (positive > population) {
      row_error(t, r, "positive cases exceed the population (negative susceptible compartment)");
    }
    const sird::SirdState s{(population - positive) / population,
                            (positive - recovered - deaths) / population,
                            recovered / population, deaths / population};

    if (!out.dates.empty()) {
      // forward-fill missing calendar days with the previous observation
      for (auto d = out.dates.back() + std::chrono::days{1}; d < *date; d += std::chrono::days{1}) {
        out.dates.push_back(d);
        out.states.push_back(out.states.back());
        if (warnings != nullptr) {
          warnings->push_back("missing day " + csv::format_date(d) + ", forward-filled");
        }
      }
    }
    out.dates.push_back(*date);
    out.states.push_back(s);
    last = counts;
  }
  out.validate();
  return out;
}

std::string to_cumulative_csv(const TimeSeriesData& data) {
  std::string s = "date,cumulative_positive,cumulative_recovered,cumulative_deaths\n";
  const double n = data.population;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& x = data.states[k];
    s += csv::format_date(data.dates[k]) + ',' + csv::format((1.0 - x.S) * n) + ',' +
         csv::format(x.R * n) + ',' + csv::format(x.D * n) + '\n';
  }
  return s;
}

std::string to_fraction_csv(const TimeSeriesData& data) {
  std::string s = "date,S,I,R,D\n";
  for (std::size_t k = 0; k < data.size(); ++k) {
    const auto& x = data.states[k];
    s += csv::format_date(data.dates[k]) + ',' + csv::format(x.S) + ',' + csv::format(x.I) + ',' +
         csv::format(x.R) + ',' + csv::format(x.D) + '\n';
  }
  return s;
}

TimeSeriesData read_fraction_csv(const std::filesystem::path& path, std::string region) {
  const csv::Table t = csv::read(path);
  const std::size_t c_date = t.column("date");
  const std::array<std::size_t, 4> cols{t.column("S"), t.column("I"), t.column("R"),
                                        t.column("D")};
  TimeSeriesData out;
  out.region = region.empty() ? path.stem().string() : std::move(region);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto date = csv::parse_date(t.rows[r][c_date]);
    if (!date) {
      row_error(t, r, "malformed date '" + t.rows[r][c_date] + "'");
    }
    std::array<double, 4> v{};
    for (std::size_t k = 0; k < 4; ++k) {
      const auto x = csv::parse_double(t.rows[r][cols[k]]);
      if (!x) {
        row_error(t, r, "malformed value '" + t.rows[r][cols[k]] + "'");
      }
      v[k] = *x;
    }
    out.dates.push_back(*date);
    out.states.push_back(sird::SirdState::from_array(v));
  }
  if (out.states.empty()) {
    throw UsageError(t.source + ": no data rows");
  }
  out.validate();
  return out;
}

TimeSeriesData generate_synthetic(const SyntheticSpec& spec) {
  if (spec.days < 14) {
    throw UsageError("synthetic series needs at least 14 days");
  }
  if (!(spec.noise >= 0.0)) {
    throw UsageError("noise level must be non-negative");
  }
  try {
    sird::validate(spec.initial);
  } catch (const DomainError& e) {
    throw UsageError(std::string("invalid initial state: ") + e.what());
  }
  const double horizon = static_cast<double>(spec.days - 1);
  const auto traj = sird::rk4_solve(spec.initial, spec.params, spec.step, horizon);

  TimeSeriesData out;
  out.region = "synthetic";
  out.population = 1.0;
  out.states = traj.daily(spec.params.start(), spec.days);
  for (std::size_t d = 0; d < spec.days; ++d) {
    out.dates.push_back(spec.start_date + std::chrono::days{static_cast<int>(d)});
  }
  if (spec.noise > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& s : out.states) {
      auto a = s.as_array();
      double total = 0.0;
      for (double& x : a) {
        x = std::max(0.0, x * (1.0 + spec.noise * normal(rng)));
        total += x;
      }
      for (double& x : a) {
        x /= total;
      }
      s = sird::SirdState::from_array(a);
    }
  }
  return out;
}

RelativeError relative_error(const std::vector<double>& pred, const std::vector<double>& data) {
  if (pred.size() != data.size()) {
    throw UsageError("relative_error: length mismatch");
  }
  RelativeError out;
  out.values.reserve(pred.size());
  out.guarded.reserve(pred.size());
  for (std::size_t k = 0; k < pred.size(); ++k) {
    const double denom = std::fabs(data[k]);
    const bool guard = denom < kRelativeErrorGuard;
    out.values.push_back(std::fabs(pred[k] - data[k]) / (guard ? kRelativeErrorGuard : denom));
    out.guarded.push_back(guard);
  }
  return out;
}

std::array<RelativeError, 4> relative_error(const std::vector<sird::SirdState>& pred,
                                            const std::vector<sird::SirdState>& data) {
  if (pred.size() != data.size()) {
    throw UsageError("relative_error: length mismatch");
  }
  std::array<RelativeError, 4> out;
  for (std::size_t c = 0; c < 4; ++c) {
    std::vector<double> p;
    std::vector<double> d;
    for (std::size_t k = 0; k < pred.size(); ++k) {
      p.push_back(pred[k][c]);
      d.push_back(data[k][c]);
    }
    out[c] = relative_error(p, d);
  }
  return out;
}

}  // namespace pinnsird::pipeline
