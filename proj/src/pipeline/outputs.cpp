#include "pinnsird/pipeline/outputs.hpp"

#include <algorithm>
#include <cmath>

#include "pinnsird/errors.hpp"
#include "pinnsird/pipeline/csv.hpp"

namespace pinnsird::pipeline {
namespace {

using csv::format;

std::string join(std::initializer_list<std::string> fields) {
  std::string out;
  for (const auto& f : fields) {
    if (!out.empty()) {
      out += ',';
    }
    out += f;
  }
  return out + '\n';
}

double field(const csv::Table& table, std::size_t row, std::size_t col) {
  const auto v = csv::parse_double(table.rows[row][col]);
  if (!v) {
    throw UsageError(table.source + ": row " + std::to_string(table.lines[row]) +
                     ": malformed number '" + table.rows[row][col] + "'");
  }
  return *v;
}

std::optional<std::size_t> find_column(const csv::Table& table, std::string_view name) {
  const auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end()) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - table.header.begin());
}

sird::ParamTriple params_row(const csv::Table& table, std::size_t row) {
  return {field(table, row, table.column("beta")), field(table, row, table.column("gamma")),
          field(table, row, table.column("mu"))};
}

}  // namespace

std::string daily_fit_csv(const ident::DailyFitResult& fit) {
  std::string out = "day,S_fit,I_fit,R_fit,D_fit,dI_fit,beta,gamma,mu\n";
  for (std::size_t d = 0; d < fit.days.size(); ++d) {
    const auto& s = fit.fitted[d];
    const auto p = fit.params.at(fit.days[d]);
    out += join({format(fit.days[d]), format(s.S), format(s.I), format(s.R), format(s.D),
                 format(fit.rates[d].I), format(p.beta), format(p.gamma), format(p.mu)});
  }
  return out;
}

std::string weekly_params_csv(const ident::WeeklyParams& weekly) {
  std::string out = "week,beta,gamma,mu,ob_loss,ge_loss\n";
  for (std::size_t w = 0; w < weekly.weeks(); ++w) {
    const auto& p = weekly.params[w];
    const auto& l = weekly.losses[w];
    out += join({std::to_string(w), format(p.beta), format(p.gamma), format(p.mu), format(l.ob),
                 format(l.ge)});
  }
  return out;
}

std::string weekly_fit_csv(const ident::WeeklyParams& weekly) {
  std::string out = "day,S_fit,I_fit,R_fit,D_fit,dI_fit\n";
  for (const auto& fit : weekly.fits) {
    for (std::size_t k = 0; k < fit.raw_times.size(); ++k) {
      const auto& s = fit.fitted[k];
      out += join({format(fit.raw_times[k]), format(s.S), format(s.I), format(s.R), format(s.D),
                   format(fit.rates[k].I)});
    }
  }
  return out;
}

std::string simulation_csv(std::span<const double> times, std::span<const sird::SirdState> states) {
  if (times.size() != states.size()) {
    throw UsageError("simulation_csv: times and states differ in length");
  }
  std::string out = "t,S,I,R,D\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto& s = states[k];
    out += join({format(times[k]), format(s.S), format(s.I), format(s.R), format(s.D)});
  }
  return out;
}

std::vector<ReproductionRow> daily_reproduction(const ident::DailyFitResult& fit) {
  std::vector<ReproductionRow> rows;
  for (std::size_t d = 0; d < fit.days.size(); ++d) {
    const auto p = fit.params.at(fit.days[d]);
    const double s = fit.fitted[d].S;
    rows.push_back({fit.days[d], p, s, fit.fitted[d].I, fit.rates[d].I,
                    sird::effective_reproduction_number(p, s)});
  }
  return rows;
}

std::vector<ReproductionRow> weekly_reproduction(const ident::WeeklyParams& weekly) {
  constexpr std::size_t kMidpoint = ident::kDaysPerWeek / 2;
  std::vector<ReproductionRow> rows;
  for (std::size_t w = 0; w < weekly.weeks(); ++w) {
    const auto& fit = weekly.fits[w];
    const auto& mid = fit.fitted.at(kMidpoint);
    const auto& p = weekly.params[w];
    rows.push_back({fit.raw_times.at(kMidpoint), p, mid.S, mid.I, fit.rates.at(kMidpoint).I,
                    sird::effective_reproduction_number(p, mid.S)});
  }
  return rows;
}

std::string reproduction_csv(std::span<const ReproductionRow> rows) {
  std::string out = "t,beta,gamma,mu,Re\n";
  for (const auto& r : rows) {
    out += join({format(r.t), format(r.params.beta), format(r.params.gamma), format(r.params.mu),
                 format(r.re)});
  }
  return out;
}

ThresholdAgreement threshold_agreement(std::span<const ReproductionRow> rows,
                                       double min_infected, double margin) {
  ThresholdAgreement a;
  for (const auto& r : rows) {
    if (r.i_fit <= min_infected) {
      continue;
    }
    const bool agree = (r.di_fit > 0.0) == (r.re > 1.0);
    ++a.checked;
    a.agree += agree ? 1 : 0;
    if (std::abs(r.re - 1.0) > margin) {
      ++a.decisive;
      a.decisive_agree += agree ? 1 : 0;
    }
  }
  return a;
}

std::string relative_error_csv(std::size_t first_day, const std::array<RelativeError, 4>& err) {
  static constexpr std::array<const char*, 4> kNames{"S", "I", "R", "D"};
  std::string out = "day,S,I,R,D,guarded\n";
  for (std::size_t d = 0; d < err[0].values.size(); ++d) {
    std::string guarded;
    for (std::size_t c = 0; c < 4; ++c) {
      if (err[c].guarded[d]) {
        guarded += guarded.empty() ? kNames[c] : std::string(";") + kNames[c];
      }
    }
    out += join({std::to_string(first_day + d), format(err[0].values[d]), format(err[1].values[d]),
                 format(err[2].values[d]), format(err[3].values[d]), guarded});
  }
  return out;
}

ErrorSummary summarize(const std::array<RelativeError, 4>& err, std::size_t from) {
  ErrorSummary s;
  std::vector<double> all;
  for (std::size_t c = 0; c < 4; ++c) {
    for (std::size_t d = from; d < err[c].values.size(); ++d) {
      all.push_back(err[c].values[d]);
      s.max_per_compartment[c] = std::max(s.max_per_compartment[c], err[c].values[d]);
      s.guarded += err[c].guarded[d] ? 1 : 0;
    }
  }
  if (all.empty()) {
    return s;
  }
  s.max = *std::max_element(all.begin(), all.end());
  std::sort(all.begin(), all.end());
  const std::size_t n = all.size();
  s.median = n % 2 == 1 ? all[n / 2] : 0.5 * (all[n / 2 - 1] + all[n / 2]);
  return s;
}

sird::ParamTrajectory read_params_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path);
  if (table.rows.empty()) {
    throw UsageError(path.string() + ": no rate rows");
  }
  std::vector<sird::ParamTriple> values;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    values.push_back(params_row(table, r));
  }
  if (const auto week = find_column(table, "week")) {
    std::vector<double> starts;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      starts.push_back(field(table, r, *week) * static_cast<double>(ident::kDaysPerWeek));
    }
    const double end = starts.back() + static_cast<double>(ident::kDaysPerWeek);
    return sird::ParamTrajectory::piecewise_constant(std::move(starts), std::move(values), end);
  }
  auto time = find_column(table, "day");
  if (!time) {
    time = find_column(table, "t");
  }
  if (!time) {
    throw UsageError(path.string() + ": rate table needs a week, day or t column");
  }
  std::vector<double> grid;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    grid.push_back(field(table, r, *time));
  }
  return sird::ParamTrajectory::piecewise_linear(std::move(grid), std::move(values));
}

std::vector<sird::ParamTriple> read_weekly_params_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path);
  const std::size_t week = table.column("week");
  std::vector<sird::ParamTriple> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (r > 0 && field(table, r, week) != field(table, r - 1, week) + 1.0) {
      throw UsageError(path.string() + ": row " + std::to_string(table.lines[r]) +
                       ": weeks must be consecutive");
    }
    out.push_back(params_row(table, r));
  }
  return out;
}

FittedSeries read_fit_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read(path);
  const std::size_t day = table.column("day");
  const std::array<std::size_t, 4> cols{table.column("S_fit"), table.column("I_fit"),
                                        table.column("R_fit"), table.column("D_fit")};
  FittedSeries out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out.days.push_back(field(table, r, day));
    out.states.push_back({field(table, r, cols[0]), field(table, r, cols[1]),
                          field(table, r, cols[2]), field(table, r, cols[3])});
  }
  return out;
}

std::string params_csv(const sird::ParamTrajectory& params, std::size_t days) {
  std::string out = "t,beta,gamma,mu\n";
  for (std::size_t d = 0; d < days; ++d) {
    const double t = params.start() + static_cast<double>(d);
    const auto p = params.at(t);
    out += join({format(t), format(p.beta), format(p.gamma), format(p.mu)});
  }
  return out;
}

}  // namespace pinnsird::pipeline
