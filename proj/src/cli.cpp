#include "fso/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "fso/montecarlo.hpp"
#include "fso/quadrature.hpp"

namespace fso {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

}  // namespace

std::optional<std::uint64_t> parse_count(std::string_view s) {
  s = trim(s);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return value;
  // Accept integral values written in scientific notation, e.g. 1e7.
  if (const auto d = to_double(s); d && *d >= 0.0 && *d < 1.8e19 && std::floor(*d) == *d) {
    return static_cast<std::uint64_t>(*d);
  }
  return std::nullopt;
}

namespace {

std::string format_sci(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8e", value);
  return buf;
}

std::string format_exact(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

const std::map<std::string, std::pair<double, double>, std::less<>>& preset_table() {
  static const std::map<std::string, std::pair<double, double>, std::less<>> table = {
      {"case1", {0.35, 0.1}}, {"case2", {0.25, 0.5}}, {"case3", {0.2, 0.9}}};
  return table;
}

std::string_view accuracy_label(BerMethod m) {
  switch (m) {
    case BerMethod::Exact:
      return "exact";
    case BerMethod::ApproxNew:
      return "more accurate";
    case BerMethod::ApproxPrev:
      return "less accurate";
    case BerMethod::MonteCarlo:
      return "statistical";
  }
  return "";
}

std::string_view simplicity_label(BerMethod m) {
  switch (m) {
    case BerMethod::Exact:
      return "complex (integral of a product of two integrals)";
    case BerMethod::ApproxNew:
      return "moderately simple (two 1-D integrals)";
    case BerMethod::ApproxPrev:
      return "very simple (one 1-D integral)";
    case BerMethod::MonteCarlo:
      return "simulation";
  }
  return "";
}

void write_atomically(const std::filesystem::path& target, const std::string& content,
                      std::vector<std::filesystem::path>& temporaries) {
  auto tmp = target;
  tmp += ".tmp";
  temporaries.push_back(tmp);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
  temporaries.pop_back();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error([&] {
        std::string joined = "invalid configuration:";
        for (const auto& p : problems) joined += "\n  " + p;
        return joined;
      }()),
      problems_(std::move(problems)) {}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : preset_table()) out.push_back(name);
    return out;
  }();
  return names;
}

RunConfig preset(std::string_view name) {
  const auto it = preset_table().find(name);
  if (it == preset_table().end()) {
    throw ConfigError({"unknown preset '" + std::string(name) + "' (expected case1, case2 or case3)"});
  }
  RunConfig config;
  config.link.pointing_std_m = it->second.first;
  config.link.rytov_variance = it->second.second;
  config.source = std::string(name);
  return config;
}

SweepRange parse_sweep(std::string_view text) {
  SweepRange range;
  std::array<std::optional<double>, 3> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto colon = text.find(':', start);
    if ((colon == std::string_view::npos) != (i == 2)) {
      throw std::invalid_argument("sweep must be lo:hi:step, got '" + std::string(text) + "'");
    }
    parts[i] = to_double(text.substr(start, colon == std::string_view::npos ? text.npos : colon - start));
    if (!parts[i]) throw std::invalid_argument("sweep must be lo:hi:step, got '" + std::string(text) + "'");
    start = colon + 1;
  }
  range.lo_dbm = *parts[0];
  range.hi_dbm = *parts[1];
  range.step_dbm = *parts[2];
  return range;
}

std::vector<BerMethod> parse_methods(std::string_view text) {
  std::vector<bool> seen(kAllMethods.size(), false);
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto token = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (!token.empty()) {
      const auto m = parse_method(token);
      if (!m) {
        throw std::invalid_argument("unknown method '" + std::string(token) +
                                    "' (expected exact, approx-new, approx-prev, mc)");
      }
      seen[static_cast<std::size_t>(*m)] = true;
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  std::vector<BerMethod> out;
  for (BerMethod m : kAllMethods) {
    if (seen[static_cast<std::size_t>(m)]) out.push_back(m);
  }
  return out;
}

RunConfig parse_config(std::string_view text, std::string_view origin) {
  struct Entry {
    std::size_t line;
    std::string key;
    std::string value;
  };
  std::vector<Entry> entries;
  std::vector<std::string> problems;
  const auto where = [&](std::size_t line) {
    return std::string(origin) + ":" + std::to_string(line) + ": ";
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back(where(line_no) + "expected 'key = value'");
      continue;
    }
    entries.push_back({line_no, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))});
  }

  RunConfig config;
  config.source = std::string(origin);
  for (const auto& e : entries) {
    if (e.key != "preset") continue;
    try {
      config = preset(e.value);
      config.source = std::string(origin);
    } catch (const ConfigError& err) {
      problems.push_back(where(e.line) + err.problems().front());
    }
  }

  using Setter = std::function<std::optional<std::string>(RunConfig&, const std::string&)>;
  const auto real = [](double LinkParams::*field) -> Setter {
    return [field](RunConfig& c, const std::string& v) -> std::optional<std::string> {
      const auto d = to_double(v);
      if (!d) return "expected a number, got '" + v + "'";
      c.link.*field = *d;
      return std::nullopt;
    };
  };
  const std::map<std::string, Setter, std::less<>> setters = {
      {"preset", [](RunConfig&, const std::string&) { return std::optional<std::string>{}; }},
      {"wavelength_nm", real(&LinkParams::wavelength_nm)},
      {"link_length_km", real(&LinkParams::link_length_km)},
      {"aperture_radius_m", real(&LinkParams::aperture_radius_m)},
      {"beam_waist_m", real(&LinkParams::beam_waist_m)},
      {"attenuation_db_per_km", real(&LinkParams::attenuation_db_per_km)},
      {"responsivity_a_per_w", real(&LinkParams::responsivity_a_per_w)},
      {"noise_std", real(&LinkParams::noise_std)},
      {"rytov_variance", real(&LinkParams::rytov_variance)},
      {"pointing_std_m",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto d = to_double(v);
         if (!d) return "expected a number, got '" + v + "'";
         c.link.pointing_std_m = *d;
         c.link.jitter_angle_mrad.reset();
         return std::nullopt;
       }},
      {"jitter_angle_mrad",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto d = to_double(v);
         if (!d) return "expected a number, got '" + v + "'";
         c.link.jitter_angle_mrad = *d;
         c.link.pointing_std_m.reset();
         return std::nullopt;
       }},
      {"sweep",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         try {
           c.sweep = parse_sweep(v);
         } catch (const std::invalid_argument& e) {
           return e.what();
         }
         return std::nullopt;
       }},
      {"methods",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         try {
           c.methods = parse_methods(v);
         } catch (const std::invalid_argument& e) {
           return e.what();
         }
         return std::nullopt;
       }},
      {"mc_trials",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto n = parse_count(v);
         if (!n) return "expected a non-negative integer, got '" + v + "'";
         c.mc_trials = *n;
         return std::nullopt;
       }},
      {"seed",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto n = parse_count(v);
         if (!n) return "expected a non-negative integer, got '" + v + "'";
         c.seed = *n;
         return std::nullopt;
       }},
      {"threads",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto n = parse_count(v);
         if (!n || *n > 4096) return "expected a thread count, got '" + v + "'";
         c.threads = static_cast<unsigned>(*n);
         return std::nullopt;
       }},
      {"fec_threshold",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto d = to_double(v);
         if (!d) return "expected a number, got '" + v + "'";
         c.fec_threshold = *d;
         return std::nullopt;
       }},
      {"prev_v_min",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         const auto d = to_double(v);
         if (!d) return "expected a number, got '" + v + "'";
         c.prev_v_min = *d;
         return std::nullopt;
       }},
      {"output_path",
       [](RunConfig& c, const std::string& v) -> std::optional<std::string> {
         if (v.empty()) return "must not be empty";
         c.output_path = v;
         return std::nullopt;
       }},
  };

  for (const auto& e : entries) {
    const auto it = setters.find(e.key);
    if (it == setters.end()) {
      problems.push_back(where(e.line) + "unknown field '" + e.key + "'");
      continue;
    }
    if (auto err = it->second(config, e.value)) {
      problems.push_back(where(e.line) + "field '" + e.key + "': " + *err);
    }
  }

  for (auto& p : validate(config)) problems.push_back(std::string(origin) + ": " + p);
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read config file '" + path.string() + "'"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

std::vector<std::string> validate(const RunConfig& config) {
  auto problems = config.link.validation_errors();
  const auto& s = config.sweep;
  if (!(s.lo_dbm < s.hi_dbm) || !(s.step_dbm > 0.0) || !std::isfinite(s.lo_dbm) ||
      !std::isfinite(s.hi_dbm)) {
    problems.push_back("sweep must satisfy lo < hi and step > 0");
  } else if ((s.hi_dbm - s.lo_dbm) / s.step_dbm > 1e6) {
    problems.push_back("sweep has more than 1e6 points");
  }
  if (config.methods.empty()) problems.push_back("methods must name at least one method");
  const bool wants_mc = std::find(config.methods.begin(), config.methods.end(),
                                  BerMethod::MonteCarlo) != config.methods.end();
  if (wants_mc && config.mc_trials < kMinMcTrials) {
    problems.push_back("mc_trials must be >= 10000 when mc is requested");
  }
  if (!(config.fec_threshold > 0.0 && config.fec_threshold < 0.5)) {
    problems.push_back("fec_threshold must lie in (0, 0.5)");
  }
  if (!(config.prev_v_min > 0.0)) problems.push_back("prev_v_min must be > 0");
  if (config.output_path.empty()) problems.push_back("output_path must not be empty");
  return problems;
}

RunResult evaluate(const RunConfig& config) {
  if (auto problems = validate(config); !problems.empty()) throw ConfigError(std::move(problems));

  RunResult result;
  result.derived = derive(config.link);

  SweepOptions options;
  options.analytic.prev_v_min = config.prev_v_min;
  options.mc = {config.mc_trials, config.seed};
  options.threads = config.threads;
  result.curves = sweep(config.methods, config.sweep, result.derived, config.link, options);

  CrossingOptions crossing;
  crossing.analytic = options.analytic;
  std::map<BerMethod, double> analytic_crossings;
  for (const auto& curve : result.curves) {
    if (curve.method == BerMethod::MonteCarlo) {
      result.crossings.push_back({curve.method, interpolate_crossing(curve, config.fec_threshold), true});
      continue;
    }
    const auto report = fec_crossing(curve.method, result.derived, config.link,
                                     config.fec_threshold, crossing);
    analytic_crossings[curve.method] = report.p_cross_dbm;
    result.crossings.push_back({curve.method, report.p_cross_dbm, false});
  }
  for (auto a = analytic_crossings.begin(); a != analytic_crossings.end(); ++a) {
    for (auto b = std::next(a); b != analytic_crossings.end(); ++b) {
      result.deltas.push_back({a->first, b->first, b->second - a->second});
    }
  }
  return result;
}

std::string format_csv(const std::vector<BerCurve>& curves) {
  std::map<double, std::array<std::string, 7>> rows;
  for (const auto& curve : curves) {
    for (const auto& pt : curve.points) {
      auto& row = rows[pt.p_dbm];
      switch (curve.method) {
        case BerMethod::Exact:
          row[0] = format_sci(pt.ber);
          break;
        case BerMethod::ApproxNew:
          row[1] = format_sci(pt.ber);
          break;
        case BerMethod::ApproxPrev:
          row[2] = format_sci(pt.ber);
          break;
        case BerMethod::MonteCarlo:
          row[3] = format_sci(pt.ber);
          if (pt.ci_low) row[4] = format_sci(*pt.ci_low);
          if (pt.ci_high) row[5] = format_sci(*pt.ci_high);
          if (pt.trials) row[6] = std::to_string(*pt.trials);
          break;
      }
    }
  }
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& [p_dbm, fields] : rows) {
    out += format_sci(p_dbm);
    for (const auto& f : fields) {
      out += ',';
      out += f;
    }
    out += '\n';
  }
  return out;
}

std::string format_report(const RunConfig& config, const RunResult& result) {
  const auto& d = result.derived;
  const auto& link = config.link;
  std::ostringstream out;
  out << "# FSO OOK average-BER report\n";
  out << "source = " << config.source << "\n\n";

  out << "[link]\n";
  out << "wavelength_nm = " << format_exact(link.wavelength_nm) << "\n";
  out << "link_length_km = " << format_exact(link.link_length_km) << "\n";
  out << "aperture_radius_m = " << format_exact(link.aperture_radius_m) << "\n";
  out << "beam_waist_m = " << format_exact(link.beam_waist_m) << "\n";
  out << "attenuation_db_per_km = " << format_exact(link.attenuation_db_per_km) << "\n";
  out << "responsivity_a_per_w = " << format_exact(link.responsivity_a_per_w) << "\n";
  out << "noise_std = " << format_exact(link.noise_std) << "\n";
  out << "rytov_variance = " << format_exact(link.rytov_variance) << "\n";
  out << "pointing_std_m = " << format_exact(d.pointing_std_m) << "\n\n";

  out << "[derived]\n";
  out << "h_l = " << format_exact(d.h_l) << "\n";
  out << "v = " << format_exact(d.v) << "\n";
  out << "A0 = " << format_exact(d.A0) << "\n";
  out << "omega_z_eq_m = " << format_exact(d.omega_z_eq_m) << "\n";
  out << "gamma = " << format_exact(d.gamma) << "\n";
  out << "gamma_sq = " << format_exact(d.gamma_sq) << "\n";
  out << "sigma_x_sq = " << format_exact(d.sigma_x_sq) << "\n";
  out << "mu = " << format_exact(d.mu) << "\n";
  out << "h_hat = " << format_exact(d.h_hat) << "\n";
  out << "h_max = " << format_exact(truncation_bound(d)) << "\n\n";

  out << "[methods]\n";
  for (const auto& curve : result.curves) {
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %-14s %s\n", std::string(method_name(curve.method)).c_str(),
                  std::string(accuracy_label(curve.method)).c_str(),
                  std::string(simplicity_label(curve.method)).c_str());
    out << line;
  }
  if (std::find(config.methods.begin(), config.methods.end(), BerMethod::ApproxPrev) !=
      config.methods.end()) {
    out << "approx-prev lower cutoff v_min = " << format_exact(config.prev_v_min) << "\n";
  }
  out << "\n";

  out << "[fec_crossings]\n";
  out << "threshold = " << format_sci(config.fec_threshold) << "\n";
  for (const auto& c : result.crossings) {
    out << method_name(c.method) << " = ";
    if (c.p_cross_dbm) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.4f dBm", *c.p_cross_dbm);
      out << buf << (c.interpolated ? " (interpolated from sweep)" : "");
    } else {
      out << "not reached in sweep";
    }
    out << "\n";
  }
  out << "\n[delta_db]\n";
  for (const auto& row : result.deltas) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.4f", row.delta_db);
    out << method_name(row.a) << " -> " << method_name(row.b) << " = " << buf << "\n";
  }
  return out.str();
}

RunArtifacts run(const RunConfig& config) {
  const RunResult result = evaluate(config);
  const std::filesystem::path dir(config.output_path);
  std::filesystem::create_directories(dir);
  RunArtifacts artifacts{dir / "curves.csv", dir / "report.txt"};

  std::vector<std::filesystem::path> temporaries;
  std::vector<std::filesystem::path> written;
  try {
    write_atomically(artifacts.csv, format_csv(result.curves), temporaries);
    written.push_back(artifacts.csv);
    write_atomically(artifacts.report, format_report(config, result), temporaries);
  } catch (...) {
    std::error_code ignored;
    for (const auto& p : temporaries) std::filesystem::remove(p, ignored);
    for (const auto& p : written) std::filesystem::remove(p, ignored);
    throw;
  }
  return artifacts;
}

}  // namespace fso
