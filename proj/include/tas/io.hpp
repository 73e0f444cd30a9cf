#pragma once

// Text formats: point-pattern CSV, window / parameter / metadata JSON,
// contact-curve CSV and JSON forms of fit results.

#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tas/core.hpp"
#include "tas/estimation/cluster_sizes.hpp"
#include "tas/estimation/fit.hpp"
#include "tas/estimation/mu0.hpp"
#include "tas/sampling.hpp"

namespace tas {

class IoError : public Error {
 public:
  using Error::Error;
};

using json = nlohmann::json;

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Whole-field decimal parse; nullopt on junk or overflow.
inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline const char* axis_name(std::size_t k) {
  static const char* names[] = {"x", "y", "z"};
  return names[k];
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Point-pattern CSV

inline void write_pattern(const PointPattern& p, std::ostream& out) {
  const std::size_t d = p.dim();
  if (d > 3) throw DomainError("pattern CSV supports dimensions 1 to 3");
  for (std::size_t k = 0; k < d; ++k) out << (k ? "," : "") << detail::axis_name(k);
  if (p.has_labels()) out << ",cluster";
  out << '\n';
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto x = p.point(i);
    for (std::size_t k = 0; k < d; ++k) out << (k ? "," : "") << format_coord(x[k]);
    if (p.has_labels()) out << ',' << p.labels()[i];
    out << '\n';
  }
}

inline std::string write_pattern(const PointPattern& p) {
  std::ostringstream s;
  write_pattern(p, s);
  return s.str();
}

namespace detail {

struct CsvRows {
  std::size_t dim = 0;
  std::vector<double> coords;
  std::optional<std::vector<std::string>> labels;
};

// Header `x[,y[,z]][,cluster]`. `accept` vets each parsed point.
template <typename Accept>
CsvRows read_rows(std::istream& in, Accept&& accept) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header row");
  ++lineno;
  const auto header = split(trim(line), ',');
  CsvRows rows;
  std::size_t& d = rows.dim;
  while (d < header.size() && d < 3 && trim(header[d]) == axis_name(d)) ++d;
  bool labeled = false;
  if (d < header.size()) {
    if (d + 1 == header.size() && trim(header[d]) == "cluster") labeled = true;
    else throw ParseError(1, "header must be x[,y[,z]][,cluster], got '" + trim(line) + "'");
  }
  if (d == 0) throw ParseError(1, "header names no coordinate columns");

  std::vector<std::string> labels;
  const std::size_t fields = d + (labeled ? 1 : 0);
  std::vector<double> x(d);
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto cells = split(t, ',');
    if (cells.size() != fields)
      throw ParseError(lineno, "expected " + std::to_string(fields) + " fields, got " +
                                   std::to_string(cells.size()));
    for (std::size_t k = 0; k < d; ++k) {
      const auto v = parse_double(trim(cells[k]));
      if (!v) throw ParseError(lineno, "invalid number '" + cells[k] + "'");
      x[k] = *v;
    }
    accept(x, lineno);
    rows.coords.insert(rows.coords.end(), x.begin(), x.end());
    if (labeled) {
      const std::string lab = trim(cells[d]);
      if (lab.empty()) throw ParseError(lineno, "empty cluster label");
      labels.push_back(lab);
    }
  }
  if (labeled) rows.labels = std::move(labels);
  return rows;
}

}  // namespace detail

// The header's axis count must match the window; points outside the window
// are rejected with their line number.
inline PointPattern read_pattern(std::istream& in, const Window& window) {
  bool checked = false;
  auto rows = detail::read_rows(in, [&](const std::vector<double>& x, std::size_t line) {
    if (!checked && x.size() != window.dim())
      throw ValidationError("CSV has " + std::to_string(x.size()) +
                            " coordinate columns but the window has dimension " + std::to_string(window.dim()));
    checked = true;
    if (!window.contains(x))
      throw ValidationError("line " + std::to_string(line) + ": point lies outside the window");
  });
  if (rows.dim != window.dim())
    throw ValidationError("CSV has " + std::to_string(rows.dim) +
                          " coordinate columns but the window has dimension " + std::to_string(window.dim()));
  return PointPattern(window, std::move(rows.coords), std::move(rows.labels));
}

// Cluster-law sample in the pattern CSV layout (labels ignored).
inline ClusterDistribution read_cloud(std::istream& in) {
  auto rows = detail::read_rows(in, [](const std::vector<double>&, std::size_t) {});
  return ClusterDistribution::empirical(rows.dim, std::move(rows.coords));
}

inline PointPattern read_pattern(const std::string& text, const Window& window) {
  std::istringstream s(text);
  return read_pattern(s, window);
}

// ---------------------------------------------------------------------------
// JSON forms

inline json to_json(const Window& w) { return {{"lower", w.lower()}, {"upper", w.upper()}}; }

inline Window window_from_json(const json& j) {
  try {
    return Window(j.at("lower").get<std::vector<double>>(), j.at("upper").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("window JSON: ") + e.what());
  }
}

inline json to_json(const ClusterDistribution& mu0) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UniformInterval>) {
          return {{"type", "uniform"}, {"halfwidth", m.halfwidth}};
        } else if constexpr (std::is_same_v<T, IsotropicGaussian>) {
          return {{"type", "gaussian"}, {"dimension", m.dimension}, {"sigma", m.sigma}};
        } else {
          json pts = json::array();
          for (std::size_t i = 0; i < m.size(); ++i) {
            const auto x = m.point(i);
            pts.push_back(std::vector<double>(x.begin(), x.end()));
          }
          return {{"type", "empirical"}, {"dimension", m.dimension}, {"points", pts}};
        }
      },
      mu0.variant());
}

inline ClusterDistribution mu0_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "uniform") return ClusterDistribution::uniform(j.at("halfwidth").get<double>());
    if (type == "gaussian")
      return ClusterDistribution::gaussian(j.at("dimension").get<std::size_t>(), j.at("sigma").get<double>());
    if (type == "empirical") {
      const auto d = j.at("dimension").get<std::size_t>();
      std::vector<double> coords;
      for (const auto& p : j.at("points")) {
        const auto x = p.get<std::vector<double>>();
        if (x.size() != d) throw ValidationError("cloud point dimension mismatch");
        coords.insert(coords.end(), x.begin(), x.end());
      }
      return ClusterDistribution::empirical(d, std::move(coords));
    }
    throw ValidationError("unknown mu0 type '" + type + "'");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("mu0 JSON: ") + e.what());
  }
}

inline json to_json(const TasParameters& p) {
  return {{"alpha", p.alpha}, {"lambda", p.lambda}, {"mu0", to_json(p.mu0)}};
}

inline TasParameters params_from_json(const json& j) {
  try {
    return TasParameters(j.at("alpha").get<double>(), j.at("lambda").get<double>(), mu0_from_json(j.at("mu0")));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("parameter JSON: ") + e.what());
  }
}

inline json to_json(const SimulationMetadata& m) {
  return {{"seed", m.seed},
          {"stream", m.stream},
          {"buffer", m.buffer},
          {"recommended_buffer", m.recommended_buffer},
          {"centres", m.centres},
          {"truncations", m.truncations},
          {"warnings", m.warnings}};
}

inline json to_json(const FitResult& r) {
  return {{"alpha_hat", r.alpha_hat},   {"lambda_hat", r.lambda_hat},
          {"objective_value", r.objective_value},
          {"method", r.method},         {"objective", r.objective},
          {"iterations", r.iterations}, {"converged", r.converged},
          {"observations", r.observations},
          {"warnings", r.warnings}};
}

inline FitResult fit_result_from_json(const json& j) {
  FitResult r;
  try {
    r.alpha_hat = j.at("alpha_hat").get<double>();
    r.lambda_hat = j.at("lambda_hat").get<double>();
    r.objective_value = j.at("objective_value").get<double>();
    r.method = j.at("method").get<std::string>();
    r.objective = j.at("objective").get<std::string>();
    r.iterations = j.at("iterations").get<int>();
    r.converged = j.at("converged").get<bool>();
    r.observations = j.at("observations").get<std::size_t>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("fit result JSON: ") + e.what());
  }
  return r;
}

inline json to_json(const ClusterSizeEstimate& e) {
  return {{"alpha_hat", e.alpha}, {"raw", e.raw}, {"t_used", e.t_used}, {"t_dropped", e.t_dropped}};
}

inline json to_json(const MixtureModel& m) {
  json comps = json::array();
  for (const auto& c : m.components)
    comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"covariance", c.covariance}});
  json bics = json::array();
  for (const auto& [k, b] : m.bic_by_k) bics.push_back({{"k", k}, {"bic", b}});
  return {{"dimension", m.dim},
          {"k", m.components.size()},
          {"components", comps},
          {"noise_weight", m.noise_weight},
          {"noise_density", m.noise_density},
          {"log_likelihood", m.log_likelihood},
          {"bic", m.bic},
          {"bic_by_k", bics},
          {"iterations", m.iterations},
          {"converged", m.converged},
          {"reseeds", m.reseeds},
          {"dropped", m.dropped},
          {"log_likelihood_trace", m.log_likelihood_trace}};
}

inline MixtureModel mixture_from_json(const json& j) {
  MixtureModel m;
  try {
    m.dim = j.at("dimension").get<std::size_t>();
    for (const auto& c : j.at("components"))
      m.components.push_back({c.at("weight").get<double>(), c.at("mean").get<std::vector<double>>(),
                              c.at("covariance").get<std::vector<double>>()});
    m.noise_weight = j.at("noise_weight").get<double>();
    m.noise_density = j.at("noise_density").get<double>();
    m.log_likelihood = j.at("log_likelihood").get<double>();
    m.bic = j.at("bic").get<double>();
    for (const auto& b : j.at("bic_by_k"))
      m.bic_by_k.emplace_back(b.at("k").get<std::size_t>(), b.at("bic").get<double>());
    m.iterations = j.at("iterations").get<int>();
    m.converged = j.at("converged").get<bool>();
    m.reseeds = j.at("reseeds").get<std::size_t>();
    m.dropped = j.at("dropped").get<std::size_t>();
    m.log_likelihood_trace = j.at("log_likelihood_trace").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("mixture JSON: ") + e.what());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Contact-curve CSV `r,G`

inline void write_curve(const ContactCurve& c, std::ostream& out) {
  out << "r,G\n";
  for (std::size_t i = 0; i < c.size(); ++i)
    out << format_coord(c.radii()[i]) << ',' << format_coord(c.values()[i]) << '\n';
}

inline std::string write_curve(const ContactCurve& c) {
  std::ostringstream s;
  write_curve(c, s);
  return s.str();
}

inline ContactCurve read_curve(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || detail::trim(line) != "r,G") throw ParseError(1, "header must be r,G");
  std::vector<double> r, g;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto cells = detail::split(t, ',');
    if (cells.size() != 2) throw ParseError(lineno, "expected 2 fields");
    const auto a = detail::parse_double(detail::trim(cells[0]));
    const auto b = detail::parse_double(detail::trim(cells[1]));
    if (!a || !b) throw ParseError(lineno, "invalid number");
    r.push_back(*a);
    g.push_back(*b);
  }
  return ContactCurve(std::move(r), std::move(g));
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream s;
  s << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return s.str();
}

// Writes through a temporary that is renamed into place, so a failed write
// never leaves a truncated file behind.
inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("error writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into '" + path.string() + "'");
  }
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

inline json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path.string() + "': " + e.what());
  }
}

// Sidecar window file next to a pattern: `<stem>.window.json`.
inline std::filesystem::path window_sidecar(const std::filesystem::path& pattern_path) {
  std::filesystem::path p = pattern_path;
  p.replace_extension(".window.json");
  return p;
}

inline std::filesystem::path metadata_sidecar(const std::filesystem::path& pattern_path) {
  std::filesystem::path p = pattern_path;
  p.replace_extension(".meta.json");
  return p;
}

}  // namespace tas
