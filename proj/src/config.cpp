#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cwig/cli.hpp"
#include "cwig/error.hpp"

namespace cwig {
namespace {

double parse_number(const std::string& tok, const char* what) {
  std::istringstream is(tok);
  is.imbue(std::locale::classic());
  double v = 0.0;
  if (!(is >> v) || !(is >> std::ws).eof()) throw ConfigError(std::string("invalid ") + what + " '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& tok : split(text, ',')) {
    const double v = parse_number(tok, "n");
    if (v != std::floor(v)) throw ConfigError("n must be an integer (got '" + tok + "')");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw ConfigError("empty n list");
  return out;
}

std::vector<std::string> parse_formats(const std::string& text) {
  auto out = split(text, ',');
  if (out.empty()) throw ConfigError("empty format list");
  return out;
}

template <class T>
T json_get(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::eigen: return "eigen";
    case Command::wavefun: return "wavefun";
    case Command::wigner: return "wigner";
    case Command::figure1: return "figure1";
    case Command::verify: return "verify";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::eigen, Command::wavefun, Command::wigner, Command::figure1, Command::verify}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown command '" + s + "'");
}

GridSpec GridSpec::parse(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError("grid must be CHI_MIN:CHI_MAX:N,P_MIN:P_MAX:N (got '" + text + "')");
  GridSpec g;
  auto axis = [&](const std::string& part, double& lo, double& hi, int& n) {
    const auto f = split(part, ':');
    if (f.size() != 3) throw ConfigError("grid axis must be MIN:MAX:N (got '" + part + "')");
    lo = parse_number(f[0], "grid bound");
    hi = parse_number(f[1], "grid bound");
    const double cnt = parse_number(f[2], "grid count");
    if (cnt != std::floor(cnt) || cnt > 1e6) throw ConfigError("grid count must be an integer (got '" + f[2] + "')");
    n = static_cast<int>(cnt);
  };
  axis(parts[0], g.chi_min, g.chi_max, g.n_chi);
  axis(parts[1], g.p_min, g.p_max, g.n_p);
  return g;
}

std::string GridSpec::to_string() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << chi_min << ':' << chi_max << ':' << n_chi << ',' << p_min << ':' << p_max << ':' << n_p;
  return os.str();
}

Eigen::VectorXd GridSpec::chi_axis() const { return Eigen::VectorXd::LinSpaced(n_chi, chi_min, chi_max); }
Eigen::VectorXd GridSpec::p_axis() const { return Eigen::VectorXd::LinSpaced(n_p, p_min, p_max); }

OscillatorParams RunConfig::params() const {
  if (s) return OscillatorParams::from_depth(*s, R, mu);
  if (omega) return OscillatorParams::from_physical(mu, *omega, R);
  throw ConfigError("either --s or --omega is required for " + cwig::to_string(command));
}

std::vector<double> RunConfig::depth_list() const {
  if (s) return {*s};
  if (omega) return {OscillatorParams::from_physical(mu, *omega, R).s};
  return {4.0, 30.0};
}

std::vector<int> RunConfig::effective_n_list() const {
  if (!n_list.empty()) return n_list;
  switch (command) {
    case Command::eigen: {
      std::vector<int> all(params().bound_state_count());
      for (int i = 0; i < static_cast<int>(all.size()); ++i) all[i] = i;
      return all;
    }
    case Command::figure1: return {0, 1, 2, 3};
    default: return {0};
  }
}

GridSpec RunConfig::effective_grid() const {
  if (grid) return *grid;
  switch (command) {
    case Command::wavefun: return {-4.0, 4.0, 201, 0.0, 8.0, 161};
    case Command::wigner: return {0.0, 3.0, 64, 0.0, 6.0, 64};
    default: return {0.0, 4.0, 256, 0.0, 4.0, 256};
  }
}

std::filesystem::path RunConfig::effective_output_dir() const { return output_dir.value_or("out"); }

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive and finite");
  };
  positive(mu, "mu");
  positive(R, "R");
  positive(tol, "tol");
  if (s && omega) throw ConfigError("give either s or omega, not both");
  if (s && (!(*s >= 0.0) || !std::isfinite(*s))) throw ConfigError("s must be non-negative and finite");
  if (omega && (!(*omega >= 0.0) || !std::isfinite(*omega))) throw ConfigError("omega must be non-negative and finite");
  if (threads < 0) throw ConfigError("threads must be non-negative");
  for (const auto& f : formats) {
    if (f != "csv" && f != "pgm") throw ConfigError("unknown format '" + f + "' (expected csv, pgm)");
  }
  if (command == Command::verify) return;
  if (command != Command::figure1 && !s && !omega) {
    throw ConfigError("either s or omega is required for " + cwig::to_string(command));
  }
  if (grid) {
    const auto& g = *grid;
    if (g.n_chi < 2 || g.n_p < 2) throw ConfigError("grid counts must be at least 2");
    if (!(g.chi_max > g.chi_min) || !(g.p_max > g.p_min) || !std::isfinite(g.chi_min) || !std::isfinite(g.chi_max) ||
        !std::isfinite(g.p_min) || !std::isfinite(g.p_max)) {
      throw ConfigError("grid bounds must be finite with MIN < MAX");
    }
  }
  std::vector<OscillatorParams> wells;
  if (s || omega) {
    wells.push_back(params());
  } else {
    for (double depth : depth_list()) wells.push_back(OscillatorParams::from_depth(depth, R, mu));
  }
  for (const auto& p : wells) {
    const int count = p.bound_state_count();
    for (int n : effective_n_list()) {
      std::ostringstream os;
      if (n < 0 || n >= count) {
        os << "n = " << n << " is outside the bound range 0.." << count - 1 << " at s = " << p.s;
        throw ConfigError(os.str());
      }
      if (command != Command::eigen && !(p.s - n > 0.0)) {
        os << "n = " << n << " at s = " << p.s << " is a threshold state and not normalizable";
        throw ConfigError(os.str());
      }
    }
  }
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = to_string(c.command);
  j["mu"] = c.mu;
  j["omega"] = c.omega ? nlohmann::json(*c.omega) : nlohmann::json();
  j["s"] = c.s ? nlohmann::json(*c.s) : nlohmann::json();
  j["R"] = c.R;
  j["n_list"] = c.n_list;
  j["grid"] = c.grid ? nlohmann::json(c.grid->to_string()) : nlohmann::json();
  j["evaluator"] = to_string(c.evaluator);
  j["output_dir"] = c.output_dir ? nlohmann::json(c.output_dir->generic_string()) : nlohmann::json();
  j["formats"] = c.formats;
  j["tol"] = c.tol;
  j["threads"] = c.threads;
  return j;
}

RunConfig apply_json(RunConfig c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known{"command", "mu", "omega", "s", "R", "n_list", "grid",
                                              "evaluator", "output_dir", "formats", "tol", "threads"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config field '" + key + "'");
  }
  auto has = [&](const char* k) { return j.contains(k) && !j.at(k).is_null(); };
  if (has("command")) c.command = command_from_string(json_get<std::string>(j, "command"));
  if (has("mu")) c.mu = json_get<double>(j, "mu");
  if (has("omega")) c.omega = json_get<double>(j, "omega");
  if (has("s")) c.s = json_get<double>(j, "s");
  if (has("R")) c.R = json_get<double>(j, "R");
  if (has("n_list")) c.n_list = json_get<std::vector<int>>(j, "n_list");
  if (has("grid")) {
    const auto& g = j.at("grid");
    if (g.is_string()) {
      c.grid = GridSpec::parse(g.get<std::string>());
    } else {
      GridSpec spec;
      spec.chi_min = json_get<double>(g, "chi_min");
      spec.chi_max = json_get<double>(g, "chi_max");
      spec.n_chi = json_get<int>(g, "n_chi");
      spec.p_min = json_get<double>(g, "p_min");
      spec.p_max = json_get<double>(g, "p_max");
      spec.n_p = json_get<int>(g, "n_p");
      c.grid = spec;
    }
  }
  if (has("evaluator")) c.evaluator = evaluator_from_string(json_get<std::string>(j, "evaluator"));
  if (has("output_dir")) c.output_dir = json_get<std::string>(j, "output_dir");
  if (has("formats")) c.formats = json_get<std::vector<std::string>>(j, "formats");
  if (has("tol")) c.tol = json_get<double>(j, "tol");
  if (has("threads")) c.threads = json_get<int>(j, "threads");
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  return apply_json(std::move(base), j);
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Wigner functions of the oscillator on the hyperbola", "curvedwigner"};
  std::string command, n_text, grid_text, evaluator, out_dir, format_text, config_path;
  double mu = 0, omega = 0, s = 0, R = 0, tol = 0;
  int threads = 0;
  app.add_option("command", command, "eigen | wavefun | wigner | figure1 | verify")->required();
  app.add_option("--mu", mu, "mass");
  app.add_option("--omega", omega, "oscillator frequency");
  app.add_option("--s", s, "depth parameter (instead of --omega)");
  app.add_option("--R", R, "radius of the hyperbola");
  app.add_option("--n", n_text, "comma-separated mode indices");
  app.add_option("--grid", grid_text, "CHI_MIN:CHI_MAX:N,P_MIN:P_MAX:N");
  app.add_option("--evaluator", evaluator, "closed | quad");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format_text, "comma-separated subset of csv,pgm");
  app.add_option("--config", config_path, "JSON config; flags override its fields");
  app.add_option("--tol", tol, "scale factor for verification tolerances");
  app.add_option("--threads", threads, "worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig c;
  if (app.count("--config")) c = load_config_file(config_path, c);
  c.command = command_from_string(command);
  if (app.count("--mu")) c.mu = mu;
  if (app.count("--omega")) {
    c.omega = omega;
    if (!app.count("--s")) c.s.reset();
  }
  if (app.count("--s")) {
    c.s = s;
    if (!app.count("--omega")) c.omega.reset();
  }
  if (app.count("--R")) c.R = R;
  if (app.count("--n")) c.n_list = parse_n_list(n_text);
  if (app.count("--grid")) c.grid = GridSpec::parse(grid_text);
  if (app.count("--evaluator")) c.evaluator = evaluator_from_string(evaluator);
  if (app.count("--out")) c.output_dir = out_dir;
  if (app.count("--format")) c.formats = parse_formats(format_text);
  if (app.count("--tol")) c.tol = tol;
  if (app.count("--threads")) c.threads = threads;
  c.validate();
  return c;
}

}  // namespace cwig
