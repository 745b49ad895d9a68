#pragma once

// Front end for the curvedwigner tool: run configuration (flags and JSON),
// the five commands and the exit-code policy.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwig/oscillator.hpp"
#include "cwig/wigner.hpp"

namespace cwig {

inline constexpr const char* kLibraryVersion = "cwig 1.0.0";

enum class Command { eigen, wavefun, wigner, figure1, verify };
std::string to_string(Command c);
Command command_from_string(const std::string& s);

struct GridSpec {
  double chi_min = 0.0, chi_max = 0.0;
  int n_chi = 0;
  double p_min = 0.0, p_max = 0.0;
  int n_p = 0;

  /// "CHI_MIN:CHI_MAX:N,P_MIN:P_MAX:N"
  static GridSpec parse(const std::string& text);
  std::string to_string() const;
  Eigen::VectorXd chi_axis() const;
  Eigen::VectorXd p_axis() const;
};

struct RunConfig {
  Command command = Command::eigen;
  double mu = 1.0;
  std::optional<double> omega;
  std::optional<double> s;  // exclusive with omega
  double R = 1.0;
  std::vector<int> n_list;  // empty: command default
  std::optional<GridSpec> grid;
  Evaluator evaluator = Evaluator::closed_form;
  std::optional<std::filesystem::path> output_dir;
  std::vector<std::string> formats{"csv", "pgm"};
  double tol = 1.0;  // multiplies every acceptance tolerance
  int threads = 0;

  /// Oscillator for the single-depth commands.
  OscillatorParams params() const;
  /// Depths for figure1: the configured s, or 4 and 30.
  std::vector<double> depth_list() const;
  std::vector<int> effective_n_list() const;
  GridSpec effective_grid() const;
  std::filesystem::path effective_output_dir() const;
  bool wants(const std::string& format) const;

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Applies the fields present in `j` on top of `base`.
RunConfig apply_json(RunConfig base, const nlohmann::json& j);
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Parses argv. Returns nullopt after printing help; throws ConfigError.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

int run_eigen(const RunConfig& c, std::ostream& out);
int run_wavefun(const RunConfig& c, std::ostream& out);
int run_wigner(const RunConfig& c, std::ostream& out);
int run_figure1(const RunConfig& c, std::ostream& out);
int run_verify(const RunConfig& c, std::ostream& out);
int run(const RunConfig& c, std::ostream& out);

/// 0 ok, 2 configuration, 3 numerical nonconvergence, 4 I/O.
int exit_code_for(const std::exception& e);

/// Full program: parse, run, map errors to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cwig
