#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cwig/acceptance.hpp"
#include "cwig/cli.hpp"
#include "cwig/error.hpp"
#include "cwig/io.hpp"

namespace cwig {
namespace {

namespace fs = std::filesystem;

// Collects written files and emits manifest.json next to them.
class ArtifactSet {
 public:
  explicit ArtifactSet(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create '" + dir_.string() + "': " + ec.message());
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void add(const std::string& name, const std::string& kind) {
    files_.push_back({name, kind, sha256_file(dir_ / name)});
  }

  void write_manifest(const RunConfig& c, nlohmann::json extra = nlohmann::json::object()) const {
    nlohmann::json m;
    m["library_version"] = kLibraryVersion;
    m["config_echo"] = to_json(c);
    m["files"] = nlohmann::json::array();
    for (const auto& f : files_) m["files"].push_back({{"path", f.path}, {"kind", f.kind}, {"sha256", f.sha256}});
    for (auto& [k, v] : extra.items()) m[k] = v;
    const auto p = dir_ / "manifest.json";
    std::ofstream os(p, std::ios::trunc);
    if (!os) throw IoError("cannot open '" + p.string() + "' for writing");
    os << m.dump(2) << '\n';
    if (!os) throw IoError("write failed for '" + p.string() + "'");
  }

  std::size_t size() const { return files_.size(); }

 private:
  fs::path dir_;
  std::vector<ManifestEntry> files_;
};

std::string tag(double v) { return format_double(v); }

GridOptions grid_options(const RunConfig& c) {
  GridOptions g;
  g.threads = c.threads;
  return g;
}

std::vector<std::string> state_comments(const std::string& what, int n, const OscillatorParams& p) {
  return {"curvedwigner " + what, "n=" + std::to_string(n) + " s=" + tag(p.s) + " R=" + tag(p.R) + " mu=" + tag(p.mu) +
                                      " omega=" + tag(p.omega)};
}

// Symmetric extension of a quadrant marginal: axis -a_k..a_k, values mirrored.
std::pair<Eigen::VectorXd, Eigen::VectorXd> mirror(const Eigen::VectorXd& ax, const Eigen::VectorXd& v) {
  const auto n = ax.size();
  Eigen::VectorXd a(2 * n - 1), w(2 * n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(n - 1 + i) = ax(i);
    a(n - 1 - i) = -ax(i);
    w(n - 1 + i) = w(n - 1 - i) = v(i);
  }
  return {a, w};
}

}  // namespace

int run_eigen(const RunConfig& c, std::ostream& out) {
  const OscillatorParams p = c.params();
  const auto ns = c.effective_n_list();
  out << "# s=" << tag(p.s) << " E0=" << tag(p.E0) << " bound_states=" << p.bound_state_count() << '\n';
  out << "n,E_n,normalizable\n";
  CsvTable t;
  t.comments = {"curvedwigner eigen", "s=" + tag(p.s) + " E0=" + tag(p.E0) + " R=" + tag(p.R) + " mu=" + tag(p.mu)};
  t.header = {"n", "E_n [energy]", "normalizable"};
  t.columns.assign(3, Eigen::VectorXd(static_cast<Eigen::Index>(ns.size())));
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const BoundState st(p, ns[i], false);
    const double e = energy(ns[i], p);
    out << ns[i] << ',' << tag(e) << ',' << (st.normalizable() ? 1 : 0) << '\n';
    t.columns[0](i) = ns[i];
    t.columns[1](i) = e;
    t.columns[2](i) = st.normalizable() ? 1.0 : 0.0;
  }
  if (c.output_dir && c.wants("csv")) {
    ArtifactSet a(*c.output_dir);
    emit_csv(t, a.path("eigen.csv"));
    a.add("eigen.csv", "eigen_csv");
    a.write_manifest(c);
  }
  return 0;
}

int run_wavefun(const RunConfig& c, std::ostream& out) {
  const OscillatorParams p = c.params();
  const GridSpec g = c.effective_grid();
  ArtifactSet a(c.effective_output_dir());
  for (int n : c.effective_n_list()) {
    const BoundState st(p, n);
    const auto chi = g.chi_axis();
    CsvTable pos;
    pos.comments = state_comments("wavefun position", n, p);
    pos.header = {"chi [1]", "psi [1]", "|psi|^2 [1]"};
    pos.columns = {chi, Eigen::VectorXd(chi.size()), Eigen::VectorXd(chi.size())};
    for (Eigen::Index i = 0; i < chi.size(); ++i) {
      pos.columns[1](i) = st.psi(chi(i));
      pos.columns[2](i) = pos.columns[1](i) * pos.columns[1](i);
    }
    const auto pr = g.p_axis();
    CsvTable mom;
    mom.comments = state_comments("wavefun momentum", n, p);
    const auto& cal = st.calibration();
    mom.comments.push_back("calibration p_ref=" + tag(cal.p_ref) + " constant=" + tag(cal.constant.real()) + "+" +
                           tag(cal.constant.imag()) + "i analytic=" + tag(cal.analytic.real()));
    mom.header = {"pR [1]", "Re psi~ [sqrt(length)]", "Im psi~ [sqrt(length)]", "|psi~|^2 [length]"};
    mom.columns = {pr, Eigen::VectorXd(pr.size()), Eigen::VectorXd(pr.size()), Eigen::VectorXd(pr.size())};
    for (Eigen::Index j = 0; j < pr.size(); ++j) {
      const Complex v = st.psi_momentum(pr(j) / p.R);
      mom.columns[1](j) = v.real();
      mom.columns[2](j) = v.imag();
      mom.columns[3](j) = std::norm(v);
    }
    if (c.wants("csv")) {
      const std::string base = "wavefun_n" + std::to_string(n);
      emit_csv(pos, a.path(base + "_position.csv"));
      a.add(base + "_position.csv", "wavefunction_csv");
      emit_csv(mom, a.path(base + "_momentum.csv"));
      a.add(base + "_momentum.csv", "momentum_csv");
    }
    out << "n=" << n << " E=" << tag(st.energy()) << " calibration=" << tag(cal.constant.real()) << '\n';
  }
  a.write_manifest(c);
  return 0;
}

int run_wigner(const RunConfig& c, std::ostream& out) {
  const OscillatorParams p = c.params();
  const GridSpec g = c.effective_grid();
  ArtifactSet a(c.effective_output_dir());
  for (int n : c.effective_n_list()) {
    const BoundState st(p, n, false);
    const WignerGrid w = wigner_grid(st, g.chi_axis(), g.p_axis(), c.evaluator, grid_options(c));
    const std::string base = "wigner_n" + std::to_string(n);
    auto comments = state_comments("wigner", n, p);
    comments.push_back("evaluator=" + to_string(w.evaluator) + " fallback_points=" + std::to_string(w.fallback_points) +
                       " max_imag_residue=" + tag(w.max_imag_residue));
    if (c.wants("csv")) {
      emit_csv(w, a.path(base + ".csv"), comments);
      a.add(base + ".csv", "wigner_csv");
    }
    if (c.wants("pgm")) {
      emit_pgm(w, a.path(base + ".pgm"));
      a.add(base + ".pgm", "wigner_pgm");
    }
    out << "n=" << n << " evaluator=" << to_string(w.evaluator) << " points=" << w.values.size()
        << " fallback=" << w.fallback_points << " min=" << tag(w.values.minCoeff()) << " max=" << tag(w.values.maxCoeff())
        << '\n';
  }
  a.write_manifest(c);
  return 0;
}

int run_figure1(const RunConfig& c, std::ostream& out) {
  const GridSpec g = c.effective_grid();
  const auto u = g.chi_axis(), k = g.p_axis();
  ArtifactSet a(c.effective_output_dir());
  nlohmann::json panels = nlohmann::json::array();
  for (double s : c.depth_list()) {
    const OscillatorParams p = OscillatorParams::from_depth(s, c.R, c.mu);
    for (int n : c.effective_n_list()) {
      const BoundState st(p, n);
      const WignerGrid w = scaled_wigner_grid(st, u, k, c.evaluator, grid_options(c));
      const std::string base = "fig1_s" + tag(s) + "_n" + std::to_string(n);
      auto comments = state_comments("figure1 panel, axes u=chi*sqrt(s), k=pR/sqrt(s)", n, p);
      comments.push_back("evaluator=" + to_string(w.evaluator) + " fallback_points=" + std::to_string(w.fallback_points));
      if (c.wants("csv")) {
        emit_csv(w, a.path(base + ".csv"), comments);
        a.add(base + ".csv", "wigner_csv");
        const double rs = std::sqrt(s);
        // Position marginal: density in u over the mirrored axis.
        const auto mu_ = marginal_momentum_integrated(w, c.R);
        auto [ua, uv] = mirror(u, mu_.values);
        CsvTable tu;
        tu.comments = comments;
        tu.comments.push_back("integral over k of W/R; reference |psi(u/sqrt(s))|^2/sqrt(s); tail estimate " +
                              tag(mu_.tail_estimate));
        tu.header = {"u [1]", "marginal [1]", "reference [1]"};
        Eigen::VectorXd ref(ua.size());
        for (Eigen::Index i = 0; i < ua.size(); ++i) ref(i) = std::pow(st.psi(ua(i) / rs), 2) / rs;
        tu.columns = {ua, uv, ref};
        emit_csv(tu, a.path(base + "_marginal_u.csv"));
        a.add(base + "_marginal_u.csv", "marginal_csv");
        // Momentum marginal: density in k.
        const auto mk = marginal_position_integrated(w, c.R);
        auto [ka, kv] = mirror(k, mk.values);
        CsvTable tk;
        tk.comments = comments;
        tk.comments.push_back("integral over u of W/R; reference |psi~(p)|^2 sqrt(s)/R; tail estimate " +
                              tag(mk.tail_estimate));
        tk.header = {"k [1]", "marginal [1]", "reference [1]"};
        Eigen::VectorXd refk(ka.size());
        for (Eigen::Index j = 0; j < ka.size(); ++j) refk(j) = std::norm(st.psi_momentum(ka(j) * rs / c.R)) * rs / c.R;
        tk.columns = {ka, kv, refk};
        emit_csv(tk, a.path(base + "_marginal_k.csv"));
        a.add(base + "_marginal_k.csv", "marginal_csv");
      }
      if (c.wants("pgm")) {
        emit_pgm(w, a.path(base + ".pgm"));
        a.add(base + ".pgm", "wigner_pgm");
      }
      panels.push_back({{"s", s}, {"n", n}, {"fallback_points", w.fallback_points}});
      out << base << " min=" << tag(w.values.minCoeff()) << " max=" << tag(w.values.maxCoeff())
          << " fallback=" << w.fallback_points << '\n';
    }
  }
  nlohmann::json extra;
  extra["figure"] = {{"axes", "u = chi*sqrt(s) (pgm columns), k = pR/sqrt(s) (pgm rows, top = max)"},
                     {"grid", g.to_string()},
                     {"quadrant", "chi >= 0, p >= 0; marginals mirrored to the full line"},
                     {"grayscale", "floor(255 (v - min)/(max - min) + 0.5); zero_gray in the pgm comment"},
                     {"panels", panels}};
  a.write_manifest(c, extra);
  out << "wrote " << a.size() << " artifacts and manifest.json to " << c.effective_output_dir().string() << '\n';
  return 0;
}

int run_verify(const RunConfig& c, std::ostream& out) {
  AcceptanceOptions opt;
  opt.tol_scale = c.tol;
  opt.threads = c.threads;
  if (c.output_dir) opt.scratch_dir = *c.output_dir / "repro";
  bool all = true;
  nlohmann::json report = nlohmann::json::array();
  for (const auto& line : calibration_report()) out << "# " << line << '\n';
  for (const auto& id : criterion_ids()) {
    const CriterionResult r = run_criterion(id, opt);
    all = all && r.passed;
    out << format_result(r) << std::endl;
    report.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
  }
  if (c.output_dir) {
    ArtifactSet a(*c.output_dir);
    std::ofstream os(a.path("verify.json"), std::ios::trunc);
    if (!os) throw IoError("cannot write '" + a.path("verify.json").string() + "'");
    os << nlohmann::json{{"tol_scale", c.tol}, {"criteria", report}, {"calibration", calibration_report()}}.dump(2)
       << '\n';
  }
  out << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << '\n';
  return all ? 0 : 1;
}

int run(const RunConfig& c, std::ostream& out) {
  switch (c.command) {
    case Command::eigen: return run_eigen(c, out);
    case Command::wavefun: return run_wavefun(c, out);
    case Command::wigner: return run_wigner(c, out);
    case Command::figure1: return run_figure1(c, out);
    case Command::verify: return run_verify(c, out);
  }
  return 2;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e)) return 2;
  if (dynamic_cast<const ConvergenceError*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const fs::filesystem_error*>(&e)) return 4;
  return 1;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_command_line(argc, argv, out);
    if (!cfg) return 0;
    return run(*cfg, out);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << "curvedwigner: " << (code == 2 ? "configuration error: " : code == 3 ? "nonconvergence: " : code == 4 ? "I/O error: " : "error: ")
        << e.what() << '\n';
    return code;
  }
}

}  // namespace cwig
