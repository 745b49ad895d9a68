#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <clocale>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cwig/cli.hpp"
#include "cwig/error.hpp"
#include "cwig/io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cwig_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

int invoke(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "curvedwigner");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cwig::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

cwig::WignerGrid small_grid(std::initializer_list<std::initializer_list<double>> rows) {
  cwig::WignerGrid g;
  const auto r = static_cast<Eigen::Index>(rows.size()), c = static_cast<Eigen::Index>(rows.begin()->size());
  g.chi_axis = Eigen::VectorXd::LinSpaced(r, 0.0, double(r - 1));
  g.pR_axis = Eigen::VectorXd::LinSpaced(c, 0.0, double(c - 1));
  g.values.resize(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) g.values(i, j++) = v;
    ++i;
  }
  return g;
}

}  // namespace

TEST_CASE("grid spec parsing") {
  const auto g = cwig::GridSpec::parse("0:3:64,-1.5:6:32");
  CHECK(g.chi_max == 3.0);
  CHECK(g.n_chi == 64);
  CHECK(g.p_min == -1.5);
  CHECK(g.n_p == 32);
  CHECK(cwig::GridSpec::parse(g.to_string()).p_max == 6.0);
  CHECK_THROWS_AS(cwig::GridSpec::parse("0:3:64"), cwig::ConfigError);
  CHECK_THROWS_AS(cwig::GridSpec::parse("0:3:6.5,0:1:2"), cwig::ConfigError);
  CHECK_THROWS_AS(cwig::GridSpec::parse("0:x:6,0:1:2"), cwig::ConfigError);
}

TEST_CASE("config validation") {
  cwig::RunConfig c;
  c.command = cwig::Command::wigner;
  CHECK_THROWS_AS(c.validate(), cwig::ConfigError);  // no s or omega
  c.s = 4.0;
  CHECK_NOTHROW(c.validate());
  c.n_list = {5};
  CHECK_THROWS_AS(c.validate(), cwig::ConfigError);
  c.n_list = {4};
  CHECK_THROWS_AS(c.validate(), cwig::ConfigError);  // threshold state
  c.command = cwig::Command::eigen;
  CHECK_NOTHROW(c.validate());
  c.grid = cwig::GridSpec{0, 1, 1, 0, 1, 4};
  CHECK_THROWS_AS(c.validate(), cwig::ConfigError);
  c.grid.reset();
  c.formats = {"png"};
  CHECK_THROWS_AS(c.validate(), cwig::ConfigError);
  c.formats = {"csv"};
  c.tol = -1.0;
  CHECK_THROWS_AS(c.validate(), cwig::ConfigError);
}

TEST_CASE("JSON config and flag precedence") {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  const auto path = dir / "run.json";
  std::ofstream(path) << R"({"s": 10, "n_list": [1, 2], "R": 2.0, "evaluator": "quad", "grid": "0:1:4,0:2:5"})";
  std::ostringstream sink;
  const std::vector<std::string> args{"curvedwigner", "wigner", "--config", path.string(), "--n", "0"};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  const auto c = cwig::parse_command_line(static_cast<int>(argv.size()), argv.data(), sink);
  REQUIRE(c);
  CHECK(c->s == 10.0);
  CHECK(c->R == 2.0);
  CHECK(c->n_list == std::vector<int>{0});
  CHECK(c->evaluator == cwig::Evaluator::quadrature);
  CHECK(c->grid->n_p == 5);
  const auto round = cwig::apply_json({}, cwig::to_json(*c));
  CHECK(cwig::to_json(round) == cwig::to_json(*c));
  CHECK_THROWS_AS(cwig::apply_json({}, nlohmann::json{{"sigma", 1}}), cwig::ConfigError);
  CHECK_THROWS_AS(cwig::apply_json({}, nlohmann::json{{"s", "deep"}}), cwig::ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("eigen command") {
  std::string out;
  CHECK(invoke({"eigen", "--mu", "1", "--omega", "4.47213595499957939", "--R", "1"}, &out) == 0);
  CHECK(out.find("bound_states=5") != std::string::npos);
  for (const char* row : {"\n0,2", "\n1,5.5", "\n2,8", "\n3,9.5", "\n4,10"}) CHECK(out.find(row) != std::string::npos);
  CHECK(invoke({"eigen", "--s", "30"}, &out) == 0);
  CHECK(out.find("bound_states=31") != std::string::npos);
  // ω = 0: the strict bound n < s + 1 leaves n = 0 at E = 0, flagged non-normalizable.
  CHECK(invoke({"eigen", "--omega", "0"}, &out) == 0);
  CHECK(out.find("bound_states=1") != std::string::npos);
  CHECK(out.find("\n0,0,0") != std::string::npos);
}

TEST_CASE("exit codes") {
  std::string err;
  CHECK(invoke({"nonsense"}) == 2);
  CHECK(invoke({"eigen", "--s", "4", "--omega", "1"}) == 2);
  CHECK(invoke({"eigen", "--s", "-1"}) == 2);
  CHECK(invoke({"wigner", "--s", "4", "--grid", "0:1:1,0:1:2"}) == 2);
  CHECK(invoke({"eigen", "--s", "4", "--config", "/nonexistent/cfg.json"}) == 4);
  CHECK(invoke({"wigner", "--s", "4", "--n", "0", "--grid", "0:1:2,0:1:2", "--out", "/proc/forbidden"}, nullptr, &err) == 4);
  CHECK(err.find("/proc/forbidden") != std::string::npos);
  CHECK(cwig::exit_code_for(cwig::ConvergenceError("x")) == 3);
  CHECK(cwig::exit_code_for(cwig::IoError("x")) == 4);
  CHECK(cwig::exit_code_for(cwig::ConfigError("x")) == 2);
  CHECK(invoke({"--help"}) == 0);
}

TEST_CASE("csv writer") {
  const auto dir = scratch("csv");
  fs::create_directories(dir);
  const auto g = small_grid({{0.1, 1.0 / 3.0}, {-2.5e-300, 6.02214076e23}});
  cwig::emit_csv(g, dir / "g.csv", {"two by two"});
  std::ifstream is(dir / "g.csv");
  std::vector<std::string> lines;
  for (std::string l; std::getline(is, l);) lines.push_back(l);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "# two by two");
  CHECK(lines[2] == "0,0,0.10000000000000001");
  CHECK(lines[3] == "0,1,0.33333333333333331");  // χ outer, pR inner
  const auto back = cwig::read_csv(dir / "g.csv");
  CHECK(back.header.size() == 3);
  CHECK(back.rows(1, 2) == 1.0 / 3.0);
  CHECK(back.rows(2, 2) == -2.5e-300);
  CHECK(back.rows(3, 2) == 6.02214076e23);

  // Round trip to the last bit on random data, also under a comma-decimal locale.
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  cwig::CsvTable t;
  t.header = {"x", "y"};
  t.columns = {Eigen::VectorXd(200), Eigen::VectorXd(200)};
  for (int i = 0; i < 200; ++i) {
    t.columns[0](i) = u(rng);
    t.columns[1](i) = std::exp(u(rng) / 3.0);
  }
  cwig::emit_csv(t, dir / "t.csv");
  const auto r = cwig::read_csv(dir / "t.csv");
  std::setlocale(LC_NUMERIC, saved.c_str());
  CHECK(r.rows.col(0) == t.columns[0]);
  CHECK(r.rows.col(1) == t.columns[1]);
  fs::remove_all(dir);
}

TEST_CASE("pgm writer") {
  const auto dir = scratch("pgm");
  fs::create_directories(dir);
  CHECK(cwig::gray_level(-1.0, -1.0, 1.0) == 0);
  CHECK(cwig::gray_level(1.0, -1.0, 1.0) == 255);
  CHECK(cwig::gray_level(0.0, -1.0, 1.0) == 128);  // floor(127.5 + 0.5)
  CHECK(cwig::gray_level(3.0, 3.0, 3.0) == 128);

  // values(χ, pR) = {0, 1; -1, 0}: columns are χ, the top row is the largest pR.
  cwig::emit_pgm(small_grid({{0.0, 1.0}, {-1.0, 0.0}}), dir / "a.pgm");
  const auto img = cwig::read_pgm(dir / "a.pgm");
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.maxval == 255);
  CHECK(img.min == -1.0);
  CHECK(img.max == 1.0);
  CHECK(img.zero_gray == 128);
  CHECK(img.pixels == std::vector<unsigned char>{255, 128, 128, 0});

  cwig::emit_pgm(small_grid({{0.25, 0.25, 0.25}, {0.25, 0.25, 0.25}}), dir / "c.pgm");
  const auto flat = cwig::read_pgm(dir / "c.pgm");
  CHECK(flat.width == 2);
  CHECK(flat.height == 3);
  for (auto px : flat.pixels) CHECK(int(px) == flat.zero_gray);
  fs::remove_all(dir);
}

TEST_CASE("sha256") {
  const auto dir = scratch("sha");
  fs::create_directories(dir);
  std::ofstream(dir / "abc", std::ios::binary) << "abc";
  CHECK(cwig::sha256_file(dir / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  std::ofstream(dir / "empty", std::ios::binary).flush();
  CHECK(cwig::sha256_file(dir / "empty") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK_THROWS_AS(cwig::sha256_file(dir / "missing"), cwig::IoError);
  fs::remove_all(dir);
}

TEST_CASE("figure1 artifacts, marginals and determinism") {
  const auto a = scratch("fig_a"), b = scratch("fig_b");
  for (const auto& d : {a, b})
    CHECK(invoke({"figure1", "--s", "4", "--n", "0,1", "--grid", "0:6:64,0:5:48", "--out", d.string(), "--threads",
                  d == a ? "1" : "3"}) == 0);
  CHECK(cwig::verify_manifest(a).empty());
  int files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    if (e.path().filename() == "manifest.json") continue;
    ++files;
    CHECK(cwig::sha256_file(e.path()) == cwig::sha256_file(b / e.path().filename()));
  }
  CHECK(files == 2 * 4);  // per panel: grid csv, pgm, two marginals

  // Position marginal of (n=0, s=4) integrates to one.
  const auto m = cwig::read_csv(a / "fig1_s4_n0_marginal_u.csv");
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < m.rows.rows(); ++i)
    acc += 0.5 * (m.rows(i + 1, 0) - m.rows(i, 0)) * (m.rows(i, 1) + m.rows(i + 1, 1));
  CHECK(std::abs(acc - 1.0) < 1e-3);
  CHECK((m.rows.col(1) - m.rows.col(2)).cwiseAbs().maxCoeff() < 1e-3);
  const auto k = cwig::read_csv(a / "fig1_s4_n1_marginal_k.csv");
  CHECK((k.rows.col(1) - k.rows.col(2)).cwiseAbs().maxCoeff() < 1e-3);

  // Tampering is detected.
  std::ofstream(a / "fig1_s4_n0.csv", std::ios::app) << "# edited\n";
  const auto problems = cwig::verify_manifest(a);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("fig1_s4_n0.csv") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("wigner and wavefun commands write what the manifest lists") {
  const auto d = scratch("wig");
  std::string out;
  CHECK(invoke({"wigner", "--s", "4", "--n", "0,2", "--grid", "0:2:6,0:4:7", "--out", d.string(), "--format", "csv"}, &out) ==
        0);
  CHECK(fs::exists(d / "wigner_n2.csv"));
  CHECK_FALSE(fs::exists(d / "wigner_n2.pgm"));
  const auto g = cwig::read_csv(d / "wigner_n0.csv");
  CHECK(g.rows.rows() == 42);
  CHECK(g.rows(0, 2) == doctest::Approx(1.0 / M_PI).epsilon(1e-9));  // W(0,0) of the even ground state
  CHECK(cwig::verify_manifest(d).empty());
  CHECK(invoke({"wavefun", "--s", "4", "--n", "1", "--out", d.string()}, &out) == 0);
  const auto w = cwig::read_csv(d / "wavefun_n1_position.csv");
  double norm = 0.0;
  for (Eigen::Index i = 0; i + 1 < w.rows.rows(); ++i)
    norm += 0.5 * (w.rows(i + 1, 0) - w.rows(i, 0)) * (w.rows(i, 2) + w.rows(i + 1, 2));
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-3));
  fs::remove_all(d);
}
