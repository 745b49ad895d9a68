#include "cwig/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "cwig/error.hpp"

namespace cwig {
namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode | std::ios::trunc);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

double parse_double(std::string_view tok, const std::filesystem::path& path) {
  double v = 0.0;
  const auto* b = tok.data();
  const auto* e = tok.data() + tok.size();
  while (b < e && *b == ' ') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) throw IoError("bad number '" + std::string(tok) + "' in '" + path.string() + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) throw DomainError("format_double: non-finite value");
  std::array<char, 40> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  if (ec != std::errc()) throw DomainError("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

void emit_csv(const CsvTable& table, const std::filesystem::path& path) {
  if (table.header.size() != table.columns.size()) throw DomainError("emit_csv: header and column count differ");
  const Eigen::Index rows = table.columns.empty() ? 0 : table.columns.front().size();
  for (const auto& c : table.columns) {
    if (c.size() != rows) throw DomainError("emit_csv: ragged columns");
  }
  auto os = open_out(path);
  for (const auto& c : table.comments) os << "# " << c << '\n';
  for (std::size_t j = 0; j < table.header.size(); ++j) os << (j ? "," : "") << table.header[j];
  os << '\n';
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) os << (j ? "," : "") << format_double(table.columns[j](i));
    os << '\n';
  }
  finish(os, path);
}

void emit_csv(const WignerGrid& grid, const std::filesystem::path& path, const std::vector<std::string>& comments) {
  const auto r = grid.chi_axis.size(), c = grid.pR_axis.size();
  CsvTable t;
  t.comments = comments;
  if (grid.scaled) {
    t.header = {"u=chi*sqrt(s) [1]", "k=pR/sqrt(s) [1]", "W/R [1]"};
  } else {
    t.header = {"chi [1]", "pR [1]", "W [length]"};
  }
  t.columns.assign(3, Eigen::VectorXd(r * c));
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) {
      t.columns[0](i * c + j) = grid.chi_axis(i);
      t.columns[1](i * c + j) = grid.pR_axis(j);
      t.columns[2](i * c + j) = grid.values(i, j);
    }
  }
  emit_csv(t, path);
}

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  CsvData out;
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (out.header.empty()) {
      out.header = split(line, ',');
      continue;
    }
    std::vector<double> row;
    for (const auto& tok : split(line, ',')) row.push_back(parse_double(tok, path));
    if (row.size() != out.header.size()) throw IoError("ragged row in '" + path.string() + "'");
    rows.push_back(std::move(row));
  }
  out.rows.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(out.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) out.rows(i, j) = rows[i][j];
  return out;
}

int gray_level(double v, double vmin, double vmax) {
  if (!(vmax > vmin)) return 128;
  const double g = std::floor(255.0 * (v - vmin) / (vmax - vmin) + 0.5);
  return static_cast<int>(std::clamp(g, 0.0, 255.0));
}

void emit_pgm(const WignerGrid& grid, const std::filesystem::path& path) {
  if (!grid.values.allFinite()) throw DomainError("emit_pgm: non-finite grid");
  const auto width = grid.values.rows(), height = grid.values.cols();
  const double lo = grid.values.minCoeff(), hi = grid.values.maxCoeff();
  auto os = open_out(path, std::ios::out | std::ios::binary);
  os << "P5\n# min=" << format_double(lo) << " max=" << format_double(hi) << " zero_gray=" << gray_level(0.0, lo, hi)
     << '\n'
     << width << ' ' << height << "\n255\n";
  std::vector<char> px(static_cast<std::size_t>(width * height));
  for (Eigen::Index r = 0; r < height; ++r)
    for (Eigen::Index c = 0; c < width; ++c)
      px[r * width + c] = static_cast<char>(gray_level(grid.values(c, height - 1 - r), lo, hi));
  os.write(px.data(), static_cast<std::streamsize>(px.size()));
  finish(os, path);
}

PgmImage read_pgm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  PgmImage img;
  std::string magic;
  is >> magic;
  if (magic != "P5") throw IoError("'" + path.string() + "' is not a binary PGM");
  is >> std::ws;
  while (is.peek() == '#') {
    std::string line;
    std::getline(is, line);
    std::istringstream fields(line.substr(1));
    fields.imbue(std::locale::classic());
    std::string kv;
    while (fields >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "min") img.min = parse_double(val, path);
      if (key == "max") img.max = parse_double(val, path);
      if (key == "zero_gray") img.zero_gray = static_cast<int>(parse_double(val, path));
    }
    is >> std::ws;
  }
  is >> img.width >> img.height >> img.maxval;
  is.get();
  if (!is || img.width <= 0 || img.height <= 0) throw IoError("bad PGM header in '" + path.string() + "'");
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  is.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (!is) throw IoError("truncated PGM '" + path.string() + "'");
  return img;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw IoError("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (is) {
    is.read(buf.data(), buf.size());
    if (is.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(is.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

std::vector<std::string> verify_manifest(const std::filesystem::path& dir) {
  const auto mpath = dir / "manifest.json";
  std::ifstream is(mpath);
  if (!is) throw IoError("cannot open '" + mpath.string() + "'");
  nlohmann::json m;
  try {
    is >> m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + mpath.string() + "': " + e.what());
  }
  std::vector<std::string> problems;
  for (const auto& f : m.at("files")) {
    const auto rel = f.at("path").get<std::string>();
    const auto p = dir / rel;
    if (!std::filesystem::exists(p)) {
      problems.push_back(rel + ": missing");
    } else if (sha256_file(p) != f.at("sha256").get<std::string>()) {
      problems.push_back(rel + ": checksum mismatch");
    }
  }
  return problems;
}

}  // namespace cwig
