#pragma once

// Artifact writers: CSV tables, 8-bit PGM images, SHA-256 checksums and the
// run manifest.

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cwig/wigner.hpp"

namespace cwig {

/// Shortest-safe decimal form with 17 significant digits, locale independent.
std::string format_double(double v);

/// Named columns of equal length.
struct CsvTable {
  std::vector<std::string> comments;  // written as "# ..." lines
  std::vector<std::string> header;
  std::vector<Eigen::VectorXd> columns;
};

void emit_csv(const CsvTable& table, const std::filesystem::path& path);

/// One row per grid point, χ outer and pR inner.
void emit_csv(const WignerGrid& grid, const std::filesystem::path& path, const std::vector<std::string>& comments = {});

struct CsvData {
  std::vector<std::string> header;
  Eigen::MatrixXd rows;
};
CsvData read_csv(const std::filesystem::path& path);

/// Linear gray map g(v) = floor(255 (v - min)/(max - min) + 1/2). A constant
/// image maps to 128.
int gray_level(double v, double vmin, double vmax);

/// Binary P5 image with χ along columns and pR decreasing down the rows, so
/// the origin of a quadrant grid sits at the lower left.
void emit_pgm(const WignerGrid& grid, const std::filesystem::path& path);

struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 0;
  double min = 0.0;
  double max = 0.0;
  int zero_gray = 0;
  std::vector<unsigned char> pixels;  // row-major from the top
};
PgmImage read_pgm(const std::filesystem::path& path);

std::string sha256_file(const std::filesystem::path& path);

struct ManifestEntry {
  std::string path;  // relative to the manifest directory
  std::string kind;
  std::string sha256;
};

/// Problems found when re-hashing the files listed in dir/manifest.json;
/// empty when every checksum matches.
std::vector<std::string> verify_manifest(const std::filesystem::path& dir);

}  // namespace cwig
