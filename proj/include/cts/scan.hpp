#pragma once

// Parameter-plane scans over (Gamma, z): classification of every cell,
// PPM and CSV output, and connected components of the colour classes.

#include "cts/spectrum.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace cts
{

inline constexpr const char *kVersion = "1.0.0";

enum class GammaAxisMode
{
  Linear,
  Normalized, ///< axis values are Gamma/(1+Gamma)
};

enum class MassMode
{
  Gamma,   ///< m = 1, m1 = Gamma
  Epsilon, ///< m = eps, m1 = 1, with eps = 1/Gamma
};

struct GridSpec
{
  GammaAxisMode gamma_mode = GammaAxisMode::Linear;
  double gamma_min = 0, gamma_max = 1;
  int n_gamma = 2;
  double z_min = -1, z_max = 1;
  int n_z = 2;
  MassMode mass_mode = MassMode::Gamma;
  Precision precision = Precision::Double; ///< Double re-runs ill-conditioned cells in Extended

  /// Throws DomainError.
  void validate() const;

  /// Cell centres.
  double axis_value(int i) const;
  double gamma_at(int i) const;
  double z_at(int j) const;

  std::string to_json() const;
  static GridSpec from_json(const std::string &text);
  static GridSpec load(const std::string &path);
};

/// Colour classes of the region map; Other includes degenerate cells.
enum class CellColor : std::uint8_t
{
  E6,
  E4CS1,
  E2CS2,
  E5H1,
  E3H1CS1,
  Forbidden,
  Other,
};

std::string to_string(CellColor c);
std::array<std::uint8_t, 3> rgb(CellColor c);

struct Cell
{
  ClassCode code = ClassCode::Other;
  bool degenerate = false;
  bool forbidden = false;
  bool failed = false; ///< the spectrum evaluation threw
  bool promoted = false; ///< re-evaluated in extended precision
  int omega_sq_sign = 0;
  std::array<std::complex<double>, 6> roots{};

  CellColor color() const;
};

struct RegionMap
{
  GridSpec spec;
  std::vector<Cell> cells; ///< index i_gamma * n_z + j_z

  const Cell &at(int i, int j) const { return cells[std::size_t(i) * spec.n_z + j]; }
  Cell &at(int i, int j) { return cells[std::size_t(i) * spec.n_z + j]; }
};

/// Worker count: explicit value if positive, else CTS_THREADS, else the
/// hardware concurrency.
int resolve_threads(int requested);

/// Classify every cell. Per-cell failures become marks, never exceptions.
RegionMap run_scan(const GridSpec &spec, int threads = 0);

/// Binary PPM, one pixel per cell, Gamma to the right and z upwards.
void render_ppm(const RegionMap &map, const std::string &path);

/// CSV: gamma, z, class, degenerate, omega_sq_sign, M1re, M1im, ..., M6im.
void export_grid(const RegionMap &map, const std::string &path);

struct GridRow
{
  double gamma = 0, z = 0;
  std::string cls;
  bool degenerate = false;
  int omega_sq_sign = 0;
  std::array<std::complex<double>, 6> roots{};
};

std::vector<GridRow> read_grid(const std::string &path);

/// JSON provenance written next to an output file as PATH.json.
void write_sidecar(const std::string &output_path, const GridSpec &spec, const std::string &command);

struct Component
{
  CellColor color = CellColor::Other;
  int size = 0;
  int i_min = 0, i_max = 0, j_min = 0, j_max = 0; ///< bounding box in cell indices
  double z_mean = 0;
};

/// 4-connected components of equal colour, largest first within a colour.
std::vector<Component> label_components(const RegionMap &map);

} // namespace cts
