#ifndef MFE_GRID_HPP
#define MFE_GRID_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mfe/errors.hpp"

namespace mfe {

/// Uniform discretization of the flat square torus [0,L)^2 with N x N nodes.
///
/// Node (i,j) sits at (i*h, j*h), h = L/N. Index arithmetic is periodic and
/// fields over the grid are stored row-major (i major). The quadrature weight
/// of every node is h^2, so integrating the constant 1 gives L^2 up to
/// rounding.
class TorusGrid {
 public:
  TorusGrid(double side_length, int points_per_side);

  double length() const { return length_; }
  int n() const { return n_; }
  double spacing() const { return spacing_; }
  double volume() const { return length_ * length_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

  /// Periodic wrap of a (possibly out-of-range) index into [0, N).
  int wrap(int i) const {
    int r = i % n_;
    return r < 0 ? r + n_ : r;
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(wrap(i)) * n_ + wrap(j);
  }
  double coord(int i) const { return wrap(i) * spacing_; }

  /// Shortest periodic distance between two coordinates in one axis.
  double periodic_delta(double a, double b) const;
  /// Squared periodic distance between points (x1,y1), (x2,y2).
  double periodic_dist2(double x1, double y1, double x2, double y2) const;

  bool operator==(const TorusGrid& other) const {
    return length_ == other.length_ && n_ == other.n_;
  }
  bool operator!=(const TorusGrid& other) const { return !(*this == other); }

 private:
  double length_;
  int n_;
  double spacing_;
};

/// Real scalar samples over a TorusGrid, row-major.
class ScalarField {
 public:
  /// Zero field.
  explicit ScalarField(const TorusGrid& grid);
  /// Takes ownership of samples; validates length and finiteness.
  ScalarField(const TorusGrid& grid, std::vector<double> values);

  const TorusGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double max() const;
  double min() const;
  bool finite() const;

  // in-place arithmetic, grids must match
  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);
  ScalarField& operator+=(double c);

  /// this += s * other
  void axpy(double s, const ScalarField& other);

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Strictly positive weight field rho with cached extrema.
///
/// Construction rejects any sample <= 0. A weight with
/// rho_min < 1e-6 * rho_max is accepted but flagged as near-degenerate.
class WeightField {
 public:
  explicit WeightField(ScalarField rho);

  const ScalarField& field() const { return rho_; }
  const TorusGrid& grid() const { return rho_.grid(); }
  double operator()(int i, int j) const { return rho_(i, j); }
  double operator[](std::size_t k) const { return rho_[k]; }

  double rho_min() const { return rho_min_; }
  double rho_max() const { return rho_max_; }
  bool near_degenerate() const { return rho_min_ < 1e-6 * rho_max_; }
  bool is_unit() const { return unit_; }

 private:
  ScalarField rho_;
  double rho_min_;
  double rho_max_;
  bool unit_;
};

/// Build a weight from a preset string:
///   const:<c>        rho = c
///   cosine:<a>       rho = 1 + a cos(2 pi x / L) cos(2 pi y / L), |a| < 1
///   bump:<a>:<s>     rho = 1 + a exp(-d^2(x, x0)/s^2), x0 = torus midpoint
/// Throws InvalidArgumentError on malformed strings or nonpositive weights.
WeightField make_weight_preset(const TorusGrid& grid, const std::string& spec);

/// True if the string looks like a weight preset rather than a file path.
bool is_weight_preset(const std::string& spec);

// --- field file format -------------------------------------------------
//
// Header line `torus L=<float> N=<int>` followed by N lines of N
// whitespace-separated decimal values, row-major. Values are written with
// 17 significant digits so files round-trip exactly.

void write_field(std::ostream& out, const ScalarField& f);
void write_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field(std::istream& in);
ScalarField read_field(const std::filesystem::path& path);

}  // namespace mfe

#endif  // MFE_GRID_HPP
