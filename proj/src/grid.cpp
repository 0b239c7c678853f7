#include "mfe/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace mfe {

TorusGrid::TorusGrid(double side_length, int points_per_side)
    : length_(side_length), n_(points_per_side), spacing_(side_length / points_per_side) {
  if (!(side_length > 0.0) || !std::isfinite(side_length))
    throw InvalidArgumentError("TorusGrid: side length must be positive and finite");
  if (points_per_side < 4)
    throw InvalidArgumentError("TorusGrid: need at least 4 points per side");
}

double TorusGrid::periodic_delta(double a, double b) const {
  double d = std::fabs(a - b);
  d = std::fmod(d, length_);
  return std::min(d, length_ - d);
}

double TorusGrid::periodic_dist2(double x1, double y1, double x2, double y2) const {
  const double dx = periodic_delta(x1, x2);
  const double dy = periodic_delta(y1, y2);
  return dx * dx + dy * dy;
}

ScalarField::ScalarField(const TorusGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw InvalidArgumentError("ScalarField: sample count does not match grid");
  if (!finite()) throw InvalidFieldError("ScalarField: non-finite sample");
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

bool ScalarField::finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField& ScalarField::operator+=(double c) {
  for (double& v : values_) v += c;
  return *this;
}

void ScalarField::axpy(double s, const ScalarField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * other.values_[k];
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid() != b.grid()) throw GridMismatchError("fields live on different grids");
}

WeightField::WeightField(ScalarField rho) : rho_(std::move(rho)) {
  rho_min_ = rho_.min();
  rho_max_ = rho_.max();
  if (!(rho_min_ > 0.0))
    throw InvalidArgumentError("WeightField: weight must be strictly positive everywhere");
  unit_ = rho_min_ == 1.0 && rho_max_ == 1.0;
}

namespace {

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

bool is_weight_preset(const std::string& spec) {
  return spec.rfind("const:", 0) == 0 || spec.rfind("cosine:", 0) == 0 ||
         spec.rfind("bump:", 0) == 0;
}

WeightField make_weight_preset(const TorusGrid& grid, const std::string& spec) {
  const int n = grid.n();
  const double L = grid.length();
  ScalarField rho(grid);

  if (spec.rfind("const:", 0) == 0) {
    double c;
    if (!parse_double(spec.substr(6), c))
      throw InvalidArgumentError("weight preset: bad constant in '" + spec + "'");
    for (std::size_t k = 0; k < rho.size(); ++k) rho[k] = c;
  } else if (spec.rfind("cosine:", 0) == 0) {
    double a;
    if (!parse_double(spec.substr(7), a))
      throw InvalidArgumentError("weight preset: bad amplitude in '" + spec + "'");
    if (!(std::fabs(a) < 1.0))
      throw InvalidArgumentError("weight preset: cosine amplitude must satisfy |a| < 1");
    const double w = 2.0 * std::acos(-1.0) / L;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rho(i, j) = 1.0 + a * std::cos(w * grid.coord(i)) * std::cos(w * grid.coord(j));
  } else if (spec.rfind("bump:", 0) == 0) {
    const std::string rest = spec.substr(5);
    const std::size_t colon = rest.find(':');
    double a, s;
    if (colon == std::string::npos || !parse_double(rest.substr(0, colon), a) ||
        !parse_double(rest.substr(colon + 1), s))
      throw InvalidArgumentError("weight preset: expected bump:<a>:<s> in '" + spec + "'");
    if (!(s > 0.0)) throw InvalidArgumentError("weight preset: bump width must be positive");
    const double x0 = L / 2.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double d2 = grid.periodic_dist2(grid.coord(i), grid.coord(j), x0, x0);
        rho(i, j) = 1.0 + a * std::exp(-d2 / (s * s));
      }
  } else {
    throw InvalidArgumentError("unknown weight preset '" + spec + "'");
  }
  return WeightField(std::move(rho));
}

void write_field(std::ostream& out, const ScalarField& f) {
  const TorusGrid& g = f.grid();
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", g.length());
  out << "torus L=" << buf << " N=" << g.n() << "\n";
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", f(i, j));
      out << buf << (j + 1 == g.n() ? "" : " ");
    }
    out << "\n";
  }
}

void write_field(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_field(out, f);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ScalarField read_field(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw IoError("field file: missing header");
  std::istringstream hs(header);
  std::string tag, lpart, npart;
  if (!(hs >> tag >> lpart >> npart) || tag != "torus" || lpart.rfind("L=", 0) != 0 ||
      npart.rfind("N=", 0) != 0)
    throw IoError("field file: malformed header '" + header + "'");
  double L;
  if (!parse_double(lpart.substr(2), L)) throw IoError("field file: bad L in header");
  int n = 0;
  try {
    std::size_t pos = 0;
    n = std::stoi(npart.substr(2), &pos);
    if (pos != npart.size() - 2) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw IoError("field file: bad N in header");
  }
  if (n < 4 || !(L > 0.0)) throw IoError("field file: invalid grid in header");

  TorusGrid grid(L, n);
  std::vector<double> values;
  values.reserve(grid.size());
  double v;
  while (values.size() < grid.size() && in >> v) values.push_back(v);
  if (values.size() != grid.size()) throw IoError("field file: truncated data section");
  std::string trailing;
  if (in >> trailing) throw IoError("field file: trailing data");
  try {
    return ScalarField(grid, std::move(values));
  } catch (const InvalidFieldError&) {
    throw IoError("field file: non-finite sample");
  }
}

ScalarField read_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_field(in);
}

}  // namespace mfe
