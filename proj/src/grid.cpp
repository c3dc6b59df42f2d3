#include "sheetqv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sheetqv {

namespace {

constexpr double kSnapTolerance = 1e-12;

void check_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0,1], got " +
                                std::to_string(x));
  }
}

}  // namespace

Grid::Grid(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("grid resolution must be >= 1");
}

ParamPoint::ParamPoint(double s, double t) : s_(s), t_(t) {
  check_unit(s, "s");
  check_unit(t, "t");
}

std::size_t floor_index(double s, std::size_t n) {
  if (n == 0) throw std::invalid_argument("floor_index: n must be >= 1");
  check_unit(s, "floor_index: s");
  if (s == 1.0) return n;
  const double x = s * static_cast<double>(n);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= kSnapTolerance * std::max(1.0, x)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::floor(x));
}

double max_norm_dist(const ParamPoint& p, const ParamPoint& q) {
  return std::max(std::abs(p.s() - q.s()), std::abs(p.t() - q.t()));
}

Lattice::Lattice(Grid grid)
    : grid_(grid),
      stride_(grid.points_per_side()),
      values_(stride_ * stride_, 0.0) {}

Lattice::Lattice(Grid grid, std::vector<double> values)
    : grid_(grid), stride_(grid.points_per_side()), values_(std::move(values)) {
  if (values_.size() != stride_ * stride_) {
    throw std::invalid_argument("lattice payload size does not match grid");
  }
}

double Lattice::value_at(const ParamPoint& p) const {
  return (*this)(floor_index(p.s(), n()), floor_index(p.t(), n()));
}

CellField::CellField(std::size_t n) : n_(n), values_(n * n, 0.0) {
  if (n == 0) throw std::invalid_argument("cell field needs n >= 1");
}

double rectangle_increment(const Lattice& field, std::size_t i, std::size_t j) {
  const std::size_t n = field.n();
  if (i < 1 || i > n || j < 1 || j > n) {
    throw std::out_of_range("rectangle_increment: cell (" + std::to_string(i) +
                            "," + std::to_string(j) + ") outside 1.." +
                            std::to_string(n));
  }
  return field(i - 1, j - 1) + field(i, j) - field(i - 1, j) - field(i, j - 1);
}

double block_increment(const Lattice& field, std::size_t i0, std::size_t j0,
                       std::size_t i1, std::size_t j1) {
  const std::size_t n = field.n();
  if (i0 > i1 || j0 > j1 || i1 > n || j1 > n) {
    throw std::out_of_range("block_increment: invalid index block");
  }
  return field(i0, j0) + field(i1, j1) - field(i0, j1) - field(i1, j0);
}

CellField cell_increments(const Lattice& field) {
  const std::size_t n = field.n();
  CellField out(n);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      out(i, j) =
          field(i - 1, j - 1) + field(i, j) - field(i - 1, j) - field(i, j - 1);
    }
  }
  return out;
}

Lattice accumulate(const CellField& cells) {
  const std::size_t n = cells.n();
  Lattice out{Grid(n)};
  for (std::size_t i = 1; i <= n; ++i) {
    double row = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      row += cells(i, j);
      out(i, j) = out(i - 1, j) + row;
    }
  }
  return out;
}

}  // namespace sheetqv
