#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sheetqv {

/// Regular grid G_n = {(i/n, j/n) : 0 <= i, j <= n} on the unit square.
class Grid {
 public:
  explicit Grid(std::size_t n);

  std::size_t n() const { return n_; }
  std::size_t points_per_side() const { return n_ + 1; }
  double spacing() const { return 1.0 / static_cast<double>(n_); }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t n_;
};

/// Grid cell (i, j), 1-based, covering [(i-1)/n, i/n] x [(j-1)/n, j/n].
struct Cell {
  std::size_t i;
  std::size_t j;
};

/// A point of the parameter square [0,1]^2.
class ParamPoint {
 public:
  ParamPoint(double s, double t);

  double s() const { return s_; }
  double t() const { return t_; }

  /// Partial order: this <= other in both coordinates.
  bool precedes(const ParamPoint& other) const {
    return s_ <= other.s_ && t_ <= other.t_;
  }

  bool operator==(const ParamPoint&) const = default;

 private:
  double s_;
  double t_;
};

/// [n s] with the full-grid convention floor_index(1, n) = n. Inputs within a
/// relative 1e-12 of an integer multiple of 1/n snap to that index.
std::size_t floor_index(double s, std::size_t n);

/// max(|s - s'|, |t - t'|)
double max_norm_dist(const ParamPoint& p, const ParamPoint& q);

/// Dense (n+1) x (n+1) row-major field of values at the grid points. Row index
/// i runs along s, column index j along t.
class Lattice {
 public:
  explicit Lattice(Grid grid);
  Lattice(Grid grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::size_t n() const { return grid_.n(); }

  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * stride_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values_[i * stride_ + j];
  }

  /// Value at an arbitrary point using the cadlag (floor) convention.
  double value_at(const ParamPoint& p) const;

  std::span<const double> values() const { return values_; }

  bool operator==(const Lattice&) const = default;

 private:
  Grid grid_;
  std::size_t stride_;
  std::vector<double> values_;
};

/// Dense n x n field of per-cell quantities, addressed by 1-based (i, j).
class CellField {
 public:
  explicit CellField(std::size_t n);

  std::size_t n() const { return n_; }

  double operator()(std::size_t i, std::size_t j) const {
    return values_[(i - 1) * n_ + (j - 1)];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values_[(i - 1) * n_ + (j - 1)];
  }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool operator==(const CellField&) const = default;

 private:
  std::size_t n_;
  std::vector<double> values_;
};

/// Four-corner alternating sum of `field` over cell (i, j).
double rectangle_increment(const Lattice& field, std::size_t i, std::size_t j);

/// Increment of `field` over the index block (i0, i1] x (j0, j1].
double block_increment(const Lattice& field, std::size_t i0, std::size_t j0,
                       std::size_t i1, std::size_t j1);

/// All cell increments of `field`.
CellField cell_increments(const Lattice& field);

/// Additive partial-sum field: value(i, j) = sum over cells a <= i, b <= j.
/// Rows are accumulated left to right, then added onto the previous row, so
/// two fields built from bit-equal cells are bit-equal.
Lattice accumulate(const CellField& cells);

}  // namespace sheetqv
