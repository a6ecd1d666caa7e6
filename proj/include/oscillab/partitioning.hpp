#pragma once

#include <map>
#include <variant>

#include "oscillab/geometry.hpp"

namespace osc {

struct WeightedPoints {
  std::vector<Vec> points;
  Vec weights;
  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
  double total() const;
  void check() const;  // ArgumentError on size mismatch, negative weight or zero total
};

struct Cell {
  std::string sign_pattern;  // one of '+'/'-' per bisector
  std::vector<int> indices;
  double weight = 0.0;
};

// Zero set of P = b_1 ... b_J; cells are the sign patterns of the bisectors b_j.
struct Partition {
  int dim = 0;
  Vec center;
  double scale = 1.0;
  std::vector<Polynomial> bisectors;  // in unit coordinates u = (x - center) / scale
  Polynomial poly;                    // expanded product, in x
  std::vector<Cell> cells;  // nonempty cells, sorted by sign pattern
  std::vector<int> wall_indices;
  bool degenerate = false;  // some cell could not be split (e.g. all of its weight at one point)

  int degree() const { return poly.degree(); }
  Polynomial bisector_in_x(std::size_t j) const;
  // Sign pattern of x; nullopt on the wall.
  std::optional<std::string> pattern_of(const Vec& x) const;
  double max_cell_weight() const;
};

struct PartitionConfig {
  std::uint64_t seed = 1;
  int restarts = 4;  // random starts per bisector, searched in parallel
  int sweeps = 6;    // Gauss-Newton steps per sharpness level
  int levels = 0;    // number of bisectors; 0 means ceil(n log2 d)
};

// Ham-sandwich style: ceil(n log2 d) polynomial bisectors, the j-th of the least degree D with
// a Veronese dimension able to halve all 2^j current cells at once.
Partition equal_mass_partition(const WeightedPoints& W, int d, const PartitionConfig& cfg = {});
Partition equal_mass_partition_serial(const WeightedPoints& W, int d,
                                      const PartitionConfig& cfg = {});
int bisector_degree(int n, int cells);

struct Line {
  Vec point;
  Vec direction;
};
// Connected runs of the line off Z(P). Each run lies in a single cell, so this is an upper bound
// on the cells visited; 0 if the line lies in Z(P).
int line_cell_crossings(const Polynomial& P, const Line& line);
// Distinct sign patterns of the partition met by the line.
int line_cell_crossings(const Partition& part, const Line& line);

struct ShrunkenCells {
  std::vector<std::vector<int>> retained;  // per cell of the partition
  std::vector<int> removed;                // indices inside the wall neighbourhood
  double retained_weight = 0.0;
  double wall_fraction = 0.0;
};
// Drops points with first-order distance min_j |b_j|/|grad b_j| <= r^{1/2+delta_m}.
ShrunkenCells shrunken_cells(const Partition& part, const WeightedPoints& W, double r,
                             double delta_m);
double wall_distance(const Partition& part, const Vec& x);
double wall_distance(const Polynomial& P, const Vec& x);

struct CellularOutcome {
  Partition partition;
  std::vector<std::vector<int>> cells;  // shrunken cells after the diameter split
  Vec cell_weights;
  double c_low = 0.0, c_high = 0.0;  // cell weights / (d^{-m} total), over the heavy half
  double retained_fraction = 0.0;
  int diameter_splits = 0;
};
struct AlgebraicOutcome {
  Variety Y;
  double captured_fraction = 0.0;
  std::string source;  // "hyperplane" or "wall"
};
using DichotomyOutcome = std::variant<CellularOutcome, AlgebraicOutcome>;

struct NeitherCaseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Algebraic if some Y = Z cap {q = 0} (q a fitted hyperplane or a wall bisector) holds half
// the weight in its r^{1/2+delta_m} neighbourhood; otherwise cellular.
DichotomyOutcome dichotomy_step(const WeightedPoints& W, const Variety& Z, int d, double r,
                                double delta_m, const PartitionConfig& cfg = {});

}  // namespace osc
