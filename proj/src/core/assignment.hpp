#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace segcx {

struct Assignment {
  // row_to_col[r] is the matched column, or -1 when the row is left over
  // (only possible when rows > cols).
  std::vector<int> row_to_col;
  // Sum of the input matrix entries over the chosen pairs.
  double total = 0.0;
};

/// Exact minimum-cost rectangular assignment (Hungarian method with dual
/// potentials) over a row-major `rows` x `cols` matrix. Exactly
/// min(rows, cols) pairs are formed; this is equivalent to padding the smaller
/// side with zero-cost dummies and dropping the dummy pairs.
Assignment solve_assignment(std::span<const double> cost, std::size_t rows, std::size_t cols);

/// Maximum-benefit rectangular assignment by forward auction with
/// epsilon-scaling. The returned total is within `tolerance` of the optimum
/// (the final epsilon is tolerance / max(rows, cols)). Intended for large
/// dense instances where the cubic exact method is too slow.
Assignment solve_assignment_auction(std::span<const double> benefit, std::size_t rows, std::size_t cols,
                                    double tolerance = 1e-6);

struct Transportation {
  std::vector<long long> flow;  // row-major rows x cols shipped units
  double total = 0.0;           // sum of cost * flow
};

/// Exact minimum-cost transportation by successive shortest paths with
/// potentials: row r supplies row_mass[r] units, column c accepts up to
/// col_mass[c], and min(total supply, total capacity) units are shipped. With
/// unit masses this is the rectangular assignment problem; with repeated rows
/// or columns collapsed into masses it has the same optimum as the expanded
/// assignment.
Transportation solve_transportation(std::span<const double> cost, std::span<const long long> row_mass,
                                    std::span<const long long> col_mass);

}  // namespace segcx
