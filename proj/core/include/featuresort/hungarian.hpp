#pragma once

#include <Eigen/Dense>

#include <vector>

namespace featuresort {

/// Minimum-cost linear assignment (Jonker-Volgenant shortest augmenting
/// path). Handles rectangular matrices: exactly min(rows, cols) pairs are
/// assigned. Returns, per row, the assigned column or -1. Ties are broken
/// toward lower indices, so the result is deterministic.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

/// Total cost of an assignment, summed in row order.
double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& row_to_col);

}  // namespace featuresort
