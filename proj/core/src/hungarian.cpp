#include <featuresort/hungarian.hpp>

#include <limits>

namespace featuresort {

namespace {

// Jonker-Volgenant shortest augmenting path with potentials, for n <= m.
// Returns col index per row. Strict '<' comparisons keep ties at the lowest
// index, making the result deterministic.
std::vector<int> solve_rows_leq_cols(const Eigen::MatrixXd& a) {
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(a.cols());
    constexpr double kInf = std::numeric_limits<double>::infinity();

    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<int> col_to_row(m + 1, 0);  // 0 = unassigned; rows are 1-based
    std::vector<int> way(m + 1, 0);

    for (int i = 1; i <= n; ++i) {
        col_to_row[0] = i;
        int j0 = 0;
        std::vector<double> minv(m + 1, kInf);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            const int i0 = col_to_row[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[col_to_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_to_row[j0] != 0);
        do {
            const int j1 = way[j0];
            col_to_row[j0] = col_to_row[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (col_to_row[j] > 0) row_to_col[col_to_row[j] - 1] = j - 1;
    }
    return row_to_col;
}

}  // namespace

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    const int m = static_cast<int>(cost.cols());
    if (n == 0 || m == 0) return std::vector<int>(n, -1);
    if (n <= m) return solve_rows_leq_cols(cost);

    const std::vector<int> col_to_row = solve_rows_leq_cols(cost.transpose());
    std::vector<int> row_to_col(n, -1);
    for (int j = 0; j < m; ++j) {
        if (col_to_row[j] >= 0) row_to_col[col_to_row[j]] = j;
    }
    return row_to_col;
}

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& row_to_col) {
    double total = 0.0;
    for (std::size_t i = 0; i < row_to_col.size(); ++i) {
        if (row_to_col[i] >= 0) total += cost(static_cast<int>(i), row_to_col[i]);
    }
    return total;
}

}  // namespace featuresort
