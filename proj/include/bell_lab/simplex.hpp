#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "bell_lab/errors.hpp"

namespace bell {

/// Dense two-phase primal simplex for desk-scale linear programs in standard
/// form:  min c.z  subject to  A z = d, z >= 0.  Bland's rule throughout, so
/// the pivot sequence is deterministic and cycling is impossible. Rows with
/// negative right-hand side are negated up front.
class SimplexSolver {
public:
    enum class Status { optimal, infeasible, iteration_limit };

    struct Result {
        Status status;
        double objective = 0.0;         // of the original problem when optimal
        double phase1_objective = 0.0;  // residual infeasibility when infeasible
        std::vector<double> z;
    };

    SimplexSolver(std::vector<std::vector<double>> a, std::vector<double> d, std::vector<double> c,
                  double eps = 1e-9, std::size_t max_iterations = 200'000)
        : a_(std::move(a)), d_(std::move(d)), c_(std::move(c)), eps_(eps), max_iter_(max_iterations) {
        m_ = a_.size();
        n_ = m_ == 0 ? 0 : a_.front().size();
        if (d_.size() != m_ || c_.size() != n_) throw ValidationError("simplex: dimension mismatch");
        for (std::size_t i = 0; i < m_; ++i)
            if (a_[i].size() != n_) throw ValidationError("simplex: ragged constraint matrix");
    }

    Result solve() {
        // Tableau over original variables plus one artificial per row.
        const std::size_t cols = n_ + m_;
        tab_.assign(m_, std::vector<double>(cols + 1, 0.0));
        basis_.assign(m_, 0);
        for (std::size_t i = 0; i < m_; ++i) {
            const double sign = d_[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) tab_[i][j] = sign * a_[i][j];
            tab_[i][n_ + i] = 1.0;
            tab_[i][cols] = sign * d_[i];
            basis_[i] = n_ + i;
        }

        // Phase 1: minimize the sum of artificials.
        std::vector<double> phase1_cost(cols, 0.0);
        for (std::size_t j = n_; j < cols; ++j) phase1_cost[j] = 1.0;
        if (!run_phase(phase1_cost, cols)) return {Status::iteration_limit, 0.0, 0.0, {}};

        const double infeas = objective_of(phase1_cost);
        if (infeas > eps_) {
            Result r{Status::infeasible, 0.0, infeas, {}};
            return r;
        }

        // Drive any residual artificial out of the basis; drop rows that have
        // no real pivot (they are redundant constraints).
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            std::size_t enter = n_;
            for (std::size_t j = 0; j < n_; ++j)
                if (std::abs(tab_[i][j]) > 1e-9) {
                    enter = j;
                    break;
                }
            if (enter < n_) pivot(i, enter);
        }

        // Phase 2 on the original objective, artificials forbidden.
        std::vector<double> phase2_cost(cols, 0.0);
        for (std::size_t j = 0; j < n_; ++j) phase2_cost[j] = c_[j];
        if (!run_phase(phase2_cost, n_)) return {Status::iteration_limit, 0.0, 0.0, {}};

        Result r{Status::optimal, objective_of(phase2_cost), 0.0, std::vector<double>(n_, 0.0)};
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) r.z[basis_[i]] = tab_[i].back();
        return r;
    }

private:
    // One simplex phase: price with `cost`, allow entering columns < allowed_cols.
    bool run_phase(const std::vector<double>& cost, std::size_t allowed_cols) {
        for (std::size_t iter = 0; iter < max_iter_; ++iter) {
            // reduced cost of column j: cost_j - cost_B . column_j
            std::size_t enter = allowed_cols;
            for (std::size_t j = 0; j < allowed_cols; ++j) {
                double red = cost[j];
                for (std::size_t i = 0; i < m_; ++i) red -= cost[basis_[i]] * tab_[i][j];
                if (red < -eps_) {
                    enter = j;  // Bland: first eligible index
                    break;
                }
            }
            if (enter == allowed_cols) return true;  // optimal for this phase

            std::size_t leave = m_;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (tab_[i][enter] > eps_) {
                    const double ratio = tab_[i].back() / tab_[i][enter];
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 && (leave == m_ || basis_[i] < basis_[leave]))) {
                        best_ratio = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m_) {
                // Unbounded phase. Phase 1 is never unbounded; phase 2 callers
                // in this library always pass bounded programs, so treat as a
                // solver failure rather than guessing.
                return false;
            }
            pivot(leave, enter);
        }
        return false;
    }

    void pivot(std::size_t row, std::size_t col) {
        const double piv = tab_[row][col];
        for (double& v : tab_[row]) v /= piv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row) continue;
            const double factor = tab_[i][col];
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < tab_[i].size(); ++j) tab_[i][j] -= factor * tab_[row][j];
        }
        basis_[row] = col;
    }

    double objective_of(const std::vector<double>& cost) const {
        double obj = 0.0;
        for (std::size_t i = 0; i < m_; ++i) obj += cost[basis_[i]] * tab_[i].back();
        return obj;
    }

    std::vector<std::vector<double>> a_;
    std::vector<double> d_;
    std::vector<double> c_;
    double eps_;
    std::size_t max_iter_;
    std::size_t m_ = 0, n_ = 0;

    std::vector<std::vector<double>> tab_;
    std::vector<std::size_t> basis_;
};

} // namespace bell
