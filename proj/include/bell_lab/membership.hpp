#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bell_lab/behavior.hpp"
#include "bell_lab/errors.hpp"
#include "bell_lab/lhv.hpp"
#include "bell_lab/simplex.hpp"

namespace bell {

/// A separating functional proving a behavior lies outside the local polytope:
/// bell_value(behavior) = witnessed_value > local_bound + tol. Coefficients
/// are canonicalized so that every joint-input block has minimum 0 and the
/// largest coefficient is 1, which makes gaps comparable across runs (the
/// CHSH-type functional is the fixed point of this normalization).
struct NonlocalityCertificate {
    BellFunctional functional;
    double witnessed_value;
    double local_bound;
    std::string normalization = "per-input block minimum 0, maximum coefficient 1";

    double gap() const { return witnessed_value - local_bound; }
};

struct MembershipResult {
    bool local;
    std::optional<LocalModel> model;                     // when local
    double residual = 0.0;                               // round-trip error of the model
    std::optional<NonlocalityCertificate> certificate;   // when nonlocal
};

namespace detail {

inline BellFunctional canonicalize_certificate(BellFunctional f) {
    const Scenario& s = f.scenario();
    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
        double lo = std::numeric_limits<double>::infinity();
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) lo = std::min(lo, f.coefficient(ji, jo));
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) f.coefficient(ji, jo) -= lo;
    }
    double hi = 0.0;
    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji)
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) hi = std::max(hi, f.coefficient(ji, jo));
    if (hi > 0.0)
        for (Index ji = 0; ji < s.n_joint_inputs(); ++ji)
            for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) f.coefficient(ji, jo) /= hi;
    return f;
}

/// Widest-gap separating functional, solved as an LP over box-bounded
/// coefficients:
///   max  f.b - f0   s.t.  f.V_j <= f0 for every vertex j,  -1 <= f_c <= 1.
/// Standard form uses f = u - w with u,w in [0,1] and a free f0 split in two.
inline std::optional<BellFunctional> separating_functional(
    const Behavior& b, const std::vector<DeterministicStrategy>& vertices, double tol) {
    const Scenario& s = b.scenario();
    const std::size_t cells = s.n_cells();
    const std::size_t nv = vertices.size();

    // columns: u (cells) | w (cells) | f0+ | f0- | slack per vertex | bound slacks for u | for w
    const std::size_t col_u = 0, col_w = cells, col_f0p = 2 * cells, col_f0m = 2 * cells + 1;
    const std::size_t col_sv = 2 * cells + 2, col_bu = col_sv + nv, col_bw = col_bu + cells;
    const std::size_t n_cols = col_bw + cells;
    const std::size_t n_rows = nv + 2 * cells;

    std::vector<std::vector<double>> a(n_rows, std::vector<double>(n_cols, 0.0));
    std::vector<double> rhs(n_rows, 0.0);
    std::vector<double> cost(n_cols, 0.0);

    for (std::size_t j = 0; j < nv; ++j) {
        const Behavior vb = vertices[j].to_behavior();
        for (std::size_t cidx = 0; cidx < cells; ++cidx) {
            a[j][col_u + cidx] = vb.table()[cidx];
            a[j][col_w + cidx] = -vb.table()[cidx];
        }
        a[j][col_f0p] = -1.0;
        a[j][col_f0m] = 1.0;
        a[j][col_sv + j] = 1.0;
        rhs[j] = 0.0;
    }
    for (std::size_t cidx = 0; cidx < cells; ++cidx) {
        a[nv + cidx][col_u + cidx] = 1.0;
        a[nv + cidx][col_bu + cidx] = 1.0;
        rhs[nv + cidx] = 1.0;
        a[nv + cells + cidx][col_w + cidx] = 1.0;
        a[nv + cells + cidx][col_bw + cidx] = 1.0;
        rhs[nv + cells + cidx] = 1.0;
    }
    // maximize f.b - f0  ==  minimize -(u-w).b + f0
    for (std::size_t cidx = 0; cidx < cells; ++cidx) {
        cost[col_u + cidx] = -b.table()[cidx];
        cost[col_w + cidx] = b.table()[cidx];
    }
    cost[col_f0p] = 1.0;
    cost[col_f0m] = -1.0;

    SimplexSolver lp(std::move(a), std::move(rhs), std::move(cost));
    const auto sol = lp.solve();
    if (sol.status != SimplexSolver::Status::optimal)
        throw NumericError("membership: separation LP did not converge");

    const double gap = -sol.objective;
    if (gap <= tol) return std::nullopt;

    BellFunctional f = BellFunctional::zeros(s);
    for (std::size_t cidx = 0; cidx < cells; ++cidx) {
        const double v = sol.z[col_u + cidx] - sol.z[col_w + cidx];
        f.coefficient(cidx / s.n_joint_outputs(), cidx % s.n_joint_outputs()) = v;
    }
    return f;
}

} // namespace detail

/// Local-polytope membership with certificates. Either returns an explicit
/// mixture of deterministic strategies reproducing the behavior within tol
/// (verified by a behavior_of round trip), or a separating Bell functional
/// the behavior violates. Solver trouble raises NumericError; it is never
/// reported as "nonlocal".
inline MembershipResult is_local(const Behavior& b, double tol = 1e-9,
                                 std::uint64_t cap = kDefaultEnumerationCap) {
    require_valid(b, 1e-9);
    const Scenario& s = b.scenario();
    const auto vertices = enumerate_deterministic(s, cap);

    // Feasibility: weights q >= 0 with  V q = b  and  sum q = 1.
    const std::size_t cells = s.n_cells();
    std::vector<std::vector<double>> a(cells + 1, std::vector<double>(vertices.size(), 0.0));
    std::vector<double> rhs(cells + 1, 0.0);
    for (std::size_t j = 0; j < vertices.size(); ++j) {
        const Behavior vb = vertices[j].to_behavior();
        for (std::size_t cidx = 0; cidx < cells; ++cidx) a[cidx][j] = vb.table()[cidx];
        a[cells][j] = 1.0;
    }
    for (std::size_t cidx = 0; cidx < cells; ++cidx) rhs[cidx] = b.table()[cidx];
    rhs[cells] = 1.0;

    const double feas_eps = std::min(tol, 1e-10);
    SimplexSolver feas(std::move(a), std::move(rhs), std::vector<double>(vertices.size(), 0.0), feas_eps);
    const auto sol = feas.solve();
    if (sol.status == SimplexSolver::Status::iteration_limit)
        throw NumericError("membership: feasibility LP did not converge");

    if (sol.status == SimplexSolver::Status::optimal) {
        LocalModel model;
        double wsum = 0.0;
        for (std::size_t j = 0; j < vertices.size(); ++j) {
            const double w = std::max(0.0, sol.z[j]);
            if (w > 0.0) {
                model.strategies.push_back(vertices[j]);
                model.weights.push_back(w);
                wsum += w;
            }
        }
        if (wsum <= 0.0) throw NumericError("membership: feasible but empty mixture");
        for (double& w : model.weights) w /= wsum;

        const Behavior round_trip = behavior_of(model);
        double residual = 0.0;
        for (std::size_t cidx = 0; cidx < cells; ++cidx)
            residual = std::max(residual, std::abs(round_trip.table()[cidx] - b.table()[cidx]));
        if (residual > tol)
            throw NumericError("membership: feasible mixture fails the round trip at " +
                               std::to_string(residual));
        return {true, std::move(model), residual, std::nullopt};
    }

    // Infeasible: produce the dual certificate.
    auto raw = detail::separating_functional(b, vertices, tol);
    if (!raw)
        throw NumericError("membership: feasibility LP infeasible but no separating functional found");

    BellFunctional canon = detail::canonicalize_certificate(std::move(*raw));
    NonlocalityCertificate cert{std::move(canon), 0.0, 0.0};
    cert.witnessed_value = bell_value(b, cert.functional);
    cert.local_bound = local_max(cert.functional, cap).max_value;
    if (cert.witnessed_value <= cert.local_bound + tol)
        throw NumericError("membership: certificate lost its gap after canonicalization");
    return {false, std::nullopt, 0.0, std::move(cert)};
}

} // namespace bell
