#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bell_lab/errors.hpp"
#include "bell_lab/scenario.hpp"

namespace bell {

/// A joint distribution over a finite alphabet pair (U, V), row-major in u.
struct JointDistribution {
    int n_u = 0;
    int n_v = 0;
    std::vector<double> p;  // n_u * n_v

    JointDistribution(int nu, int nv, std::vector<double> probs)
        : n_u(nu), n_v(nv), p(std::move(probs)) {
        if (nu < 1 || nv < 1 || p.size() != static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv))
            throw ValidationError("joint distribution: dimension mismatch");
        double sum = 0.0;
        for (double v : p) {
            if (v < 0.0) throw ValidationError("joint distribution: negative probability");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw ValidationError("joint distribution: sums to " + std::to_string(sum));
    }

    double at(int u, int v) const { return p[static_cast<std::size_t>(u) * n_v + v]; }

    std::vector<double> marginal_u() const {
        std::vector<double> m(n_u, 0.0);
        for (int u = 0; u < n_u; ++u)
            for (int v = 0; v < n_v; ++v) m[u] += at(u, v);
        return m;
    }

    std::vector<double> marginal_v() const {
        std::vector<double> m(n_v, 0.0);
        for (int u = 0; u < n_u; ++u)
            for (int v = 0; v < n_v; ++v) m[v] += at(u, v);
        return m;
    }

    static JointDistribution product(const std::vector<double>& pu, const std::vector<double>& pv) {
        std::vector<double> cells;
        cells.reserve(pu.size() * pv.size());
        for (double a : pu)
            for (double b : pv) cells.push_back(a * b);
        return JointDistribution(static_cast<int>(pu.size()), static_cast<int>(pv.size()), std::move(cells));
    }
};

/// Shannon mutual information I(U:V) in bits, with 0 log 0 = 0. Nonnegative,
/// and zero exactly when the joint is the product of its marginals.
inline double mutual_information(const JointDistribution& j) {
    const auto pu = j.marginal_u();
    const auto pv = j.marginal_v();
    double info = 0.0;
    for (int u = 0; u < j.n_u; ++u) {
        for (int v = 0; v < j.n_v; ++v) {
            const double puv = j.at(u, v);
            if (puv <= 0.0) continue;
            info += puv * std::log2(puv / (pu[u] * pv[v]));
        }
    }
    // tiny negative values are float residue of an exact product
    return info < 0.0 && info > -1e-15 ? 0.0 : info;
}

/// Binary entropy in bits.
inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

} // namespace bell
