#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bell_lab/behavior.hpp"
#include "bell_lab/errors.hpp"
#include "bell_lab/scenario.hpp"

namespace bell {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// One deterministic local strategy: per party, a total map input -> output.
/// These are the vertices of the local polytope.
struct DeterministicStrategy {
    Scenario scenario;
    std::vector<std::vector<int>> output_for;  // [party][input] -> output

    int output(int party, int input) const { return output_for[party][input]; }

    /// Joint outcome index this strategy produces at a joint input.
    Index joint_output_at(Index joint_input) const {
        const auto x = scenario.decode_input(joint_input);
        std::vector<int> a(x.size());
        for (int p = 0; p < scenario.n_parties; ++p) a[p] = output_for[p][x[p]];
        return scenario.joint_output_index(a);
    }

    /// The strategy as a behavior: an indicator table.
    Behavior to_behavior() const {
        Behavior b = Behavior::zeros(scenario);
        for (Index ji = 0; ji < scenario.n_joint_inputs(); ++ji) b.p(ji, joint_output_at(ji)) = 1.0;
        return b;
    }
};

/// Number of deterministic strategies: product over parties of
/// outputs^inputs. Throws DeskScaleError beyond the cap.
inline std::uint64_t count_deterministic(const Scenario& s, std::uint64_t cap = kDefaultEnumerationCap) {
    long double total = 1.0L;
    for (int p = 0; p < s.n_parties; ++p)
        for (int x = 0; x < s.inputs[p]; ++x) total *= static_cast<long double>(s.outputs[p]);
    if (total > static_cast<long double>(cap))
        throw DeskScaleError("desk-scale exceeded: " + std::to_string(static_cast<double>(total)) +
                             " deterministic strategies, cap " + std::to_string(cap));
    return static_cast<std::uint64_t>(total);
}

/// Exhaustive, duplicate-free, canonically ordered enumeration of the
/// deterministic strategies. Canonical order: strategy k has, for party p, the
/// local map encoded as a base-outputs[p] number over inputs (input 0 least
/// significant), with party 0 the most significant block. Strategy 0 is
/// therefore "output 0 whatever the input" for every party.
inline std::vector<DeterministicStrategy> enumerate_deterministic(
    const Scenario& s, std::uint64_t cap = kDefaultEnumerationCap) {
    const std::uint64_t n = count_deterministic(s, cap);

    std::vector<std::uint64_t> local_counts(s.n_parties, 1);
    for (int p = 0; p < s.n_parties; ++p)
        for (int x = 0; x < s.inputs[p]; ++x)
            local_counts[p] *= static_cast<std::uint64_t>(s.outputs[p]);

    std::vector<DeterministicStrategy> out;
    out.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        DeterministicStrategy strat{s, {}};
        strat.output_for.resize(s.n_parties);
        std::uint64_t rest = k;
        for (int p = s.n_parties - 1; p >= 0; --p) {
            std::uint64_t local = rest % local_counts[p];
            rest /= local_counts[p];
            strat.output_for[p].resize(s.inputs[p]);
            for (int x = 0; x < s.inputs[p]; ++x) {
                strat.output_for[p][x] = static_cast<int>(local % static_cast<std::uint64_t>(s.outputs[p]));
                local /= static_cast<std::uint64_t>(s.outputs[p]);
            }
        }
        out.push_back(std::move(strat));
    }
    return out;
}

/// A mixture of deterministic strategies with probability weights: the
/// explicit common-cause explanation a behavior may or may not admit.
struct LocalModel {
    std::vector<DeterministicStrategy> strategies;
    std::vector<double> weights;

    void validate(double tol = 1e-12) const {
        if (strategies.empty() || strategies.size() != weights.size())
            throw ValidationError("local model: strategies/weights size mismatch");
        double sum = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw ValidationError("local model: negative weight");
            sum += w;
        }
        if (std::abs(sum - 1.0) > tol)
            throw ValidationError("local model: weights sum to " + std::to_string(sum));
        for (const auto& st : strategies)
            if (!(st.scenario == strategies.front().scenario))
                throw ValidationError("local model: strategies disagree on the scenario");
    }
};

/// The behavior of a mixture: cell = sum of weights of strategies that produce
/// that joint outcome at that joint input.
inline Behavior behavior_of(const LocalModel& m) {
    m.validate();
    const Scenario& s = m.strategies.front().scenario;
    Behavior b = Behavior::zeros(s);
    for (std::size_t k = 0; k < m.strategies.size(); ++k) {
        if (m.weights[k] == 0.0) continue;
        for (Index ji = 0; ji < s.n_joint_inputs(); ++ji)
            b.p(ji, m.strategies[k].joint_output_at(ji)) += m.weights[k];
    }
    return b;
}

/// A linear functional on behaviors: one coefficient per cell. The local bound
/// (max over deterministic strategies) is computed on demand and cached.
class BellFunctional {
public:
    BellFunctional(Scenario scenario, std::vector<double> coefficients)
        : scenario_(std::move(scenario)), coeff_(std::move(coefficients)) {
        if (coeff_.size() != scenario_.n_cells())
            throw ValidationError("bell functional: coefficient table has wrong size");
    }

    static BellFunctional zeros(const Scenario& s) {
        return BellFunctional(s, std::vector<double>(s.n_cells(), 0.0));
    }

    /// The CHSH-type figure of merit on the (2,2,2) scenario:
    ///   S = p(a=b|0,0) + p(a=b|0,1) + p(a=b|1,0) + p(a!=b|1,1),
    /// with local bound 3 and no-signaling maximum 4.
    static BellFunctional chsh_s() {
        Scenario s = Scenario::chsh();
        BellFunctional f = zeros(s);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) {
                        const bool want_equal = (x * y == 0);
                        if ((a == b) == want_equal) f.coefficient({x, y}, {a, b}) = 1.0;
                    }
        return f;
    }

    /// chsh_s with zero coefficients on a third "no outcome" value per party;
    /// the standard extension used when auditing detection-style scenarios.
    static BellFunctional chsh_s_with_bottom() {
        Scenario s(2, {2, 2}, {3, 3}, {true, true});
        BellFunctional f = zeros(s);
        const BellFunctional base = chsh_s();
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        f.coefficient({x, y}, {a, b}) = base.coefficient({x, y}, {a, b});
        return f;
    }

    const Scenario& scenario() const { return scenario_; }
    const std::vector<double>& coefficients() const { return coeff_; }

    double coefficient(Index ji, Index jo) const { return coeff_[scenario_.cell_index(ji, jo)]; }
    double& coefficient(Index ji, Index jo) {
        local_bound_.reset();
        return coeff_[scenario_.cell_index(ji, jo)];
    }
    double coefficient(const std::vector<int>& x, const std::vector<int>& a) const {
        return coefficient(scenario_.joint_input_index(x), scenario_.joint_output_index(a));
    }
    double& coefficient(const std::vector<int>& x, const std::vector<int>& a) {
        local_bound_.reset();
        return coeff_[scenario_.cell_index(scenario_.joint_input_index(x), scenario_.joint_output_index(a))];
    }

    double local_bound(std::uint64_t cap = kDefaultEnumerationCap) const;

private:
    Scenario scenario_;
    std::vector<double> coeff_;
    mutable std::optional<double> local_bound_;
};

inline double bell_value(const Behavior& b, const BellFunctional& f) {
    if (!(b.scenario() == f.scenario())) throw ValidationError("bell value: scenario mismatch");
    double s = 0.0;
    const auto& table = b.table();
    const auto& coeff = f.coefficients();
    for (Index i = 0; i < table.size(); ++i) s += coeff[i] * table[i];
    return s;
}

/// Value of a functional on a single deterministic strategy, without building
/// the indicator table.
inline double bell_value(const DeterministicStrategy& strat, const BellFunctional& f) {
    if (!(strat.scenario == f.scenario())) throw ValidationError("bell value: scenario mismatch");
    double s = 0.0;
    for (Index ji = 0; ji < strat.scenario.n_joint_inputs(); ++ji)
        s += f.coefficient(ji, strat.joint_output_at(ji));
    return s;
}

/// The usual correlator E(x,y) = p(a=b|x,y) - p(a!=b|x,y) for two-party
/// binary-outcome behaviors.
inline double correlator(const Behavior& b, int x, int y) {
    const Scenario& s = b.scenario();
    if (s.n_parties != 2 || s.outputs[0] != 2 || s.outputs[1] != 2)
        throw ValidationError("correlator: needs a two-party binary-outcome scenario");
    double e = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int bb = 0; bb < 2; ++bb) e += (a == bb ? 1.0 : -1.0) * b.at({x, y}, {a, bb});
    return e;
}

struct LocalMaxResult {
    double max_value;
    DeterministicStrategy argmax;   // first optimum in canonical order
    std::uint64_t argmax_index;
    std::uint64_t n_optimal;        // strategies within 1e-12 of the maximum
};

/// Exact maximum of the functional over all deterministic strategies.
inline LocalMaxResult local_max(const BellFunctional& f, std::uint64_t cap = kDefaultEnumerationCap) {
    const auto strategies = enumerate_deterministic(f.scenario(), cap);
    LocalMaxResult result{-std::numeric_limits<double>::infinity(), {}, 0, 0};
    for (std::uint64_t k = 0; k < strategies.size(); ++k) {
        const double v = bell_value(strategies[k], f);
        if (v > result.max_value + 1e-12) {
            result.max_value = v;
            result.argmax = strategies[k];
            result.argmax_index = k;
            result.n_optimal = 1;
        } else if (v > result.max_value - 1e-12) {
            result.n_optimal += 1;
        }
    }
    return result;
}

inline double BellFunctional::local_bound(std::uint64_t cap) const {
    if (!local_bound_) local_bound_ = local_max(*this, cap).max_value;
    return *local_bound_;
}

/// Apply a relabeling to the functional: c'(a'|x') = c(a|x). Applying the same
/// relabeling to a behavior and its functional leaves bell_value unchanged.
inline BellFunctional relabel(const BellFunctional& f, const Relabeling& r) {
    const Scenario& s = f.scenario();
    BellFunctional out = BellFunctional::zeros(s);
    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
        const auto x = s.decode_input(ji);
        std::vector<int> x2(x.size());
        for (int p = 0; p < s.n_parties; ++p) x2[p] = r.input_perm[p][x[p]];
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) {
            const auto a = s.decode_output(jo);
            std::vector<int> a2(a.size());
            for (int p = 0; p < s.n_parties; ++p) a2[p] = r.outcome_perm[p][x[p]][a[p]];
            out.coefficient(s.joint_input_index(x2), s.joint_output_index(a2)) = f.coefficient(ji, jo);
        }
    }
    return out;
}

} // namespace bell
