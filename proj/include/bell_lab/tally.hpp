#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bell_lab/behavior.hpp"
#include "bell_lab/errors.hpp"
#include "bell_lab/scenario.hpp"

namespace bell {

/// Raw experiment counts, one per (joint input, joint outcome) cell, plus the
/// seed that produced them. Counts are what happened; estimation never invents
/// data for inputs that were not used.
struct TallyTable {
    Scenario scenario;
    std::vector<std::uint64_t> counts;
    std::uint64_t rng_seed = 0;

    explicit TallyTable(Scenario s, std::uint64_t seed = 0)
        : scenario(std::move(s)), counts(scenario.n_cells(), 0), rng_seed(seed) {}

    void add(Index joint_input, Index joint_output, std::uint64_t n = 1) {
        counts[scenario.cell_index(joint_input, joint_output)] += n;
    }

    std::uint64_t count(Index joint_input, Index joint_output) const {
        return counts[scenario.cell_index(joint_input, joint_output)];
    }

    std::uint64_t input_total(Index joint_input) const {
        std::uint64_t n = 0;
        for (Index jo = 0; jo < scenario.n_joint_outputs(); ++jo) n += count(joint_input, jo);
        return n;
    }

    std::uint64_t total() const {
        std::uint64_t n = 0;
        for (auto c : counts) n += c;
        return n;
    }
};

/// Merge tallies from independent (sub)runs. Associative and commutative, so
/// fan-out/fan-in cannot change the result.
inline TallyTable merge(const TallyTable& a, const TallyTable& b) {
    if (!(a.scenario == b.scenario)) throw ValidationError("tally merge: scenario mismatch");
    TallyTable out = a;
    for (Index i = 0; i < out.counts.size(); ++i) out.counts[i] += b.counts[i];
    return out;
}

/// Frequency estimate of a behavior from a tally. Inputs with zero rounds are
/// flagged unknown rather than filled in; inputs with a single round carry a
/// degenerate (zero) standard error and are flagged as such.
struct BehaviorEstimate {
    Scenario scenario;
    std::vector<double> p_hat;                // cell estimates; 0 where the input is unknown
    std::vector<double> std_error;            // sqrt(p(1-p)/N_input) per cell
    std::vector<std::uint64_t> input_totals;  // per joint input
    std::vector<bool> input_known;            // total >= 1
    std::vector<bool> input_degenerate;       // total == 1

    bool all_known() const {
        for (bool k : input_known)
            if (!k) return false;
        return true;
    }

    double p(Index ji, Index jo) const { return p_hat[scenario.cell_index(ji, jo)]; }
    double stderr_of(Index ji, Index jo) const { return std_error[scenario.cell_index(ji, jo)]; }

    /// The estimate as a Behavior; requires every joint input to have data.
    Behavior to_behavior() const {
        if (!all_known())
            throw ValidationError("estimate: some joint inputs have no rounds; refusing to invent cells");
        return Behavior(scenario, p_hat);
    }
};

inline BehaviorEstimate estimate_behavior(const TallyTable& t) {
    const Scenario& s = t.scenario;
    if (t.total() == 0) throw ValidationError("estimate: tally is empty");

    BehaviorEstimate e{s,
                       std::vector<double>(s.n_cells(), 0.0),
                       std::vector<double>(s.n_cells(), 0.0),
                       std::vector<std::uint64_t>(s.n_joint_inputs(), 0),
                       std::vector<bool>(s.n_joint_inputs(), false),
                       std::vector<bool>(s.n_joint_inputs(), false)};

    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
        const std::uint64_t n = t.input_total(ji);
        e.input_totals[ji] = n;
        if (n == 0) continue;
        e.input_known[ji] = true;
        e.input_degenerate[ji] = (n == 1);
        const double dn = static_cast<double>(n);
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) {
            const double p = static_cast<double>(t.count(ji, jo)) / dn;
            e.p_hat[s.cell_index(ji, jo)] = p;
            e.std_error[s.cell_index(ji, jo)] = std::sqrt(p * (1.0 - p) / dn);
        }
    }
    return e;
}

/// Keep only rounds where every party produced a real outcome. Returns the
/// post-selected tally over the stripped scenario plus the kept fraction.
struct TallyPostSelection {
    TallyTable tally;
    std::uint64_t kept_rounds;
    std::uint64_t total_rounds;

    double coincidence_rate() const {
        return total_rounds == 0 ? 0.0 : static_cast<double>(kept_rounds) / static_cast<double>(total_rounds);
    }
};

inline TallyPostSelection post_select_detected(const TallyTable& t) {
    const Scenario& s = t.scenario;
    bool any_bottom = false;
    for (int p = 0; p < s.n_parties; ++p) any_bottom = any_bottom || s.bottom[p];
    if (!any_bottom) throw ValidationError("post-selection: scenario has no no-outcome symbol to drop");

    std::vector<int> new_outputs = s.outputs;
    for (int p = 0; p < s.n_parties; ++p)
        if (s.bottom[p]) new_outputs[p] -= 1;
    Scenario post(s.n_parties, s.inputs, new_outputs);

    TallyPostSelection result{TallyTable(post, t.rng_seed), 0, t.total()};
    for (Index ji = 0; ji < post.n_joint_inputs(); ++ji) {
        for (Index jo = 0; jo < post.n_joint_outputs(); ++jo) {
            const std::uint64_t c = t.count(ji, s.joint_output_index(post.decode_output(jo)));
            result.tally.add(ji, jo, c);
            result.kept_rounds += c;
        }
    }
    return result;
}

} // namespace bell
