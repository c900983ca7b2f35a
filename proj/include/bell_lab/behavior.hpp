#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "bell_lab/errors.hpp"
#include "bell_lab/rng.hpp"
#include "bell_lab/scenario.hpp"

namespace bell {

/// A behavior: one conditional probability table p(outcomes | inputs) over a
/// scenario. Cells are stored flat, joint-input-major (see Scenario for the
/// index convention). Construction checks structure only; numeric soundness
/// (nonnegativity, normalization) is the job of validate_behavior.
class Behavior {
public:
    Behavior(Scenario scenario, std::vector<double> table)
        : scenario_(std::move(scenario)), table_(std::move(table)) {
        if (table_.size() != scenario_.n_cells())
            throw ValidationError("behavior: table has " + std::to_string(table_.size()) +
                                  " cells, scenario needs " + std::to_string(scenario_.n_cells()));
    }

    static Behavior zeros(const Scenario& s) { return Behavior(s, std::vector<double>(s.n_cells(), 0.0)); }

    static Behavior uniform(const Scenario& s) {
        const double cell = 1.0 / static_cast<double>(s.n_joint_outputs());
        return Behavior(s, std::vector<double>(s.n_cells(), cell));
    }

    const Scenario& scenario() const { return scenario_; }
    const std::vector<double>& table() const { return table_; }

    double p(Index joint_input, Index joint_output) const {
        return table_[scenario_.cell_index(joint_input, joint_output)];
    }
    double& p(Index joint_input, Index joint_output) {
        return table_[scenario_.cell_index(joint_input, joint_output)];
    }

    double at(const std::vector<int>& x, const std::vector<int>& a) const {
        return p(scenario_.joint_input_index(x), scenario_.joint_output_index(a));
    }

private:
    Scenario scenario_;
    std::vector<double> table_;
};

struct Violation {
    enum class Kind { negative_cell, row_not_normalized };
    Kind kind;
    Index joint_input;
    Index joint_output;  // meaningful for negative_cell only
    double value;        // offending cell value, or the row sum

    std::string describe() const {
        std::ostringstream os;
        if (kind == Kind::negative_cell)
            os << "cell (input " << joint_input << ", outcome " << joint_output << ") is negative: " << value;
        else
            os << "input " << joint_input << " row sums to " << value;
        return os.str();
    }
};

/// Empty report iff every cell is >= 0 and every per-input row sums to 1
/// within tol. Structural problems (wrong table size) throw at construction
/// instead of appearing here.
inline std::vector<Violation> validate_behavior(const Behavior& b, double tol = 1e-12) {
    std::vector<Violation> report;
    const Scenario& s = b.scenario();
    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
        double row_sum = 0.0;
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) {
            const double v = b.p(ji, jo);
            if (v < 0.0) report.push_back({Violation::Kind::negative_cell, ji, jo, v});
            row_sum += v;
        }
        if (std::abs(row_sum - 1.0) > tol)
            report.push_back({Violation::Kind::row_not_normalized, ji, 0, row_sum});
    }
    return report;
}

inline void require_valid(const Behavior& b, double tol = 1e-12) {
    const auto report = validate_behavior(b, tol);
    if (!report.empty()) throw ValidationError("behavior invalid: " + report.front().describe());
}

/// Marginal of the party subset given by `mask` (bit p set = party p kept):
/// p(kept outcomes | kept inputs, dropped inputs), as a table indexed
/// [joint input of all parties][joint outcome of kept parties].
inline std::vector<std::vector<double>> subset_marginal(const Behavior& b, std::uint32_t mask) {
    const Scenario& s = b.scenario();
    std::vector<int> kept;
    for (int p = 0; p < s.n_parties; ++p)
        if (mask & (1u << p)) kept.push_back(p);
    Index n_kept_out = 1;
    for (int p : kept) n_kept_out *= static_cast<Index>(s.outputs[p]);

    std::vector<std::vector<double>> marg(s.n_joint_inputs(), std::vector<double>(n_kept_out, 0.0));
    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) {
            const auto a = s.decode_output(jo);
            Index sub = 0;
            for (int p : kept) sub = sub * static_cast<Index>(s.outputs[p]) + static_cast<Index>(a[p]);
            marg[ji][sub] += b.p(ji, jo);
        }
    }
    return marg;
}

/// No-signaling audit. For every proper nonempty party subset G, the marginal
/// of G's outcomes given G's inputs must not depend on the other parties'
/// inputs; the entry records the worst L-infinity deviation found.
struct NoSignalingReport {
    struct Entry {
        std::uint32_t party_mask;
        double max_deviation;
    };
    std::vector<Entry> entries;
    double max_deviation = 0.0;
    double tolerance = 0.0;

    bool passes() const { return max_deviation <= tolerance; }
};

inline NoSignalingReport no_signaling_check(const Behavior& b, double tol) {
    require_valid(b, 1e-9);  // reject garbage, but allow float-pipeline behaviors
    const Scenario& s = b.scenario();
    NoSignalingReport report;
    report.tolerance = tol;

    const std::uint32_t full = (1u << s.n_parties) - 1u;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        const auto marg = subset_marginal(b, mask);
        // Group joint inputs by the restriction to the subset's parties; the
        // marginal rows within one group must agree.
        double worst = 0.0;
        std::vector<std::vector<Index>> groups;
        {
            Index n_sub_inputs = 1;
            for (int p = 0; p < s.n_parties; ++p)
                if (mask & (1u << p)) n_sub_inputs *= static_cast<Index>(s.inputs[p]);
            groups.assign(n_sub_inputs, {});
            for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
                const auto x = s.decode_input(ji);
                Index sub = 0;
                for (int p = 0; p < s.n_parties; ++p)
                    if (mask & (1u << p)) sub = sub * static_cast<Index>(s.inputs[p]) + static_cast<Index>(x[p]);
                groups[sub].push_back(ji);
            }
        }
        for (const auto& group : groups) {
            for (std::size_t i = 0; i + 1 < group.size(); ++i) {
                for (std::size_t j = i + 1; j < group.size(); ++j) {
                    const auto& mi = marg[group[i]];
                    const auto& mj = marg[group[j]];
                    for (std::size_t k = 0; k < mi.size(); ++k)
                        worst = std::max(worst, std::abs(mi[k] - mj[k]));
                }
            }
        }
        report.entries.push_back({mask, worst});
        report.max_deviation = std::max(report.max_deviation, worst);
    }
    return report;
}

/// A simultaneous relabeling: per party a permutation of inputs, and per
/// (party, original input) a permutation of outcomes.
struct Relabeling {
    std::vector<std::vector<int>> input_perm;                 // [party][input] -> new input
    std::vector<std::vector<std::vector<int>>> outcome_perm;  // [party][input][outcome] -> new outcome

    static Relabeling identity(const Scenario& s) {
        Relabeling r;
        r.input_perm.resize(s.n_parties);
        r.outcome_perm.resize(s.n_parties);
        for (int p = 0; p < s.n_parties; ++p) {
            r.input_perm[p].resize(s.inputs[p]);
            for (int x = 0; x < s.inputs[p]; ++x) r.input_perm[p][x] = x;
            r.outcome_perm[p].assign(s.inputs[p], std::vector<int>(s.outputs[p]));
            for (int x = 0; x < s.inputs[p]; ++x)
                for (int a = 0; a < s.outputs[p]; ++a) r.outcome_perm[p][x][a] = a;
        }
        return r;
    }

    static Relabeling random(const Scenario& s, RoundRng& rng, bool permute_inputs = true) {
        Relabeling r = identity(s);
        auto shuffle = [&rng](std::vector<int>& v) {
            for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.next_below(static_cast<int>(i))]);
        };
        for (int p = 0; p < s.n_parties; ++p) {
            if (permute_inputs) shuffle(r.input_perm[p]);
            for (int x = 0; x < s.inputs[p]; ++x) shuffle(r.outcome_perm[p][x]);
        }
        return r;
    }
};

/// p'(a'|x') = p(a|x) with x'_p = input_perm[p](x_p) and
/// a'_p = outcome_perm[p][x_p](a_p).
inline Behavior relabel(const Behavior& b, const Relabeling& r) {
    const Scenario& s = b.scenario();
    Behavior out = Behavior::zeros(s);
    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
        const auto x = s.decode_input(ji);
        std::vector<int> x2(x.size());
        for (int p = 0; p < s.n_parties; ++p) x2[p] = r.input_perm[p][x[p]];
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) {
            const auto a = s.decode_output(jo);
            std::vector<int> a2(a.size());
            for (int p = 0; p < s.n_parties; ++p) a2[p] = r.outcome_perm[p][x[p]][a[p]];
            out.p(s.joint_input_index(x2), s.joint_output_index(a2)) = b.p(ji, jo);
        }
    }
    return out;
}

/// Condition a behavior on every party producing a real outcome (drop the
/// no-outcome slot and renormalize per input). The discarded mass per joint
/// input is reported; an input whose rows are entirely no-outcome cannot be
/// post-selected and raises a ValidationError.
struct PostSelection {
    Behavior behavior;
    std::vector<double> discarded_per_input;
    double discarded_overall;  // averaged over joint inputs
};

inline PostSelection post_select_detected(const Behavior& b) {
    const Scenario& s = b.scenario();
    bool any_bottom = false;
    for (int p = 0; p < s.n_parties; ++p) any_bottom = any_bottom || s.bottom[p];
    if (!any_bottom) throw ValidationError("post-selection: scenario has no no-outcome symbol to drop");

    std::vector<int> new_outputs = s.outputs;
    for (int p = 0; p < s.n_parties; ++p)
        if (s.bottom[p]) {
            new_outputs[p] -= 1;
            if (new_outputs[p] < 1)
                throw ValidationError("post-selection: party " + std::to_string(p) + " has only the no-outcome value");
        }
    Scenario post(s.n_parties, s.inputs, new_outputs);

    PostSelection result{Behavior::zeros(post), std::vector<double>(s.n_joint_inputs(), 0.0), 0.0};
    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
        double kept = 0.0;
        for (Index jo = 0; jo < post.n_joint_outputs(); ++jo) {
            // outcome tuples without the bottom value embed unchanged
            const double v = b.p(ji, s.joint_output_index(post.decode_output(jo)));
            kept += v;
        }
        if (kept <= 0.0)
            throw ValidationError("post-selection: joint input " + std::to_string(ji) +
                                  " has no detected mass");
        for (Index jo = 0; jo < post.n_joint_outputs(); ++jo)
            result.behavior.p(ji, jo) = b.p(ji, s.joint_output_index(post.decode_output(jo))) / kept;
        result.discarded_per_input[ji] = 1.0 - kept;
        result.discarded_overall += (1.0 - kept) / static_cast<double>(s.n_joint_inputs());
    }
    return result;
}

} // namespace bell
