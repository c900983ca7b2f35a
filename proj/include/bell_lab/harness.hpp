#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bell_lab/behavior.hpp"
#include "bell_lab/errors.hpp"
#include "bell_lab/info.hpp"
#include "bell_lab/lhv.hpp"
#include "bell_lab/nonlocal_box.hpp"
#include "bell_lab/quantum.hpp"
#include "bell_lab/relativity.hpp"
#include "bell_lab/rng.hpp"
#include "bell_lab/tally.hpp"

namespace bell {

struct PartyGeometry {
    SpacetimeEvent input;
    SpacetimeEvent outcome;
};

struct ExperimentGeometry {
    std::vector<PartyGeometry> parties;
    Units units = Units::si();
};

/// Loophole audit of a run. The locality loophole is open as soon as any
/// party's input event fails to be spacelike separated from another party's
/// outcome event; the detection loophole is open whenever no-outcome rounds
/// exist and are discarded without a fair-sampling assumption being declared.
struct LoopholeReport {
    bool locality_open;
    bool detection_open;
};

inline LoopholeReport loophole_audit(const ExperimentGeometry& g, bool bottom_present,
                                     bool fair_sampling_assumed) {
    if (g.parties.size() < 2) throw ValidationError("loophole audit: need geometry for at least two parties");
    bool locality_open = false;
    for (std::size_t p = 0; p < g.parties.size(); ++p)
        for (std::size_t q = 0; q < g.parties.size(); ++q) {
            if (p == q) continue;
            if (interval(g.parties[p].input, g.parties[q].outcome, g.units).kind != IntervalKind::spacelike)
                locality_open = true;
        }
    return {locality_open, bottom_present && !fair_sampling_assumed};
}

/// One repeated-trials experiment: a correlation source, a number of rounds,
/// per-party input distributions (uniform unless stated) and a master seed.
/// Round i draws only from the (seed, i) stream, so runs replay bit-identically
/// regardless of scheduling.
struct ExperimentConfig {
    enum class Source { behavior, quantum, pr_box };

    Source source = Source::behavior;
    std::optional<Behavior> behavior;   // Source::behavior
    std::optional<QuantumSetup> setup;  // Source::quantum
    std::string source_label = "behavior";

    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> input_probs;  // empty = uniform per party
    std::optional<ExperimentGeometry> geometry;
    bool fair_sampling_assumed = false;

    Scenario scenario() const {
        switch (source) {
            case Source::behavior: return behavior->scenario();
            case Source::quantum: return setup->scenario();
            case Source::pr_box: return Scenario::chsh();
        }
        throw ValidationError("experiment: unknown source");
    }

    void validate() const {
        if (rounds < 1) throw ValidationError("experiment: need at least one round");
        if (source == Source::behavior) {
            if (!behavior) throw ValidationError("experiment: behavior source without a behavior");
            require_valid(*behavior, 1e-9);
        }
        if (source == Source::quantum && !setup)
            throw ValidationError("experiment: quantum source without a setup");
        if (!input_probs.empty()) {
            const Scenario s = scenario();
            if (input_probs.size() != static_cast<std::size_t>(s.n_parties))
                throw ValidationError("experiment: input distribution arity mismatch");
            for (int p = 0; p < s.n_parties; ++p) {
                if (input_probs[p].size() != static_cast<std::size_t>(s.inputs[p]))
                    throw ValidationError("experiment: input distribution cardinality mismatch");
                double sum = 0.0;
                for (double v : input_probs[p]) {
                    if (v < 0.0) throw ValidationError("experiment: negative input probability");
                    sum += v;
                }
                if (std::abs(sum - 1.0) > 1e-12)
                    throw ValidationError("experiment: input distribution not normalized");
            }
        }
    }
};

/// Functional estimate from a tally: S_hat, its standard error (multinomial
/// delta method per joint input) and a 95% interval.
struct FunctionalEstimate {
    double value;
    double std_error;
    std::pair<double, double> ci95;
};

inline FunctionalEstimate estimate_functional(const TallyTable& t, const BellFunctional& f) {
    if (!(t.scenario == f.scenario())) throw ValidationError("estimate: functional scenario mismatch");
    const Scenario& s = t.scenario;
    double value = 0.0, variance = 0.0;
    for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
        bool touched = false;
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) touched = touched || f.coefficient(ji, jo) != 0.0;
        if (!touched) continue;
        const std::uint64_t n = t.input_total(ji);
        if (n == 0)
            throw ValidationError("estimate: joint input " + std::to_string(ji) +
                                  " has no rounds but the functional needs it");
        const double dn = static_cast<double>(n);
        double term = 0.0, second = 0.0;
        for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) {
            const double p = static_cast<double>(t.count(ji, jo)) / dn;
            const double c = f.coefficient(ji, jo);
            term += c * p;
            second += c * c * p;
        }
        value += term;
        variance += (second - term * term) / dn;
    }
    const double se = std::sqrt(std::max(0.0, variance));
    return {value, se, {value - 1.96 * se, value + 1.96 * se}};
}

struct RunReport {
    TallyTable tally;
    BehaviorEstimate estimate;
    FunctionalEstimate s;
    std::optional<double> no_signaling_max_dev;  // of the estimated behavior, when complete
    std::optional<LoopholeReport> loopholes;
    std::string source_label;
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
};

/// Run the Fig.-1-style protocol: N rounds of independently chosen inputs fed
/// to the source, tallied, then estimated. The default figure of merit is the
/// CHSH-type S.
inline RunReport run(const ExperimentConfig& cfg, const BellFunctional& f = BellFunctional::chsh_s()) {
    cfg.validate();
    const Scenario s = cfg.scenario();
    if (!(s == f.scenario())) throw ValidationError("experiment: functional does not match the source scenario");

    // per-party input CDFs
    std::vector<std::vector<double>> input_cdf(s.n_parties);
    for (int p = 0; p < s.n_parties; ++p) {
        std::vector<double> probs = cfg.input_probs.empty()
                                        ? std::vector<double>(s.inputs[p], 1.0 / s.inputs[p])
                                        : cfg.input_probs[p];
        input_cdf[p] = cumulative_of(probs);
    }

    // per-joint-input outcome CDFs for table-driven sources
    std::vector<std::vector<double>> outcome_cdf;
    if (cfg.source != ExperimentConfig::Source::pr_box) {
        const Behavior table = cfg.source == ExperimentConfig::Source::behavior
                                   ? *cfg.behavior
                                   : born_behavior(*cfg.setup);
        outcome_cdf.resize(s.n_joint_inputs());
        for (Index ji = 0; ji < s.n_joint_inputs(); ++ji) {
            std::vector<double> row(s.n_joint_outputs());
            for (Index jo = 0; jo < s.n_joint_outputs(); ++jo) row[jo] = table.p(ji, jo);
            outcome_cdf[ji] = cumulative_of(row);
        }
    }

    PrBox box(subseed(cfg.seed, 0x70726278 /* "prbx" */));
    TallyTable tally(s, cfg.seed);
    std::vector<int> x(s.n_parties);
    for (std::uint64_t i = 0; i < cfg.rounds; ++i) {
        RoundRng rng(cfg.seed, i);
        for (int p = 0; p < s.n_parties; ++p) x[p] = static_cast<int>(rng.sample_cdf(input_cdf[p]));
        const Index ji = s.joint_input_index(x);
        Index jo;
        if (cfg.source == ExperimentConfig::Source::pr_box) {
            const auto [a, b] = box.sample(x[0], x[1]);
            jo = s.joint_output_index({a, b});
        } else {
            jo = rng.sample_cdf(outcome_cdf[ji]);
        }
        tally.add(ji, jo);
    }

    RunReport report{std::move(tally), {}, {}, std::nullopt, std::nullopt,
                     cfg.source_label, cfg.rounds, cfg.seed};
    report.estimate = estimate_behavior(report.tally);
    report.s = estimate_functional(report.tally, f);
    if (report.estimate.all_known())
        report.no_signaling_max_dev = no_signaling_check(report.estimate.to_behavior(), 1e-12).max_deviation;
    if (cfg.geometry) {
        bool bottom_present = false;
        for (int p = 0; p < s.n_parties; ++p) bottom_present = bottom_present || s.bottom[p];
        report.loopholes = loophole_audit(*cfg.geometry, bottom_present, cfg.fair_sampling_assumed);
    }
    return report;
}

// ---------------------------------------------------------------------------
// GHZ hidden-communication experiment
// ---------------------------------------------------------------------------

/// Three parties share a GHZ state; correlations are carried purely by hidden
/// influences at the model's speed in its privileged frame. Bob and Charlie
/// are synchronized so tightly that no influence connects them; that
/// isolation is a hard invariant of the configuration. Whether Alice's
/// influence arrives decides the statistics arm by arm.
struct VCausalGhzConfig {
    VCausalModel model;
    std::array<PartyGeometry, 3> parties;  // 0 = Alice, 1 = Bob, 2 = Charlie
    bool alice_measures = true;
    Units units = Units::si();

    /// Local fallback for a party the influence misses: default uniform bit.
    /// Pluggable so mixed models (hidden communication plus extra local
    /// variables) can be explored.
    std::function<int(RoundRng&, int)> local_fallback;

    void validate() const {
        model.validate();
        for (const auto& pg : parties) {
            pg.input.require_finite();
            pg.outcome.require_finite();
        }
        if (influence_reaches(parties[1].input, parties[2].outcome, model, units) ||
            influence_reaches(parties[2].input, parties[1].outcome, model, units))
            throw ValidationError(
                "ghz config: Bob and Charlie must be mutually unreachable for the model");
    }

    bool alice_reaches(int party) const {
        return influence_reaches(parties[0].input, parties[party].outcome, model, units);
    }

    /// Fig.-3-style layout: Bob at the origin and Charlie 18 km away, with
    /// outcomes registered within half the influence transit time between
    /// them; Alice 3000 km out, measuring early enough that her influence
    /// arrives at both before any outcome is produced.
    static VCausalGhzConfig standard(double v_over_c, bool alice_measures,
                                     const Units& u = Units::si()) {
        VCausalModel model{Frame{}, v_over_c};
        model.validate();
        const double bc = 18'000.0;
        const double la = 3'000'000.0;
        const double bc_transit = bc / (v_over_c * u.c);
        const double finalize = bc_transit / 2.0;
        const double alice_t = -2.0 * la / (v_over_c * u.c);

        VCausalGhzConfig cfg{model, {}, alice_measures, u, nullptr};
        cfg.parties[0] = {SpacetimeEvent{0, EventKind::input_chosen, alice_t, {-la, 0, 0}},
                          SpacetimeEvent{0, EventKind::outcome_registered, alice_t + finalize, {-la, 0, 0}}};
        cfg.parties[1] = {SpacetimeEvent{1, EventKind::input_chosen, 0.0, {0, 0, 0}},
                          SpacetimeEvent{1, EventKind::outcome_registered, finalize, {0, 0, 0}}};
        cfg.parties[2] = {SpacetimeEvent{2, EventKind::input_chosen, 0.0, {bc, 0, 0}},
                          SpacetimeEvent{2, EventKind::outcome_registered, finalize, {bc, 0, 0}}};
        return cfg;
    }
};

struct GhzArmStats {
    bool alice_measures;
    std::uint64_t rounds = 0;
    std::uint64_t equal_count = 0;                       // rounds with b == c
    std::array<std::array<std::uint64_t, 2>, 2> joint{};  // counts of (b, c)
    double p_equal = 0.0;
    double std_error = 0.0;

    /// Empirical joint of Bob's and Charlie's bits.
    JointDistribution bc_joint() const {
        const double n = static_cast<double>(rounds);
        return JointDistribution(2, 2,
                                 {joint[0][0] / n, joint[0][1] / n, joint[1][0] / n, joint[1][1] / n});
    }
};

struct GhzRunReport {
    GhzArmStats arm;         // the requested configuration
    GhzArmStats complement;  // same geometry, Alice toggled; used for the signaling figure
    double signaling_bits;   // I(arm ; 1[b=c]) with equal arm priors, from the empirical arms
    std::uint64_t seed = 0;
};

namespace detail {

inline GhzArmStats ghz_arm(const VCausalGhzConfig& cfg, bool alice_measures, std::uint64_t rounds,
                           std::uint64_t seed) {
    GhzArmStats stats{alice_measures, rounds, 0, {}, 0.0, 0.0};
    const bool reach_b = cfg.alice_reaches(1);
    const bool reach_c = cfg.alice_reaches(2);
    for (std::uint64_t i = 0; i < rounds; ++i) {
        RoundRng rng(seed, i);
        const int a = rng.next_bit();
        auto fallback = [&](int party) {
            return cfg.local_fallback ? cfg.local_fallback(rng, party) : rng.next_bit();
        };
        const int b = (alice_measures && reach_b) ? a : fallback(1);
        const int c = (alice_measures && reach_c) ? a : fallback(2);
        stats.joint[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] += 1;
        if (b == c) stats.equal_count += 1;
    }
    stats.p_equal = static_cast<double>(stats.equal_count) / static_cast<double>(rounds);
    stats.std_error = std::sqrt(stats.p_equal * (1.0 - stats.p_equal) / static_cast<double>(rounds));
    return stats;
}

} // namespace detail

/// Simulate the configured arm, plus the complementary arm under its own
/// derived seed, and report how much the pair (b,c) reveals about whether
/// Alice measured.
inline GhzRunReport ghz_vcausal_run(const VCausalGhzConfig& cfg, std::uint64_t rounds,
                                    std::uint64_t seed) {
    if (rounds < 1) throw ValidationError("ghz run: need at least one round");
    cfg.validate();

    GhzRunReport report{
        detail::ghz_arm(cfg, cfg.alice_measures, rounds, subseed(seed, cfg.alice_measures ? 1 : 2)),
        detail::ghz_arm(cfg, !cfg.alice_measures, rounds, subseed(seed, cfg.alice_measures ? 2 : 1)),
        0.0, seed};

    const GhzArmStats& on = report.arm.alice_measures ? report.arm : report.complement;
    const GhzArmStats& off = report.arm.alice_measures ? report.complement : report.arm;
    JointDistribution joint(2, 2,
                            {0.5 * (1.0 - off.p_equal), 0.5 * off.p_equal,
                             0.5 * (1.0 - on.p_equal), 0.5 * on.p_equal});
    report.signaling_bits = mutual_information(joint);
    return report;
}

// ---------------------------------------------------------------------------
// Detection-loophole model
// ---------------------------------------------------------------------------

/// Scenario of the detection model: binary inputs, outcomes {0, 1, no-outcome}.
inline Scenario detection_scenario() { return Scenario(2, {2, 2}, {3, 3}, {true, true}); }

/// The local strategy behind the detection loophole demonstration. Each round
/// a hidden plan (x_hat, y_hat, a_hat, b_hat) with a_hat + b_hat = x_hat.y_hat
/// is drawn uniformly; a party answers its planned bit iff its input matches
/// the plan and stays silent otherwise. Silence depends on the input, which is
/// exactly what post-selection then hides.
inline Behavior detection_model_behavior() {
    const Scenario s = detection_scenario();
    Behavior b = Behavior::zeros(s);
    for (int xh = 0; xh < 2; ++xh)
        for (int yh = 0; yh < 2; ++yh)
            for (int ah = 0; ah < 2; ++ah) {
                const int bh = ah ^ (xh & yh);
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y) {
                        const int a = (x == xh) ? ah : 2;
                        const int bb = (y == yh) ? bh : 2;
                        b.p(s.joint_input_index({x, y}), s.joint_output_index({a, bb})) += 1.0 / 8.0;
                    }
            }
    return b;
}

struct DetectionRunReport {
    TallyTable full_tally;       // over the 3-outcome scenario
    TallyPostSelection post;     // both-detected rounds, 2-outcome scenario
    FunctionalEstimate s_post;   // CHSH-type S of the post-selected tally
    double coincidence_rate = 0.0;
    std::array<double, 2> detection_rate{0.0, 0.0};  // per party (filled when requested)
    bool efficiency_reported = false;
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
};

inline DetectionRunReport detection_loophole_run(bool efficiency_report, std::uint64_t rounds,
                                                 std::uint64_t seed) {
    if (rounds < 1) throw ValidationError("detection run: need at least one round");
    const Scenario s = detection_scenario();
    TallyTable tally(s, seed);
    std::array<std::uint64_t, 2> detected{0, 0};
    for (std::uint64_t i = 0; i < rounds; ++i) {
        RoundRng rng(seed, i);
        const int x = rng.next_bit(), y = rng.next_bit();
        const int xh = rng.next_bit(), yh = rng.next_bit();
        const int ah = rng.next_bit();
        const int bh = ah ^ (xh & yh);
        const int a = (x == xh) ? ah : 2;
        const int b = (y == yh) ? bh : 2;
        if (a != 2) detected[0] += 1;
        if (b != 2) detected[1] += 1;
        tally.add(s.joint_input_index({x, y}), s.joint_output_index({a, b}));
    }

    TallyPostSelection post = post_select_detected(tally);
    DetectionRunReport report{std::move(tally), std::move(post), {}, 0.0,
                              {0.0, 0.0}, efficiency_report, rounds, seed};
    report.s_post = estimate_functional(report.post.tally, BellFunctional::chsh_s());
    report.coincidence_rate = report.post.coincidence_rate();
    if (efficiency_report) {
        report.detection_rate[0] = static_cast<double>(detected[0]) / static_cast<double>(rounds);
        report.detection_rate[1] = static_cast<double>(detected[1]) / static_cast<double>(rounds);
    }
    return report;
}

} // namespace bell
