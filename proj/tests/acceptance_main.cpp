// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code and carries a runtime
// budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bell_lab/bell_lab.hpp"

#include "oracles.hpp"

using namespace bell;

namespace {

struct Check {
    std::string name;
    double budget_seconds;
    std::function<bool(std::ostringstream&)> body;
};

bool expect(std::ostringstream& log, bool ok, const std::string& what) {
    if (!ok) log << "    failed: " << what << "\n";
    return ok;
}

LocalModel random_mixture(const std::vector<DeterministicStrategy>& all, RoundRng& rng) {
    LocalModel m{all, std::vector<double>(all.size())};
    double sum = 0.0;
    for (auto& w : m.weights) sum += (w = -std::log(1.0 - rng.next_unit()));
    for (auto& w : m.weights) w /= sum;
    return m;
}

// --- 1. local bound ---------------------------------------------------------

bool criterion_local_bound(std::ostringstream& log) {
    bool ok = true;
    const auto strategies = enumerate_deterministic(Scenario::chsh());
    ok &= expect(log, strategies.size() == 16, "16 deterministic strategies");

    const BellFunctional f = BellFunctional::chsh_s();
    const auto lm = local_max(f);
    ok &= expect(log, lm.max_value == 3.0, "max S over strategies is exactly 3");

    RoundRng rng(1001, 0);
    double worst = 0.0;
    for (int trial = 0; trial < 10'000; ++trial) {
        const double s = bell_value(behavior_of(random_mixture(strategies, rng)), f);
        worst = std::max(worst, s);
    }
    ok &= expect(log, worst <= 3.0 + 1e-12, "10^4 random mixtures stay at or below 3 + 1e-12");
    log << "    max over strategies = 3 exactly; worst mixture = " << worst << "\n";
    return ok;
}

// --- 2. PR box --------------------------------------------------------------

bool criterion_pr_box(std::ostringstream& log) {
    bool ok = true;
    const Behavior pr = pr_behavior();
    ok &= expect(log, bell_value(pr, BellFunctional::chsh_s()) == 4.0, "S(PR) = 4 exactly");
    ok &= expect(log, oracle::chsh_s_of(pr) == 4.0, "term-by-term oracle agrees");

    const auto ns = no_signaling_check(pr, 1e-12);
    ok &= expect(log, ns.max_deviation <= 1e-12, "no-signaling deviation <= 1e-12");

    const auto membership = is_local(pr, 1e-9);
    ok &= expect(log, !membership.local, "PR box is outside the local polytope");
    ok &= expect(log,
                 membership.certificate &&
                     std::abs(membership.certificate->witnessed_value - 4.0) <= 1e-9,
                 "certificate witnesses value 4");
    ok &= expect(log,
                 membership.certificate && std::abs(membership.certificate->local_bound - 3.0) <= 1e-9,
                 "certificate local bound 3");
    return ok;
}

// --- 3. quantum violation ---------------------------------------------------

bool criterion_quantum(std::ostringstream& log) {
    bool ok = true;
    const double s_analytic = bell_value(born_behavior(tsirelson_setup()), BellFunctional::chsh_s());
    ok &= expect(log, std::abs(s_analytic - oracle::kTsirelsonS) <= 1e-9,
                 "analytic setup reaches 2 + sqrt(2) within 1e-9");

    const double grid_max = oracle::chsh_grid_search_max();
    ok &= expect(log, std::abs(grid_max - oracle::kTsirelsonS) <= 1e-4,
                 "1-degree grid search lands within 1e-4 of 2 + sqrt(2)");

    RoundRng rng(3003, 0);
    double best = 0.0;
    bool ceiling = true;
    for (int trial = 0; trial < 10'000; ++trial) {
        std::vector<Amplitude> amp(4);
        double norm2 = 0.0;
        for (auto& a : amp) {
            a = {rng.next_unit() - 0.5, rng.next_unit() - 0.5};
            norm2 += std::norm(a);
        }
        for (auto& a : amp) a /= std::sqrt(norm2);
        auto angle = [&rng] { return 2.0 * std::numbers::pi * rng.next_unit(); };
        const QuantumSetup setup{StateVector(std::move(amp)),
                                 {{QubitMeasurement{angle()}, QubitMeasurement{angle()}},
                                  {QubitMeasurement{angle()}, QubitMeasurement{angle()}}}};
        const double s = bell_value(born_behavior(setup), BellFunctional::chsh_s());
        best = std::max(best, s);
        ceiling = ceiling && s <= oracle::kTsirelsonS + 1e-9;
    }
    ok &= expect(log, ceiling, "10^4 random setups never beat 2 + sqrt(2) + 1e-9");
    log << "    analytic S = " << s_analytic << ", grid max = " << grid_max
        << ", best random = " << best << "\n";
    return ok;
}

// --- 4. Monte Carlo calibration ---------------------------------------------

bool criterion_monte_carlo(std::ostringstream& log) {
    bool ok = true;
    const std::uint64_t n = 1'000'000;

    {
        ExperimentConfig cfg;
        cfg.source = ExperimentConfig::Source::pr_box;
        cfg.rounds = n;
        cfg.seed = 41;
        const RunReport r = run(cfg);
        ok &= expect(log, std::abs(r.s.value - 4.0) <= 4.0 * r.s.std_error,
                     "PR run within 4 stderr of 4");
    }
    {
        ExperimentConfig cfg;
        cfg.source = ExperimentConfig::Source::quantum;
        cfg.setup = tsirelson_setup();
        cfg.rounds = n;
        cfg.seed = 42;
        const RunReport r = run(cfg);
        ok &= expect(log, std::abs(r.s.value - oracle::kTsirelsonS) <= 4.0 * r.s.std_error,
                     "quantum run within 4 stderr of 2 + sqrt(2)");
        log << "    quantum S_hat = " << r.s.value << " +- " << r.s.std_error << "\n";
    }
    {
        ExperimentConfig cfg;
        cfg.source = ExperimentConfig::Source::behavior;
        cfg.behavior = Behavior::uniform(Scenario::chsh());
        cfg.rounds = n;
        cfg.seed = 43;
        const RunReport r = run(cfg);
        ok &= expect(log, std::abs(r.s.value - 2.0) <= 4.0 * r.s.std_error,
                     "local (white noise) run within 4 stderr of 2");
    }

    // Coverage: the PR estimator is degenerate (every term is exact), so the
    // interval calibration runs on the quantum source, whose terms carry
    // genuine binomial spread.
    int covered = 0;
    ExperimentConfig cfg;
    cfg.source = ExperimentConfig::Source::quantum;
    cfg.setup = tsirelson_setup();
    cfg.rounds = 10'000;
    for (int rep = 0; rep < 100; ++rep) {
        cfg.seed = subseed(4242, static_cast<std::uint64_t>(rep));
        const RunReport r = run(cfg);
        if (std::abs(r.s.value - oracle::kTsirelsonS) <= 2.0 * r.s.std_error) covered += 1;
    }
    ok &= expect(log, covered >= 89 && covered <= 99,
                 "2-stderr coverage in [89, 99] of 100 (got " + std::to_string(covered) + ")");
    log << "    coverage: " << covered << "/100\n";
    return ok;
}

// --- 5. GHZ signaling -------------------------------------------------------

bool criterion_ghz(std::ostringstream& log) {
    bool ok = true;
    const std::uint64_t n = 100'000;

    const auto on = ghz_vcausal_run(VCausalGhzConfig::standard(1e4, true), n, 51);
    ok &= expect(log, on.arm.p_equal == 1.0, "alice measuring gives P(b=c) = 1 exactly");

    const auto off = ghz_vcausal_run(VCausalGhzConfig::standard(1e4, false), n, 52);
    const double se = std::sqrt(0.25 / static_cast<double>(n));
    ok &= expect(log, std::abs(off.arm.p_equal - 0.5) <= 4.0 * se,
                 "alice idle gives P(b=c) = 0.5 within 4 stderr");

    ok &= expect(log, std::abs(on.signaling_bits - 0.3113) <= 0.01,
                 "arm information within 0.01 of 0.3113 bits");

    bool rejected = false;
    try {
        auto bad = VCausalGhzConfig::standard(1e4, true);
        bad.parties[2].outcome.t = 1.0;  // Bob's input now reaches Charlie's outcome
        ghz_vcausal_run(bad, 10, 1);
    } catch (const ValidationError&) {
        rejected = true;
    }
    ok &= expect(log, rejected, "disabling Bob-Charlie isolation is rejected");
    log << "    P(b=c): on = " << on.arm.p_equal << ", off = " << off.arm.p_equal
        << "; information = " << on.signaling_bits << " bits\n";
    return ok;
}

// --- 6. detection loophole ---------------------------------------------------

bool criterion_detection(std::ostringstream& log) {
    bool ok = true;
    const Behavior full = detection_model_behavior();
    const auto membership = is_local(full, 1e-9);
    ok &= expect(log, membership.local, "the full (no-outcome inclusive) behavior is local");

    const std::uint64_t n = 1'000'000;
    const auto r = detection_loophole_run(true, n, 61);
    ok &= expect(log, std::abs(r.s_post.value - 4.0) <= std::max(4.0 * r.s_post.std_error, 1e-12),
                 "post-selected S converges to 4");
    const double se_c = std::sqrt(0.25 * 0.75 / static_cast<double>(n));
    ok &= expect(log, std::abs(r.coincidence_rate - 0.25) <= 4.0 * se_c,
                 "coincidence rate 0.25 within 4 stderr");

    ok &= expect(log, local_max(BellFunctional::chsh_s_with_bottom()).max_value == 3.0,
                 "no strategy over the extended alphabet beats 3");
    log << "    S_post = " << r.s_post.value << ", coincidence = " << r.coincidence_rate << "\n";
    return ok;
}

// --- 7. relativity kernel ----------------------------------------------------

bool criterion_relativity(std::ostringstream& log) {
    bool ok = true;
    const Units u = Units::natural();

    RoundRng rng(7007, 0);
    bool invariant_ok = true;
    for (int trial = 0; trial < 10'000; ++trial) {
        auto coord = [&rng] { return rng.next_unit() * 4.0 - 2.0; };
        const SpacetimeEvent e1{0, EventKind::input_chosen, coord(), {coord(), coord(), coord()}};
        const SpacetimeEvent e2{1, EventKind::input_chosen, coord(), {coord(), coord(), coord()}};
        double v[3];
        double n2 = 0.0;
        for (auto& c : v) {
            c = rng.next_unit() - 0.5;
            n2 += c * c;
        }
        const double mag = 0.9 * rng.next_unit() / std::sqrt(n2);
        const Frame f{{v[0] * mag, v[1] * mag, v[2] * mag}};
        const double before = interval(e1, e2, u).invariant;
        const double after = interval(boost(e1, f, u), boost(e2, f, u), u).invariant;
        const double scale = std::max({std::abs(before), 1.0});
        invariant_ok = invariant_ok && std::abs(after - before) <= 1e-12 * scale;
    }
    ok &= expect(log, invariant_ok, "interval invariant under 10^4 random boosts at 1e-12 relative");

    const SpacetimeEvent eA{0, EventKind::input_chosen, 0.0, {-0.5, 0, 0}};
    const SpacetimeEvent eB{1, EventKind::input_chosen, 0.0, {+0.5, 0, 0}};
    ok &= expect(log, before_before(eA, eB, Frame{{-0.3, 0, 0}}, Frame{{+0.3, 0, 0}}, u),
                 "before-before holds for symmetric diverging frames");
    bool timelike_rejected = false;
    try {
        before_before(SpacetimeEvent{0, EventKind::input_chosen, 0.0, {0, 0, 0}},
                      SpacetimeEvent{1, EventKind::input_chosen, 1.0, {0.1, 0, 0}}, Frame{}, Frame{}, u);
    } catch (const ValidationError&) {
        timelike_rejected = true;
    }
    ok &= expect(log, timelike_rejected, "before-before errors on timelike pairs");

    SpeedScanGeometry g;
    g.sites[0] = {0.0, 0.0, 0.0};
    g.sites[1] = {18'000.0, 0.0, 0.0};
    const double bound6 = scan_speed_bound(g, 6e-9).overall_bound_over_c;
    const double bound3 = scan_speed_bound(g, 3e-9).overall_bound_over_c;
    ok &= expect(log, bound6 >= 1e4, "18 km at 6 ns bounds v above 10^4 c");
    ok &= expect(log, std::abs(bound3 - 2.0 * bound6) <= 1e-9 * bound3,
                 "halving the uncertainty doubles the bound");
    log << "    bound(6 ns) = " << bound6 << " c, bound(3 ns) = " << bound3 << " c\n";
    return ok;
}

// --- 8. delayed outcomes -----------------------------------------------------

bool criterion_delayed(std::ostringstream& log) {
    bool ok = true;
    const std::vector<SpacetimeEvent> events{
        {0, EventKind::input_chosen, 0.0, {0, 0, 0}},
        {0, EventKind::outcome_registered, 0.0, {0, 0, 0}},
        {1, EventKind::input_chosen, 0.0, {18'000.0, 0, 0}},
        {1, EventKind::outcome_registered, 0.0, {18'000.0, 0, 0}},
    };
    const auto delayed = delayed_outcome_viable(events, 1e-4);
    ok &= expect(log, delayed.viable, "100 us delay over 18 km is viable");
    ok &= expect(log, std::abs(delayed.required_speed - 1.8e8) <= 1e-3,
                 "required speed is 1.8e8 m/s");

    const auto immediate = delayed_outcome_viable(events, 0.0);
    ok &= expect(log, !immediate.viable, "no delay on spacelike events is not viable");
    log << "    required speed with delay = " << delayed.required_speed << " m/s\n";
    return ok;
}

} // namespace

int main() {
    const std::vector<Check> checks{
        {"local bound: 16 strategies, max S = 3, mixtures never exceed it", 1.0, criterion_local_bound},
        {"PR box: S = 4, no-signaling, certificate with witnessed value 4", 1.0, criterion_pr_box},
        {"quantum violation: 2 + sqrt(2) analytically, by grid search, never above", 60.0, criterion_quantum},
        {"Monte Carlo calibration: 4-stderr agreement and interval coverage", 120.0, criterion_monte_carlo},
        {"GHZ signaling: perfect correlation iff Alice measures, 0.3113 bits", 10.0, criterion_ghz},
        {"detection loophole: local full table, post-selected S -> 4", 30.0, criterion_detection},
        {"relativity kernel: boost invariance, before-before, speed-scan bound", 10.0, criterion_relativity},
        {"delayed outcomes: 18 km / 100 us viable at 1.8e8 m/s", 1.0, criterion_delayed},
    };

    int failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        std::ostringstream log;
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = checks[i].body(log);
        } catch (const std::exception& e) {
            log << "    exception: " << e.what() << "\n";
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > checks[i].budget_seconds) {
            log << "    over budget: " << seconds << " s > " << checks[i].budget_seconds << " s\n";
            ok = false;
        }
        std::printf("[%s] %zu. %s (%.2f s)\n", ok ? "PASS" : "FAIL", i + 1, checks[i].name.c_str(),
                    seconds);
        if (!ok) {
            std::fputs(log.str().c_str(), stdout);
            failures += 1;
        }
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
