#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bell_lab/relativity.hpp"
#include "bell_lab/rng.hpp"

using namespace bell;

namespace {

SpacetimeEvent at(double t, double x, double y = 0.0, double z = 0.0) {
    return SpacetimeEvent{0, EventKind::input_chosen, t, {x, y, z}};
}

Frame random_frame(RoundRng& rng, double max_beta = 0.9) {
    // random direction, magnitude up to max_beta
    double v[3];
    double n2 = 0.0;
    for (auto& c : v) {
        c = rng.next_unit() - 0.5;
        n2 += c * c;
    }
    const double mag = max_beta * rng.next_unit() / std::sqrt(n2);
    return Frame{{v[0] * mag, v[1] * mag, v[2] * mag}};
}

} // namespace

TEST_CASE("interval classification") {
    const Units si = Units::si();
    SECTION("simultaneous separated events are spacelike") {
        REQUIRE(interval(at(0, 0), at(0, 1), si).kind == IntervalKind::spacelike);
    }
    SECTION("colocated sequential events are timelike") {
        REQUIRE(interval(at(0, 0), at(1, 0), si).kind == IntervalKind::timelike);
    }
    SECTION("a null ray is lightlike") {
        REQUIRE(interval(at(0, 0), at(1.0, si.c), si).kind == IntervalKind::lightlike);
    }
    SECTION("non-finite coordinates are rejected") {
        REQUIRE_THROWS_AS(interval(at(std::nan(""), 0), at(0, 1)), ValidationError);
    }
}

TEST_CASE("boost") {
    const Units u = Units::natural();
    SECTION("the rest frame is the identity") {
        const SpacetimeEvent e = at(1.5, 2.0, -1.0, 0.5);
        const SpacetimeEvent e2 = boost(e, Frame{}, u);
        REQUIRE(e2.t == e.t);
        REQUIRE(e2.x == e.x);
    }
    SECTION("|beta| >= 1 is rejected") {
        REQUIRE_THROWS_AS(boost(at(0, 0), Frame{{1.0, 0, 0}}, u), ValidationError);
    }
    SECTION("time order of a spacelike pair reverses for fast enough frames") {
        // dt = 0.1, dx = 1 (natural units): order flips when beta > 0.1
        const SpacetimeEvent e1 = at(0, 0), e2 = at(0.1, 1.0);
        const double t_slow = boost(e2, Frame{{0.05, 0, 0}}, u).t - boost(e1, Frame{{0.05, 0, 0}}, u).t;
        const double t_fast = boost(e2, Frame{{0.5, 0, 0}}, u).t - boost(e1, Frame{{0.5, 0, 0}}, u).t;
        REQUIRE(t_slow > 0.0);
        REQUIRE(t_fast < 0.0);
    }
    SECTION("interval is invariant under 10^4 random boosts") {
        RoundRng rng(314, 0);
        for (int trial = 0; trial < 10'000; ++trial) {
            const SpacetimeEvent e1 = at(rng.next_unit() * 4 - 2, rng.next_unit() * 4 - 2,
                                         rng.next_unit() * 4 - 2, rng.next_unit() * 4 - 2);
            const SpacetimeEvent e2 = at(rng.next_unit() * 4 - 2, rng.next_unit() * 4 - 2,
                                         rng.next_unit() * 4 - 2, rng.next_unit() * 4 - 2);
            const Frame f = random_frame(rng);
            const auto before = interval(e1, e2, u);
            const auto after = interval(boost(e1, f, u), boost(e2, f, u), u);
            // relative to the natural quadratic scale of the pair
            const double scale = std::max({std::abs(before.invariant), 1.0,
                                           dot(sub(e2.x, e1.x), sub(e2.x, e1.x))});
            REQUIRE(std::abs(after.invariant - before.invariant) <= 1e-12 * scale);
            if (before.kind != IntervalKind::lightlike) REQUIRE(after.kind == before.kind);
        }
    }
}

TEST_CASE("before_before") {
    const Units u = Units::natural();
    const SpacetimeEvent eA = at(0, -0.5), eB = at(0, +0.5);

    SECTION("diverging frames each see their own event first") {
        for (double beta : {0.01, 0.1, 0.5, 0.9}) {
            const Frame fA{{-beta, 0, 0}}, fB{{+beta, 0, 0}};
            REQUIRE(before_before(eA, eB, fA, fB, u));
            REQUIRE(before_before(eB, eA, fB, fA, u));  // symmetry
        }
    }
    SECTION("a single rest frame cannot reverse anything") {
        REQUIRE_FALSE(before_before(eA, eB, Frame{}, Frame{}, u));
    }
    SECTION("converging frames see the other event first") {
        REQUIRE_FALSE(before_before(eA, eB, Frame{{+0.5, 0, 0}}, Frame{{-0.5, 0, 0}}, u));
    }
    SECTION("timelike pairs are a configuration error") {
        REQUIRE_THROWS_AS(before_before(at(0, 0), at(1, 0.1), Frame{}, Frame{}, u), ValidationError);
    }
}

TEST_CASE("influence_reaches") {
    const Units si = Units::si();
    SECTION("colocated later target: any speed arrives") {
        const VCausalModel m{Frame{}, 1.0};
        REQUIRE(influence_reaches(at(0, 0), at(1e-9, 0), m, si));
    }
    SECTION("simultaneous separated events: no finite speed arrives") {
        for (double v : {1.0, 1e4, 1e8}) {
            const VCausalModel m{Frame{}, v};
            REQUIRE_FALSE(influence_reaches(at(0, 0), at(0, 1.0), m, si));
        }
    }
    SECTION("18 km in a microsecond needs far less than 1e5 c") {
        const VCausalModel m{Frame{}, 1e5};
        REQUIRE(influence_reaches(at(0, 0), at(1e-6, 18'000.0), m, si));
    }
    SECTION("monotone in the speed") {
        RoundRng rng(21, 0);
        for (int trial = 0; trial < 200; ++trial) {
            const SpacetimeEvent s = at(0, 0);
            const SpacetimeEvent t = at(rng.next_unit() * 1e-6, rng.next_unit() * 20'000.0);
            const double v = 1.0 + rng.next_unit() * 1e6;
            const VCausalModel slow{Frame{}, v}, fast{Frame{}, v * 10.0};
            if (influence_reaches(s, t, slow, si)) REQUIRE(influence_reaches(s, t, fast, si));
        }
    }
    SECTION("speed below c or past the cap is rejected") {
        REQUIRE_THROWS_AS((VCausalModel{Frame{}, 0.5}.validate()), ValidationError);
        REQUIRE_THROWS_AS((VCausalModel{Frame{}, 1e10}.validate()), ValidationError);
    }
}

TEST_CASE("scan_speed_bound") {
    SpeedScanGeometry g;
    g.sites[0] = {0.0, 0.0, 0.0};
    g.sites[1] = {18'000.0, 0.0, 0.0};

    SECTION("18 km at 6 ns timing excludes up to one in ten thousand c") {
        const auto r = scan_speed_bound(g, 6e-9);
        REQUIRE(r.rows.size() == 360);
        REQUIRE(r.overall_bound_over_c >= 1e4);
        REQUIRE(r.overall_bound_over_c < 1.1e4);
    }
    SECTION("halving the uncertainty doubles the bound") {
        const double b6 = scan_speed_bound(g, 6e-9).overall_bound_over_c;
        const double b3 = scan_speed_bound(g, 3e-9).overall_bound_over_c;
        REQUIRE(b3 == Catch::Approx(2.0 * b6).epsilon(1e-9));
    }
    SECTION("monotone nonincreasing in the uncertainty") {
        double last = std::numeric_limits<double>::infinity();
        for (double dt : {1e-9, 2e-9, 5e-9, 1e-8, 1e-7}) {
            const double b = scan_speed_bound(g, dt).overall_bound_over_c;
            REQUIRE(b <= last);
            last = b;
        }
    }
    SECTION("invariant under relabeling the two sites") {
        SpeedScanGeometry swapped = g;
        std::swap(swapped.sites[0], swapped.sites[1]);
        REQUIRE(scan_speed_bound(swapped, 6e-9).overall_bound_over_c ==
                Catch::Approx(scan_speed_bound(g, 6e-9).overall_bound_over_c).epsilon(1e-12));
    }
    SECTION("lab frame with vanishing uncertainty exceeds the cap") {
        SpeedScanGeometry lab = g;
        lab.frame_beta = 0.0;
        lab.azimuth_step_deg = 360.0;  // single frame
        const auto r = scan_speed_bound(lab, 1e-30);
        REQUIRE(r.capped);
        REQUIRE(r.overall_bound_over_c == VCausalModel::kSpeedCap);
    }
    SECTION("short sessions leave some frames poorly bounded") {
        SpeedScanGeometry brief = g;
        brief.session_seconds = 3600.0;  // 15 degrees of rotation
        const auto r = scan_speed_bound(brief, 6e-9);
        double lo = 1e300, hi = 0.0;
        for (const auto& row : r.rows) {
            lo = std::min(lo, row.v_min_over_c);
            hi = std::max(hi, row.v_min_over_c);
        }
        REQUIRE(lo < hi);  // alignment only happens for some azimuths
        REQUIRE(r.overall_bound_over_c == lo);
    }
    SECTION("nonpositive uncertainty is rejected") {
        REQUIRE_THROWS_AS(scan_speed_bound(g, 0.0), ValidationError);
        REQUIRE_THROWS_AS(scan_speed_bound(g, -1e-9), ValidationError);
    }
}

TEST_CASE("delayed_outcome_viable") {
    const Units si = Units::si();
    auto events = [](double outcome_t) {
        return std::vector<SpacetimeEvent>{
            {0, EventKind::input_chosen, 0.0, {0, 0, 0}},
            {0, EventKind::outcome_registered, outcome_t, {0, 0, 0}},
            {1, EventKind::input_chosen, 0.0, {18'000.0, 0, 0}},
            {1, EventKind::outcome_registered, outcome_t, {18'000.0, 0, 0}},
        };
    };

    SECTION("a 100 microsecond delay lets a subluminal influence cross 18 km") {
        const auto r = delayed_outcome_viable(events(0.0), 1e-4, si);
        REQUIRE(r.viable);
        REQUIRE(r.required_speed == Catch::Approx(1.8e8).epsilon(1e-12));
    }
    SECTION("no delay on spacelike events demands superluminal influence") {
        const auto r = delayed_outcome_viable(events(0.0), 0.0, si);
        REQUIRE_FALSE(r.viable);
        REQUIRE(r.required_speed == std::numeric_limits<double>::infinity());
    }
    SECTION("a huge delay makes the required speed negligible") {
        const auto r = delayed_outcome_viable(events(0.0), 3600.0, si);
        REQUIRE(r.viable);
        REQUIRE(r.required_speed < 10.0);
    }
    SECTION("negative delay and missing events are rejected") {
        REQUIRE_THROWS_AS(delayed_outcome_viable(events(0.0), -1.0, si), ValidationError);
        REQUIRE_THROWS_AS(delayed_outcome_viable({}, 1.0, si), ValidationError);
    }
}
