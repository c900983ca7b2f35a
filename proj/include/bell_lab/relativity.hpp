#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "bell_lab/errors.hpp"

namespace bell {

/// Unit system. SI uses the exact speed of light; natural units set c = 1 so
/// tests can use bit-exact coordinates.
struct Units {
    double c;

    static Units si() { return {299'792'458.0}; }
    static Units natural() { return {1.0}; }
};

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

enum class EventKind { input_chosen, outcome_registered };

/// A labeled point of spacetime: which party, input or outcome, where, when.
struct SpacetimeEvent {
    int party = 0;
    EventKind kind = EventKind::input_chosen;
    double t = 0.0;  // seconds
    Vec3 x{0.0, 0.0, 0.0};  // meters

    void require_finite() const {
        if (!std::isfinite(t) || !std::isfinite(x[0]) || !std::isfinite(x[1]) || !std::isfinite(x[2]))
            throw ValidationError("spacetime event: coordinates must be finite");
    }
};

enum class IntervalKind { timelike, lightlike, spacelike };

struct IntervalResult {
    IntervalKind kind;
    double invariant;  // c^2 dt^2 - |dx|^2
};

/// Classify the separation of two events by the sign of c^2 dt^2 - |dx|^2.
/// Magnitudes within 1e-9 of the terms' scale count as lightlike.
inline IntervalResult interval(const SpacetimeEvent& e1, const SpacetimeEvent& e2,
                               const Units& u = Units::si()) {
    e1.require_finite();
    e2.require_finite();
    const double ct = u.c * (e2.t - e1.t);
    const Vec3 dx = sub(e2.x, e1.x);
    const double time_part = ct * ct;
    const double space_part = dot(dx, dx);
    const double inv = time_part - space_part;
    const double scale = std::max(time_part, space_part);
    if (std::abs(inv) <= 1e-9 * scale || scale == 0.0) return {IntervalKind::lightlike, inv};
    return {inv > 0.0 ? IntervalKind::timelike : IntervalKind::spacelike, inv};
}

/// An inertial frame given by its velocity relative to the lab, in units of c.
struct Frame {
    Vec3 beta{0.0, 0.0, 0.0};

    double beta2() const { return dot(beta, beta); }

    void validate() const {
        if (!(beta2() < 1.0)) throw ValidationError("frame: |beta| must be strictly below 1");
    }

    double gamma() const { return 1.0 / std::sqrt(1.0 - beta2()); }
};

/// Coordinates of an event in the given frame (standard Lorentz boost; the
/// spacetime interval between any two events is preserved).
inline SpacetimeEvent boost(const SpacetimeEvent& e, const Frame& f, const Units& u = Units::si()) {
    f.validate();
    e.require_finite();
    const double b2 = f.beta2();
    if (b2 == 0.0) return e;
    const double g = f.gamma();
    const double ct = u.c * e.t;
    const double bx = dot(f.beta, e.x);

    SpacetimeEvent out = e;
    out.t = g * (ct - bx) / u.c;
    const double along = (g - 1.0) * bx / b2 - g * ct;
    for (int i = 0; i < 3; ++i) out.x[i] = e.x[i] + along * f.beta[i];
    return out;
}

/// A finite-speed hidden-influence model: influences propagate at v >= c
/// (in units of c) in one universal privileged frame. Infinite speed is not a
/// model parameter; use the cap below when "effectively instantaneous" is
/// meant.
struct VCausalModel {
    Frame privileged;
    double speed_over_c = 1.0;

    static constexpr double kSpeedCap = 1e9;

    void validate() const {
        privileged.validate();
        if (!std::isfinite(speed_over_c) || speed_over_c < 1.0)
            throw ValidationError("v-causal model: speed must be finite and >= 1 (units of c)");
        if (speed_over_c > kSpeedCap)
            throw ValidationError("v-causal model: speed exceeds the 1e9 c cap");
    }
};

/// True iff an influence emitted at `source` travelling at the model's speed
/// in the privileged frame arrives at `target` no later than it happens.
inline bool influence_reaches(const SpacetimeEvent& source, const SpacetimeEvent& target,
                              const VCausalModel& m, const Units& u = Units::si()) {
    m.validate();
    const SpacetimeEvent s = boost(source, m.privileged, u);
    const SpacetimeEvent t = boost(target, m.privileged, u);
    const double transit = norm(sub(t.x, s.x)) / (m.speed_over_c * u.c);
    return t.t >= s.t + transit;
}

/// True iff each event precedes the other in "its" frame: eA before eB as seen
/// from frameA, and eB before eA as seen from frameB. Only spacelike pairs can
/// disagree about time order; anything else is a configuration error.
inline bool before_before(const SpacetimeEvent& eA, const SpacetimeEvent& eB, const Frame& frameA,
                          const Frame& frameB, const Units& u = Units::si()) {
    if (interval(eA, eB, u).kind != IntervalKind::spacelike)
        throw ValidationError("before-before: events must be spacelike separated (time order is "
                              "frame-invariant otherwise)");
    const double tA_in_A = boost(eA, frameA, u).t;
    const double tB_in_A = boost(eB, frameA, u).t;
    const double tA_in_B = boost(eA, frameB, u).t;
    const double tB_in_B = boost(eB, frameB, u).t;
    return tA_in_A < tB_in_A && tB_in_B < tA_in_B;
}

/// Geometry for the Earth-rotation speed-bound scan: two sites on a chord that
/// rotates rigidly at angular velocity omega in the x-y plane. Nominally the
/// two measurement events are simultaneous in the lab up to the timing
/// uncertainty; candidate privileged frames are a grid of in-plane directions
/// at a fixed boost magnitude. First-order model: the frame-time offset of the
/// two events is gamma * beta . dx / c^2, and the best moment of the session
/// is the one minimizing it.
struct SpeedScanGeometry {
    std::array<Vec3, 2> sites{};       // positions at session start, meters
    double omega = 2.0 * std::numbers::pi / 86'400.0;  // rad/s, Earth rotation
    double session_seconds = 12.0 * 3600.0;
    double frame_beta = 1.2e-3;        // boost magnitude of candidate frames
    double azimuth_step_deg = 1.0;

    void validate() const {
        if (omega <= 0.0) throw ValidationError("speed scan: omega must be positive");
        if (session_seconds <= 0.0) throw ValidationError("speed scan: session must have positive length");
        if (!(frame_beta >= 0.0) || frame_beta >= 1.0)
            throw ValidationError("speed scan: frame beta must lie in [0,1)");
        if (azimuth_step_deg <= 0.0) throw ValidationError("speed scan: azimuth step must be positive");
        if (norm(sub(sites[1], sites[0])) <= 0.0)
            throw ValidationError("speed scan: sites must be distinct");
    }
};

struct SpeedScanRow {
    double azimuth_deg;
    double beta;
    double v_min_over_c;
    double best_session_time_s;  // moment of best simultaneity for this frame
    bool capped;                 // v_min hit the 1e9 c cap
};

struct SpeedScanResult {
    std::vector<SpeedScanRow> rows;
    double overall_bound_over_c;
    bool capped;
};

/// Minimal hidden-influence speed not excluded per candidate frame, and the
/// overall bound (the minimum over the grid). Smaller timing uncertainty
/// means a larger bound.
inline SpeedScanResult scan_speed_bound(const SpeedScanGeometry& g, double sync_uncertainty_s,
                                        const Units& u = Units::si()) {
    g.validate();
    if (!(sync_uncertainty_s > 0.0))
        throw ValidationError("speed scan: timing uncertainty must be positive");

    const Vec3 chord = sub(g.sites[1], g.sites[0]);
    const double d_plane = std::hypot(chord[0], chord[1]);  // rotating component
    const double distance = norm(chord);                    // frame-time offset uses in-plane projection
    const double phase0 = std::atan2(chord[1], chord[0]);
    const double phase_span = g.omega * g.session_seconds;
    const double gamma = 1.0 / std::sqrt(1.0 - g.frame_beta * g.frame_beta);

    SpeedScanResult result{{}, std::numeric_limits<double>::infinity(), false};
    for (double az = 0.0; az < 360.0; az += g.azimuth_step_deg) {
        const double az_rad = az * std::numbers::pi / 180.0;

        // |cos(phase0 - az + omega t)| minimized over t in [0, session]:
        // zero when the swept arc crosses pi/2 + k pi, else best at an endpoint.
        const double lo = phase0 - az_rad;
        double best_cos;
        double best_phase;
        {
            const double pi = std::numbers::pi;
            const double z = pi / 2.0 + pi * std::ceil((lo - pi / 2.0) / pi);  // first zero of cos at or after lo
            if (z <= lo + phase_span) {
                best_cos = 0.0;
                best_phase = z;
            } else if (std::abs(std::cos(lo)) <= std::abs(std::cos(lo + phase_span))) {
                best_cos = std::abs(std::cos(lo));
                best_phase = lo;
            } else {
                best_cos = std::abs(std::cos(lo + phase_span));
                best_phase = lo + phase_span;
            }
        }

        const double projection = g.frame_beta * d_plane * best_cos;        // beta . dx at best moment
        const double dt_eff = gamma * projection / (u.c * u.c);             // residual frame-time offset
        const double v = distance / (u.c * (dt_eff + sync_uncertainty_s));
        const bool capped = v > VCausalModel::kSpeedCap;

        result.rows.push_back({az, g.frame_beta, capped ? VCausalModel::kSpeedCap : v,
                               (best_phase - lo) / g.omega, capped});
        if (result.rows.back().v_min_over_c < result.overall_bound_over_c)
            result.overall_bound_over_c = result.rows.back().v_min_over_c;
    }
    result.capped = result.overall_bound_over_c >= VCausalModel::kSpeedCap;
    return result;
}

/// Viability of "outcomes happen only after a delay T": shift every
/// outcome-registration time by +T and ask how fast an influence from the
/// other party's input would have to be to arrive by then. The local
/// explanation survives iff every such influence can be subluminal.
struct DelayedOutcomeReport {
    struct Pair {
        int from_party;  // input event
        int to_party;    // delayed outcome event
        double required_speed;  // m/s; +inf when the outcome precedes the input
    };
    std::vector<Pair> pairs;
    double required_speed;  // max over pairs
    bool viable;            // required_speed <= c
};

inline DelayedOutcomeReport delayed_outcome_viable(const std::vector<SpacetimeEvent>& events,
                                                   double delay_s, const Units& u = Units::si()) {
    if (delay_s < 0.0) throw ValidationError("delayed outcomes: delay must be nonnegative");
    DelayedOutcomeReport report{{}, 0.0, true};
    for (const auto& in : events) {
        if (in.kind != EventKind::input_chosen) continue;
        for (const auto& out : events) {
            if (out.kind != EventKind::outcome_registered || out.party == in.party) continue;
            const double dt = out.t + delay_s - in.t;
            const double dist = norm(sub(out.x, in.x));
            double speed;
            if (dt > 0.0)
                speed = dist / dt;
            else
                speed = dist == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
            report.pairs.push_back({in.party, out.party, speed});
            report.required_speed = std::max(report.required_speed, speed);
        }
    }
    if (report.pairs.empty())
        throw ValidationError("delayed outcomes: need input and outcome events of at least two parties");
    report.viable = report.required_speed <= u.c;
    return report;
}

} // namespace bell
