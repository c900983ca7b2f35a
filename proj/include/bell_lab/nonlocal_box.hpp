#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bell_lab/behavior.hpp"
#include "bell_lab/errors.hpp"
#include "bell_lab/rng.hpp"
#include "bell_lab/scenario.hpp"

namespace bell {

/// The extremal no-signaling behavior with promise a + b = x.y (mod 2):
/// p(a,b|x,y) = 1/2 when the promise holds, 0 otherwise. Locally each port is
/// pure noise; jointly the table reaches S = 4.
inline Behavior pr_behavior() {
    Behavior b = Behavior::zeros(Scenario::chsh());
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int bb = 0; bb < 2; ++bb)
                    if (((a + bb) & 1) == (x & y)) b.p(b.scenario().joint_input_index({x, y}),
                                                       b.scenario().joint_output_index({a, bb})) = 0.5;
    return b;
}

/// A samplable two-port box honoring the promise a + b = x.y (mod 2) in every
/// round, with uniform local outcomes. Either port may be fed first; the port
/// fed first returns the round's hidden uniform bit and the second port
/// completes the promise. That eager/deferred split is an implementation
/// device for a simulator, not a claim about physics; the observable joint
/// statistics do not depend on the feeding order.
///
/// Each port accepts exactly one input per round; a second query of the same
/// port in one round is a single-use violation. next_round() requires both
/// ports to have fired and appends the round to the log.
class PrBox {
public:
    struct Round {
        std::uint64_t round;
        int x, y, a, b;
    };

    explicit PrBox(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t current_round() const { return round_; }
    const std::vector<Round>& log() const { return log_; }

    int feed_alice(int x) {
        check_bit(x, "x");
        if (x_) throw ValidationError("pr box: single-use violation, Alice's port already fired this round");
        x_ = x;
        if (y_) {
            a_ = *b_ ^ (*x_ & *y_);
        } else {
            a_ = hidden_bit();
        }
        return *a_;
    }

    int feed_bob(int y) {
        check_bit(y, "y");
        if (y_) throw ValidationError("pr box: single-use violation, Bob's port already fired this round");
        y_ = y;
        if (x_) {
            b_ = *a_ ^ (*x_ & *y_);
        } else {
            b_ = hidden_bit();
        }
        return *b_;
    }

    void next_round() {
        if (!x_ || !y_)
            throw ValidationError("pr box: round incomplete, both ports must fire before advancing");
        log_.push_back({round_, *x_, *y_, *a_, *b_});
        round_ += 1;
        x_.reset();
        y_.reset();
        a_.reset();
        b_.reset();
    }

    /// One full round, Alice's port first.
    std::pair<int, int> sample(int x, int y) {
        const int a = feed_alice(x);
        const int b = feed_bob(y);
        next_round();
        return {a, b};
    }

private:
    static void check_bit(int v, const char* name) {
        if (v != 0 && v != 1) throw ValidationError(std::string("pr box: ") + name + " must be a bit");
    }

    int hidden_bit() { return RoundRng(seed_, round_).next_bit(); }

    std::uint64_t seed_;
    std::uint64_t round_ = 0;
    std::optional<int> x_, y_, a_, b_;
    std::vector<Round> log_;
};

/// Transcript of the no-cloning argument: if one Alice port were PR-correlated
/// with two Bob ports holding inputs y1 != y2, then b1 + b2 = x.(y1+y2) = x,
/// so reading both clones reveals Alice's input without any carrier. That is a
/// signaling transcript. With y1 = y2 the clones are consistent and nothing
/// follows.
struct CloneSignalingTranscript {
    int y1, y2;
    bool contradiction;  // true when y1 != y2: the decoded bit equals x

    struct Line {
        int x;        // Alice's input
        int a;        // Alice's outcome (any hidden bit; the sum cancels it)
        int b1, b2;   // the two clones' outcomes
        int decoded;  // b1 xor b2
    };
    std::vector<Line> lines;  // one per value of x
    std::string summary;
};

inline CloneSignalingTranscript clone_signaling_demo(int y1, int y2) {
    if ((y1 != 0 && y1 != 1) || (y2 != 0 && y2 != 1))
        throw ValidationError("clone demo: inputs must be bits");

    CloneSignalingTranscript t{y1, y2, y1 != y2, {}, ""};
    for (int x = 0; x < 2; ++x) {
        const int a = 0;  // the hidden bit drops out of b1 xor b2; 0 keeps the transcript readable
        const int b1 = a ^ (x & y1);
        const int b2 = a ^ (x & y2);
        t.lines.push_back({x, a, b1, b2, b1 ^ b2});
    }
    t.summary = t.contradiction
                    ? "b1 xor b2 equals x for every x: two clones let Bob read Alice's input, "
                      "so a cloned box signals"
                    : "no contradiction derivable: equal clone inputs give consistent outcomes";
    return t;
}

} // namespace bell
