// The S landscape in one sitting: a deterministic strategy at the local
// bound, white noise below it, the quantum optimum above it, and the PR box
// at the no-signaling ceiling, each checked against the polytope.

#include <cstdio>

#include "bell_lab/lhv.hpp"
#include "bell_lab/membership.hpp"
#include "bell_lab/nonlocal_box.hpp"
#include "bell_lab/quantum.hpp"

using namespace bell;

namespace {

void describe(const char* name, const Behavior& b) {
    const double s = bell_value(b, BellFunctional::chsh_s());
    const auto r = is_local(b, 1e-9);
    std::printf("  %-18s S = %.9f   %s", name, s, r.local ? "local" : "nonlocal");
    if (!r.local)
        std::printf(" (certificate: witnessed %.9f > bound %.9f)", r.certificate->witnessed_value,
                    r.certificate->local_bound);
    std::puts("");
}

} // namespace

int main() {
    std::puts("CHSH-type figure of merit S, local bound 3:");

    const auto strategies = enumerate_deterministic(Scenario::chsh());
    describe("all-zeros strategy", behavior_of(LocalModel{{strategies[0]}, {1.0}}));
    describe("white noise", Behavior::uniform(Scenario::chsh()));
    describe("quantum optimum", born_behavior(tsirelson_setup()));
    describe("PR box", pr_behavior());
    return 0;
}
