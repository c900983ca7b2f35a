// A tour of the nonlocal box: locally random outcomes, a promise that always
// holds whichever port fires first, and the reason the box cannot be cloned.

#include <cstdio>

#include "bell_lab/nonlocal_box.hpp"

using namespace bell;

int main() {
    PrBox box(2024);

    std::puts("ten rounds, Alice first:");
    for (int i = 0; i < 10; ++i) {
        const int x = i % 2, y = (i / 2) % 2;
        const auto [a, b] = box.sample(x, y);
        std::printf("  round %2d: x=%d y=%d -> a=%d b=%d   (a+b mod 2 = %d = x.y)\n", i, x, y, a, b,
                    (a + b) % 2);
    }

    std::puts("\nsame box, Bob's port fires before Alice's input exists:");
    const int b = box.feed_bob(1);
    const int a = box.feed_alice(1);
    box.next_round();
    std::printf("  b=%d arrived first, a=%d completed the promise (x.y = 1, a != b)\n", b, a);

    std::puts("\nwhy no machine can clone the box:");
    const auto t = clone_signaling_demo(0, 1);
    for (const auto& line : t.lines)
        std::printf("  x=%d: clone outcomes b1=%d b2=%d, b1+b2 mod 2 = %d\n", line.x, line.b1,
                    line.b2, line.decoded);
    std::printf("  %s\n", t.summary.c_str());
    return 0;
}
