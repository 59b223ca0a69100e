#include <catch_amalgamated.hpp>

#include <random>

#include "tracube/movement.hpp"

using namespace tracube;
using namespace tracube::movement;

TEST_CASE("zig-zag maps signs to alternating naturals") {
    CHECK(zigzag_encode(0) == 0);
    CHECK(zigzag_encode(-1) == 1);
    CHECK(zigzag_encode(1) == 2);
    CHECK(zigzag_encode(-2) == 3);
    CHECK(zigzag_encode(3) == 6);
    for (int32_t n = -5000; n <= 5000; ++n) REQUIRE(zigzag_decode(zigzag_encode(n)) == n);
}

TEST_CASE("movement packs into the 12/12/8 layout") {
    // dx=3, dy=1, dz=-2 -> fields (6, 2, 3)
    uint32_t code = pack(delta{3, 1, -2});
    CHECK(code == 6u * (1u << 20) + 2u * (1u << 8) + 3u);
    CHECK(unpack(code) == delta{3, 1, -2});
    CHECK(pack(delta{0, 0, 0}) == 0);
}

TEST_CASE("out-of-range components are rejected") {
    CHECK(try_pack(delta{2048, 0, 0}) == std::nullopt);
    CHECK(try_pack(delta{-2048, 0, 0}) == std::nullopt);
    CHECK(try_pack(delta{0, 0, 128}) == std::nullopt);
    CHECK(try_pack(delta{0, 0, -128}) == std::nullopt);
    CHECK(try_pack(delta{2047, -2047, 127}).has_value());
    CHECK_THROWS_AS(pack(delta{0, 3000, 0}), std::range_error);
}

TEST_CASE("codewords are distinct and outside the legal image") {
    CHECK(cw_disappear != cw_abs_appear);
    CHECK(cw_abs_appear != cw_rel_disappear);
    CHECK(is_codeword(cw_disappear));
    CHECK(is_codeword(cw_rel_disappear));
    CHECK(!is_codeword(pack(delta{-2047, -2047, -127})));
    // the largest legal code stays below the smallest codeword
    uint32_t top = pack(delta{2047, -2047, 127});
    CHECK(top < cw_rel_disappear);
}

TEST_CASE("pack/unpack round-trips across the legal domain") {
    // Per-axis exhaustive sweeps plus a dense random cross sample; the full
    // 12/12/8 cross product runs in the acceptance suite.
    for (int32_t dx = -max_xy; dx <= max_xy; ++dx)
        REQUIRE(unpack(pack(delta{dx, 0, 0})) == delta{dx, 0, 0});
    for (int32_t dy = -max_xy; dy <= max_xy; ++dy)
        REQUIRE(unpack(pack(delta{0, dy, 0})) == delta{0, dy, 0});
    for (int32_t dz = -max_z; dz <= max_z; ++dz)
        REQUIRE(unpack(pack(delta{0, 0, dz})) == delta{0, 0, dz});

    std::mt19937_64 rng(3);
    for (int i = 0; i < 200000; ++i) {
        delta d{static_cast<int32_t>(rng() % 4095) - 2047,
                static_cast<int32_t>(rng() % 4095) - 2047,
                static_cast<int32_t>(rng() % 255) - 127};
        uint32_t code = pack(d);
        REQUIRE(!is_codeword(code));
        REQUIRE(unpack(code) == d);
    }
}

TEST_CASE("pack is injective: distinct deltas never collide") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50000; ++i) {
        delta a{static_cast<int32_t>(rng() % 4095) - 2047,
                static_cast<int32_t>(rng() % 4095) - 2047,
                static_cast<int32_t>(rng() % 255) - 127};
        delta b{static_cast<int32_t>(rng() % 4095) - 2047,
                static_cast<int32_t>(rng() % 4095) - 2047,
                static_cast<int32_t>(rng() % 255) - 127};
        if (a == b) continue;
        REQUIRE(pack(a) != pack(b));
    }
}
