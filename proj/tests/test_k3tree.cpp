#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "tracube/k3tree.hpp"

using namespace tracube;

namespace {

// Reference octree: materializes every level's bit string independently of
// the production traversal.
struct naive_octree {
    std::vector<std::vector<bool>> levels;  // level 0 = root's children

    naive_octree(const std::set<cell>& cells, uint32_t side, uint32_t k) {
        uint32_t height = 0;
        for (uint32_t s = 1; s < side; s *= k) ++height;
        struct node {
            cell origin;
            uint32_t side;
        };
        std::vector<node> frontier{{cell{0, 0, 0}, side}};
        for (uint32_t depth = 1; depth <= height; ++depth) {
            std::vector<bool> bits;
            std::vector<node> next;
            for (const node& nd : frontier) {
                uint32_t cs = nd.side / k;
                for (uint32_t cz = 0; cz < k; ++cz)
                    for (uint32_t cy = 0; cy < k; ++cy)
                        for (uint32_t cx = 0; cx < k; ++cx) {
                            cell o{nd.origin.x + cx * cs, nd.origin.y + cy * cs,
                                   nd.origin.z + cz * cs};
                            bool occ = false;
                            for (const cell& c : cells) {
                                if (c.x >= o.x && c.x < o.x + cs && c.y >= o.y && c.y < o.y + cs &&
                                    c.z >= o.z && c.z < o.z + cs) {
                                    occ = true;
                                    break;
                                }
                            }
                            bits.push_back(occ);
                            if (occ && cs > 1) next.push_back({o, cs});
                        }
            }
            levels.push_back(bits);
            frontier = std::move(next);
        }
    }

    std::vector<bool> t_bits() const {
        std::vector<bool> out;
        for (size_t i = 0; i + 1 < levels.size(); ++i)
            out.insert(out.end(), levels[i].begin(), levels[i].end());
        return out;
    }

    std::vector<bool> l_bits() const { return levels.back(); }
};

std::vector<bool> to_bools(const bit_vector& v) {
    std::vector<bool> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

uint64_t morton_key(const cell& c, uint32_t side, uint32_t k) {
    uint64_t key = 0;
    for (uint32_t s = side / k; s >= 1; s /= k) {
        uint64_t digit = (static_cast<uint64_t>(c.z / s % k) * k + c.y / s % k) * k + c.x / s % k;
        key = key * (static_cast<uint64_t>(k) * k * k) + digit;
        if (s == 1) break;
    }
    return key;
}

}  // namespace

TEST_CASE("empty cube keeps an all-zero root block") {
    k3_tree t({}, 8);
    CHECK(t.t().size() == 8);
    CHECK(t.t().count_ones() == 0);
    CHECK(t.l().size() == 0);
    CHECK(t.leaves_in_box(box::of(0, 0, 0, 7, 7, 7)).empty());
}

TEST_CASE("single cell produces one 1 per level") {
    k3_tree t({cell{5, 3, 6}}, 8);
    REQUIRE(t.t().size() == 16);  // two levels of 8
    CHECK(t.t().rank1(8) == 1);
    CHECK(t.t().rank1(16) == 2);
    REQUIRE(t.l().size() == 8);
    CHECK(t.l().count_ones() == 1);
    auto hits = t.leaves_in_box(box::of(0, 0, 0, 7, 7, 7));
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].at == cell{5, 3, 6});
    CHECK(t.leaf_to_cell(hits[0].pos) == cell{5, 3, 6});
}

TEST_CASE("two occupied slices of an 8-cube index every distinct cell") {
    // objects on the z=0 and z=1 slices only
    std::vector<cell> cells = {{0, 4, 0}, {0, 0, 0}, {3, 4, 0}, {6, 6, 0},
                               {2, 1, 1}, {5, 5, 1}, {0, 4, 1}, {0, 4, 0}};
    k3_tree t(cells, 8);
    std::set<cell> distinct(cells.begin(), cells.end());
    CHECK(t.cell_count() == distinct.size());
    auto hits = t.leaves_in_box(box::of(0, 0, 0, 7, 7, 7));
    REQUIRE(hits.size() == distinct.size());
    for (const auto& h : hits) CHECK(distinct.count(h.at) == 1);
}

TEST_CASE("bitmaps match an independently materialized tree") {
    std::mt19937_64 rng(1234);
    for (int round = 0; round < 30; ++round) {
        uint32_t k = round % 3 == 2 ? 3 : 2;
        uint32_t side = k;
        for (int h = 1 + rng() % 3; h > 1; --h) side *= k;
        std::set<cell> cells;
        size_t n = rng() % 40;
        for (size_t i = 0; i < n; ++i)
            cells.insert(cell{static_cast<uint32_t>(rng() % side),
                              static_cast<uint32_t>(rng() % side),
                              static_cast<uint32_t>(rng() % side)});
        if (cells.empty()) continue;
        k3_tree t(std::vector<cell>(cells.begin(), cells.end()), side, k);
        naive_octree ref(cells, side, k);
        REQUIRE(to_bools(t.t()) == ref.t_bits());
        REQUIRE(to_bools(t.l()) == ref.l_bits());
    }
}

TEST_CASE("box queries equal a naive filter over the input set") {
    std::mt19937_64 rng(42);
    for (int round = 0; round < 100; ++round) {
        uint32_t side = 1u << (2 + rng() % 4);
        std::set<cell> cells;
        size_t n = rng() % 80;
        for (size_t i = 0; i < n; ++i)
            cells.insert(cell{static_cast<uint32_t>(rng() % side),
                              static_cast<uint32_t>(rng() % side),
                              static_cast<uint32_t>(rng() % side)});
        k3_tree t(std::vector<cell>(cells.begin(), cells.end()), side);

        box q = box::of(rng() % side, rng() % side, rng() % side, rng() % side, rng() % side,
                        rng() % side);
        std::set<cell> expect;
        for (const cell& c : cells)
            if (q.contains(c)) expect.insert(c);
        auto hits = t.leaves_in_box(q);
        std::set<cell> got;
        for (const auto& h : hits) {
            got.insert(h.at);
            REQUIRE(t.leaf_to_cell(h.pos) == h.at);  // inverse traversal
        }
        REQUIRE(got == expect);

        // malformed box: empty result
        CHECK(t.leaves_in_box(box::of(5, 5, 5, 2, 5, 5)).empty());
    }
}

TEST_CASE("leaves enumerate in 3D Morton order") {
    std::mt19937_64 rng(77);
    for (int round = 0; round < 20; ++round) {
        uint32_t side = 16;
        std::set<cell> cells;
        for (int i = 0; i < 50; ++i)
            cells.insert(cell{static_cast<uint32_t>(rng() % side),
                              static_cast<uint32_t>(rng() % side),
                              static_cast<uint32_t>(rng() % side)});
        k3_tree t(std::vector<cell>(cells.begin(), cells.end()), side);

        std::vector<cell> expect(cells.begin(), cells.end());
        std::sort(expect.begin(), expect.end(), [&](const cell& a, const cell& b) {
            return morton_key(a, side, 2) < morton_key(b, side, 2);
        });
        auto hits = t.leaves_in_box(box::of(0, 0, 0, side - 1, side - 1, side - 1));
        REQUIRE(hits.size() == expect.size());
        for (size_t i = 0; i < hits.size(); ++i) {
            REQUIRE(hits[i].at == expect[i]);
            // the i-th 1 in L resolves to the i-th Morton cell
            REQUIRE(t.leaf_to_cell(t.l().select1(i + 1)) == expect[i]);
        }
    }
}

TEST_CASE("build is deterministic") {
    std::vector<cell> cells = {{1, 2, 3}, {7, 0, 4}, {3, 3, 3}, {1, 2, 3}};
    k3_tree a(cells, 8);
    std::reverse(cells.begin(), cells.end());
    k3_tree b(cells, 8);
    CHECK(a == b);
}

TEST_CASE("construction and leaf lookups reject bad input") {
    CHECK_THROWS_AS(k3_tree({cell{8, 0, 0}}, 8), std::out_of_range);
    CHECK_THROWS_AS(k3_tree({}, 6), std::invalid_argument);  // not a power of 2
    CHECK_THROWS_AS(k3_tree({}, 0), std::invalid_argument);
    k3_tree t({cell{1, 1, 1}}, 8);
    CHECK_THROWS_AS(t.leaf_to_cell(t.l().size()), std::invalid_argument);
    // position of a 0 in L
    size_t zero_pos = t.l().select0(1);
    CHECK_THROWS_AS(t.leaf_to_cell(zero_pos), std::invalid_argument);
}

TEST_CASE("k3 serialization round-trips") {
    std::mt19937_64 rng(5);
    std::vector<cell> cells;
    for (int i = 0; i < 100; ++i)
        cells.push_back(cell{static_cast<uint32_t>(rng() % 32), static_cast<uint32_t>(rng() % 32),
                             static_cast<uint32_t>(rng() % 32)});
    k3_tree t(cells, 32);
    byte_writer w;
    t.save(w);
    byte_reader r(w.data());
    k3_tree u = k3_tree::load(r);
    REQUIRE(u == t);
}
