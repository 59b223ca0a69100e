#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tracube/bitvector.hpp"
#include "tracube/serialize.hpp"
#include "tracube/types.hpp"

namespace tracube {

// Succinct index over the occupied cells of a side^3 grid (side a power of
// k). The conceptual k^3-ary tree is stored level-wise in two bitmaps: T
// holds every level except the last, L holds the last level; child blocks
// are located through rank on T. Child order inside a block is x fastest,
// then y, then z. Immutable once built.
class k3_tree {
public:
    k3_tree() = default;

    k3_tree(const std::vector<cell>& cells, uint32_t side, uint32_t k = 2) : k_(k), side_(side) {
        if (k_ < 2) throw std::invalid_argument("k3_tree: k must be >= 2");
        height_ = 0;
        uint64_t s = 1;
        while (s < side_) {
            s *= k_;
            ++height_;
        }
        if (s != side_ || height_ == 0)
            throw std::invalid_argument("k3_tree: side must be a positive power of k");
        uint64_t kk_bits = 64 - std::countl_zero(static_cast<uint64_t>(k_) * k_ * k_ - 1);
        if (height_ * kk_bits > 63) throw std::invalid_argument("k3_tree: grid too large");
        for (const cell& c : cells) {
            if (c.x >= side_ || c.y >= side_ || c.z >= side_)
                throw std::out_of_range("k3_tree: cell outside grid");
        }

        std::vector<uint64_t> codes;
        codes.reserve(cells.size());
        for (const cell& c : cells) codes.push_back(morton(c));
        std::sort(codes.begin(), codes.end());
        codes.erase(std::unique(codes.begin(), codes.end()), codes.end());

        const uint64_t kk = static_cast<uint64_t>(k_) * k_ * k_;
        bit_builder t_bits, l_bits;
        if (codes.empty()) {
            // Convention: an empty grid keeps a single all-zero root block in T.
            for (uint64_t i = 0; i < kk; ++i) t_bits.push_back(false);
        } else {
            // Level-wise: the depth-(d+1) bit blocks are the children of the
            // distinct depth-d prefixes of the sorted codes.
            for (uint32_t depth = 1; depth <= height_; ++depth) {
                bit_builder& out = depth == height_ ? l_bits : t_bits;
                uint64_t child_div = pow_u64(kk, height_ - depth);
                uint64_t parent_div = child_div * kk;
                size_t i = 0;
                while (i < codes.size()) {
                    uint64_t parent = codes[i] / parent_div;
                    size_t j = i;
                    for (uint64_t c = 0; c < kk; ++c) {
                        bool present = j < codes.size() && codes[j] / child_div == parent * kk + c;
                        out.push_back(present);
                        if (present) {
                            while (j < codes.size() && codes[j] / child_div == parent * kk + c) ++j;
                        }
                    }
                    i = j;
                }
            }
        }
        t_ = bit_vector(std::move(t_bits));
        l_ = bit_vector(std::move(l_bits));
    }

    uint32_t k() const { return k_; }
    uint32_t side() const { return side_; }
    const bit_vector& t() const { return t_; }
    const bit_vector& l() const { return l_; }
    size_t cell_count() const { return l_.count_ones(); }

    struct leaf_hit {
        size_t pos;  // position of the 1 in L
        cell at;
    };

    // All occupied cells inside the (inclusive, already in-grid) box, in L
    // order. A malformed box yields an empty result.
    std::vector<leaf_hit> leaves_in_box(const box& q) const {
        std::vector<leaf_hit> out;
        box qc = q.clamped(side_);
        if (qc.empty() || l_.size() == 0) return out;
        descend(0, cell{0, 0, 0}, side_, qc, out);
        return out;
    }

    // Upward traversal: cell coordinates of the leaf at position `leaf_pos`
    // in L (which must hold a 1).
    cell leaf_to_cell(size_t leaf_pos) const {
        if (leaf_pos >= l_.size() || !l_[leaf_pos])
            throw std::invalid_argument("k3_tree: not an occupied leaf");
        const uint64_t kk = static_cast<uint64_t>(k_) * k_ * k_;
        uint64_t pos = t_.size() + leaf_pos;
        cell c{0, 0, 0};
        uint32_t scale = 1;
        for (;;) {
            uint64_t child = pos % kk;
            c.x += static_cast<uint32_t>(child % k_) * scale;
            c.y += static_cast<uint32_t>(child / k_ % k_) * scale;
            c.z += static_cast<uint32_t>(child / (k_ * k_)) * scale;
            uint64_t block = pos / kk;
            if (block == 0) break;  // reached the root's child block
            pos = t_.select1(block);
            scale *= k_;
        }
        return c;
    }

    void save(byte_writer& w) const {
        w.u32(k_);
        w.u32(side_);
        t_.save(w);
        l_.save(w);
    }

    static k3_tree load(byte_reader& r) {
        k3_tree t;
        t.k_ = r.u32();
        t.side_ = r.u32();
        if (t.k_ < 2) throw corrupt_error("k3_tree: bad k");
        t.height_ = 0;
        uint64_t s = 1;
        while (s < t.side_) {
            s *= t.k_;
            ++t.height_;
        }
        if (s != t.side_ || t.height_ == 0) throw corrupt_error("k3_tree: bad side");
        t.t_ = bit_vector::load(r);
        t.l_ = bit_vector::load(r);
        return t;
    }

    friend bool operator==(const k3_tree& a, const k3_tree& b) {
        return a.k_ == b.k_ && a.side_ == b.side_ && a.t_ == b.t_ && a.l_ == b.l_;
    }

private:
    static uint64_t pow_u64(uint64_t base, uint32_t e) {
        uint64_t r = 1;
        while (e--) r *= base;
        return r;
    }

    uint64_t morton(const cell& c) const {
        uint64_t code = 0;
        uint32_t s = side_;
        while (s > 1) {
            s /= k_;
            uint64_t child = (static_cast<uint64_t>(c.z / s % k_) * k_ + c.y / s % k_) * k_ +
                             c.x / s % k_;
            code = code * (static_cast<uint64_t>(k_) * k_ * k_) + child;
        }
        return code;
    }

    bool bit_at(uint64_t pos) const {
        return pos < t_.size() ? t_[pos] : l_[pos - t_.size()];
    }

    void descend(uint64_t block_start, cell origin, uint32_t node_side, const box& q,
                 std::vector<leaf_hit>& out) const {
        uint32_t child_side = node_side / k_;
        uint64_t idx = block_start;
        for (uint32_t cz = 0; cz < k_; ++cz) {
            for (uint32_t cy = 0; cy < k_; ++cy) {
                for (uint32_t cx = 0; cx < k_; ++cx, ++idx) {
                    cell co{origin.x + cx * child_side, origin.y + cy * child_side,
                            origin.z + cz * child_side};
                    box cb = box::of(co.x, co.y, co.z, co.x + child_side - 1,
                                     co.y + child_side - 1, co.z + child_side - 1);
                    if (!q.intersects(cb) || !bit_at(idx)) continue;
                    if (child_side == 1) {
                        out.push_back({static_cast<size_t>(idx - t_.size()), co});
                    } else {
                        uint64_t kk = static_cast<uint64_t>(k_) * k_ * k_;
                        descend(t_.rank1(idx + 1) * kk, co, child_side, q, out);
                    }
                }
            }
        }
    }

    uint32_t k_ = 2;
    uint32_t side_ = 0;
    uint32_t height_ = 0;
    bit_vector t_;
    bit_vector l_;
};

}  // namespace tracube
