#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tracube/bitvector.hpp"
#include "tracube/k3tree.hpp"
#include "tracube/serialize.hpp"
#include "tracube/types.hpp"

namespace tracube {

// Absolute-position index for one time instant: a k3-tree over the occupied
// cells, the object identifiers grouped per leaf (in L order, ascending id
// inside a leaf) in `perm`, and the bitmap Q whose 0s close each leaf group.
// An id->slot table inverts perm without sequential scans.
class snapshot {
public:
    snapshot() = default;

    snapshot(const std::map<uint32_t, cell>& positions, uint32_t instant, uint32_t side,
             uint32_t k = 2)
        : instant_(instant) {
        std::map<cell, std::vector<uint32_t>> by_cell;
        for (const auto& [id, at] : positions) by_cell[at].push_back(id);

        std::vector<cell> cells;
        cells.reserve(by_cell.size());
        for (const auto& [at, ids] : by_cell) cells.push_back(at);
        tree_ = k3_tree(cells, side, k);

        perm_.reserve(positions.size());
        bit_builder q;
        for (const auto& hit : tree_.leaves_in_box(whole_grid())) {
            auto& ids = by_cell.at(hit.at);
            std::sort(ids.begin(), ids.end());
            for (size_t i = 0; i < ids.size(); ++i) {
                perm_.push_back(ids[i]);
                q.push_back(i + 1 < ids.size());
            }
        }
        q_ = bit_vector(std::move(q));
        build_inverse();
    }

    uint32_t instant() const { return instant_; }
    const k3_tree& tree() const { return tree_; }
    const std::vector<uint32_t>& perm() const { return perm_; }
    const bit_vector& q() const { return q_; }
    size_t object_count() const { return perm_.size(); }

    box whole_grid() const {
        return box::of(0, 0, 0, tree_.side() - 1, tree_.side() - 1, tree_.side() - 1);
    }

    // Objects whose cell lies inside the box, with their cells.
    std::vector<std::pair<uint32_t, cell>> objects_in_box(const box& q) const {
        std::vector<std::pair<uint32_t, cell>> out;
        for (const auto& hit : tree_.leaves_in_box(q)) {
            size_t x = tree_.l().rank1(hit.pos + 1);  // 1-based ordinal of this leaf
            size_t p = x == 1 ? 0 : q_.select0(x - 1) + 1;
            for (size_t slot = p;; ++slot) {
                out.emplace_back(perm_[slot], hit.at);
                if (!q_[slot]) break;  // 0 closes the leaf group
            }
        }
        return out;
    }

    // Cell of the object at this instant, or nullopt when it is not indexed.
    std::optional<cell> find_object(uint32_t id) const {
        auto slot = slot_of(id);
        if (!slot) return std::nullopt;
        size_t y = q_.rank0(*slot);  // leaf groups closed before this slot
        size_t leaf_pos = tree_.l().select1(y + 1);
        return tree_.leaf_to_cell(leaf_pos);
    }

    bool contains(uint32_t id) const { return slot_of(id).has_value(); }

    // Inverse of perm via binary search on the sorted id->slot table.
    std::optional<size_t> slot_of(uint32_t id) const {
        auto it = std::lower_bound(inverse_.begin(), inverse_.end(), id,
                                   [](const auto& e, uint32_t v) { return e.first < v; });
        if (it == inverse_.end() || it->first != id) return std::nullopt;
        return it->second;
    }

    void save(byte_writer& w) const {
        w.u32(instant_);
        tree_.save(w);
        w.u32(static_cast<uint32_t>(perm_.size()));
        for (uint32_t id : perm_) w.u32(id);
        q_.save(w);
        w.u32(static_cast<uint32_t>(inverse_.size()));
        for (const auto& [id, slot] : inverse_) {
            w.u32(id);
            w.u32(slot);
        }
    }

    static snapshot load(byte_reader& r) {
        snapshot s;
        s.instant_ = r.u32();
        s.tree_ = k3_tree::load(r);
        uint32_t n = r.u32();
        if (n > r.remaining() / 4) throw corrupt_error("snapshot perm exceeds data");
        s.perm_.resize(n);
        for (auto& id : s.perm_) id = r.u32();
        s.q_ = bit_vector::load(r);
        if (s.q_.size() != s.perm_.size()) throw corrupt_error("snapshot Q/perm size mismatch");
        if (s.perm_.size() > 0 && s.q_.count_zeros() != s.tree_.cell_count())
            throw corrupt_error("snapshot Q zeros do not match leaves");
        uint32_t m = r.u32();
        if (m != n) throw corrupt_error("snapshot inverse size mismatch");
        s.inverse_.resize(m);
        for (auto& [id, slot] : s.inverse_) {
            id = r.u32();
            slot = r.u32();
            if (slot >= n || s.perm_[slot] != id) throw corrupt_error("snapshot inverse mismatch");
        }
        return s;
    }

private:
    void build_inverse() {
        inverse_.reserve(perm_.size());
        for (size_t i = 0; i < perm_.size(); ++i)
            inverse_.emplace_back(perm_[i], static_cast<uint32_t>(i));
        std::sort(inverse_.begin(), inverse_.end());
    }

    uint32_t instant_ = 0;
    k3_tree tree_;
    std::vector<uint32_t> perm_;
    bit_vector q_;
    std::vector<std::pair<uint32_t, uint32_t>> inverse_;
};

}  // namespace tracube
