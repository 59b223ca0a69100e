#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tracube/movement.hpp"
#include "tracube/serialize.hpp"
#include "tracube/types.hpp"

namespace tracube {

// Bounding box relative to the position an object holds before a rule (or
// movement) applies; always contains the origin.
struct rel_box {
    int32_t x1 = 0, y1 = 0, z1 = 0;
    int32_t x2 = 0, y2 = 0, z2 = 0;

    friend auto operator<=>(const rel_box&, const rel_box&) = default;

    static rel_box of_move(const delta& d) {
        return rel_box{std::min(d.x, 0), std::min(d.y, 0), std::min(d.z, 0),
                       std::max(d.x, 0), std::max(d.y, 0), std::max(d.z, 0)};
    }

    rel_box translated(const delta& d) const {
        return rel_box{x1 + d.x, y1 + d.y, z1 + d.z, x2 + d.x, y2 + d.y, z2 + d.z};
    }

    rel_box united(const rel_box& o) const {
        return rel_box{std::min(x1, o.x1), std::min(y1, o.y1), std::min(z1, o.z1),
                       std::max(x2, o.x2), std::max(y2, o.y2), std::max(z2, o.z2)};
    }

    bool contains(const delta& d) const {
        return d.x >= x1 && d.x <= x2 && d.y >= y1 && d.y <= y2 && d.z >= z1 && d.z <= z2;
    }

    // Absolute box once anchored at the position before the rule applies.
    box anchored(const cell& at) const {
        return box::of(static_cast<int64_t>(at.x) + x1, static_cast<int64_t>(at.y) + y1,
                       static_cast<int64_t>(at.z) + z1, static_cast<int64_t>(at.x) + x2,
                       static_cast<int64_t>(at.y) + y2, static_cast<int64_t>(at.z) + z2);
    }
};

// Covered instants, net displacement and bounding box of a symbol.
struct sym_meta {
    uint32_t span = 1;
    delta disp;
    rel_box mbb;
};

// Bottom-up combination: right child runs after the left child's
// displacement has been applied.
inline sym_meta combine_meta(const sym_meta& l, const sym_meta& r) {
    sym_meta m;
    m.span = l.span + r.span;
    m.disp = l.disp + r.disp;
    m.mbb = l.mbb.united(r.mbb.translated(l.disp));
    return m;
}

// Re-Pair rule enriched with span/displacement/bounding-box metadata.
struct grammar_rule {
    uint64_t left = 0;
    uint64_t right = 0;
    sym_meta meta;
};

// Rules indexed by non-terminal id. Non-terminals live above the 32-bit
// terminal space; terminals are packed movements or codewords.
class rule_table {
public:
    static constexpr uint64_t nonterm_base = 1ull << 32;

    static bool is_nonterminal(uint64_t sym) { return sym >= nonterm_base; }

    static bool is_codeword(uint64_t sym) {
        return sym < nonterm_base && movement::is_codeword(static_cast<uint32_t>(sym));
    }

    size_t size() const { return rules_.size(); }

    uint64_t add_rule(uint64_t left, uint64_t right) {
        grammar_rule r{left, right, combine_meta(meta_of(left), meta_of(right))};
        rules_.push_back(r);
        return nonterm_base + rules_.size() - 1;
    }

    const grammar_rule& rule_of(uint64_t sym) const {
        if (!is_nonterminal(sym) || sym - nonterm_base >= rules_.size())
            throw corrupt_error("rule_table: unknown non-terminal");
        return rules_[sym - nonterm_base];
    }

    sym_meta meta_of(uint64_t sym) const {
        if (is_nonterminal(sym)) return rule_of(sym).meta;
        if (is_codeword(sym)) throw std::logic_error("rule_table: codewords carry no metadata");
        delta d = movement::unpack(static_cast<uint32_t>(sym));
        return sym_meta{1, d, rel_box::of_move(d)};
    }

    uint32_t span_of(uint64_t sym) const { return is_nonterminal(sym) ? rule_of(sym).meta.span : 1; }

    // Left-to-right expansion into terminals.
    std::vector<uint32_t> expand(uint64_t sym) const {
        std::vector<uint32_t> out;
        std::vector<uint64_t> stack{sym};
        while (!stack.empty()) {
            uint64_t s = stack.back();
            stack.pop_back();
            if (is_nonterminal(s)) {
                const grammar_rule& r = rule_of(s);
                stack.push_back(r.right);
                stack.push_back(r.left);
            } else {
                out.push_back(static_cast<uint32_t>(s));
            }
        }
        return out;
    }

    void save(byte_writer& w) const {
        w.u32(static_cast<uint32_t>(rules_.size()));
        for (const auto& r : rules_) {
            w.u64(r.left);
            w.u64(r.right);
            w.u32(r.meta.span);
            w.i32(r.meta.disp.x);
            w.i32(r.meta.disp.y);
            w.i32(r.meta.disp.z);
            w.i32(r.meta.mbb.x1);
            w.i32(r.meta.mbb.y1);
            w.i32(r.meta.mbb.z1);
            w.i32(r.meta.mbb.x2);
            w.i32(r.meta.mbb.y2);
            w.i32(r.meta.mbb.z2);
        }
    }

    static rule_table load(byte_reader& rd) {
        rule_table t;
        uint32_t n = rd.u32();
        if (n > rd.remaining() / 56) throw corrupt_error("rule_table: count exceeds data");
        t.rules_.reserve(n);
        for (uint32_t i = 0; i < n; ++i) {
            grammar_rule r;
            r.left = rd.u64();
            r.right = rd.u64();
            r.meta.span = rd.u32();
            r.meta.disp = delta{rd.i32(), rd.i32(), rd.i32()};
            r.meta.mbb.x1 = rd.i32();
            r.meta.mbb.y1 = rd.i32();
            r.meta.mbb.z1 = rd.i32();
            r.meta.mbb.x2 = rd.i32();
            r.meta.mbb.y2 = rd.i32();
            r.meta.mbb.z2 = rd.i32();
            for (uint64_t child : {r.left, r.right}) {
                if (is_nonterminal(child) && child >= nonterm_base + i)
                    throw corrupt_error("rule_table: forward rule reference");
                if (is_codeword(child)) throw corrupt_error("rule_table: codeword inside rule");
            }
            t.rules_.push_back(r);
        }
        return t;
    }

    friend bool operator==(const rule_table& a, const rule_table& b) {
        if (a.rules_.size() != b.rules_.size()) return false;
        for (size_t i = 0; i < a.rules_.size(); ++i) {
            const auto &x = a.rules_[i], &y = b.rules_[i];
            if (x.left != y.left || x.right != y.right || x.meta.span != y.meta.span ||
                x.meta.disp != y.meta.disp || x.meta.mbb != y.meta.mbb)
                return false;
        }
        return true;
    }

private:
    std::vector<grammar_rule> rules_;
};

struct repair_result {
    std::vector<std::vector<uint64_t>> streams;
    rule_table table;
};

namespace detail {

struct sym_pair {
    uint64_t a, b;
    bool operator==(const sym_pair&) const = default;
};

struct sym_pair_hash {
    size_t operator()(const sym_pair& p) const {
        uint64_t h = p.a * 0x9E3779B97F4A7C15ull;
        h ^= p.b + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        return static_cast<size_t>(h);
    }
};

}  // namespace detail

// Re-Pair over a set of symbol streams sharing one rule table. The most
// frequent adjacent pair (ties: lowest (left,right)) is replaced by a fresh
// non-terminal until every remaining pair occurs at most once. Pairs never
// cross stream boundaries, and codewords are opaque separators: they are
// kept in place but never participate in a pair.
inline repair_result repair_compress(const std::vector<std::vector<uint64_t>>& streams) {
    constexpr uint64_t sep = ~0ull;
    constexpr int64_t none = -1;

    // Concatenate with separators; positions keep their identity throughout.
    std::vector<uint64_t> sym;
    bool first = true;
    for (const auto& s : streams) {
        if (!first) sym.push_back(sep);
        first = false;
        sym.insert(sym.end(), s.begin(), s.end());
    }
    const size_t n = sym.size();
    std::vector<int64_t> nxt(n), prv(n), occ_next(n, none), occ_prev(n, none);
    for (size_t i = 0; i < n; ++i) {
        nxt[i] = i + 1 < n ? static_cast<int64_t>(i) + 1 : none;
        prv[i] = i > 0 ? static_cast<int64_t>(i) - 1 : none;
    }

    auto pairable = [&](uint64_t s) {
        if (s == sep) return false;
        if (rule_table::is_nonterminal(s)) return true;
        return !movement::is_codeword(static_cast<uint32_t>(s));
    };

    struct pair_rec {
        size_t count = 0;
        int64_t head = none;
        int64_t tail = none;
    };
    std::unordered_map<detail::sym_pair, pair_rec, detail::sym_pair_hash> pairs;

    struct heap_entry {
        size_t count;
        uint64_t a, b;
    };
    auto heap_less = [](const heap_entry& x, const heap_entry& y) {
        if (x.count != y.count) return x.count < y.count;
        if (x.a != y.a) return x.a > y.a;
        return x.b > y.b;
    };
    std::priority_queue<heap_entry, std::vector<heap_entry>, decltype(heap_less)> heap(heap_less);

    auto add_occ = [&](uint64_t a, uint64_t b, int64_t pos) {
        pair_rec& rec = pairs[detail::sym_pair{a, b}];
        occ_prev[pos] = rec.tail;
        occ_next[pos] = none;
        if (rec.tail != none)
            occ_next[rec.tail] = pos;
        else
            rec.head = pos;
        rec.tail = pos;
        if (++rec.count >= 2) heap.push({rec.count, a, b});
    };

    auto remove_occ = [&](uint64_t a, uint64_t b, int64_t pos) {
        auto it = pairs.find(detail::sym_pair{a, b});
        if (it == pairs.end()) return;
        pair_rec& rec = it->second;
        if (occ_prev[pos] != none)
            occ_next[occ_prev[pos]] = occ_next[pos];
        else
            rec.head = occ_next[pos];
        if (occ_next[pos] != none)
            occ_prev[occ_next[pos]] = occ_prev[pos];
        else
            rec.tail = occ_prev[pos];
        occ_prev[pos] = occ_next[pos] = none;
        if (--rec.count == 0) pairs.erase(it);
    };

    for (size_t i = 0; i + 1 < n; ++i) {
        if (pairable(sym[i]) && pairable(sym[i + 1]))
            add_occ(sym[i], sym[i + 1], static_cast<int64_t>(i));
    }

    rule_table table;
    while (!heap.empty()) {
        heap_entry top = heap.top();
        heap.pop();
        auto it = pairs.find(detail::sym_pair{top.a, top.b});
        size_t current = it == pairs.end() ? 0 : it->second.count;
        if (current < 2) continue;
        if (current != top.count) {
            // Stale snapshot; reinsert at the true count so no live pair is lost.
            heap.push({current, top.a, top.b});
            continue;
        }

        const uint64_t a = top.a, b = top.b;
        const uint64_t w = table.add_rule(a, b);
        while (true) {
            auto rec_it = pairs.find(detail::sym_pair{a, b});
            if (rec_it == pairs.end() || rec_it->second.head == none) break;
            int64_t i = rec_it->second.head;
            int64_t j = nxt[i];
            int64_t p = prv[i];
            int64_t q = nxt[j];
            remove_occ(a, b, i);
            if (p != none && pairable(sym[p])) remove_occ(sym[p], a, p);
            if (q != none && pairable(sym[j]) && pairable(sym[q])) remove_occ(b, sym[q], j);
            sym[i] = w;
            nxt[i] = q;
            if (q != none) prv[q] = i;
            if (p != none && pairable(sym[p])) add_occ(sym[p], w, p);
            if (q != none && pairable(sym[q])) add_occ(w, sym[q], i);
        }
        pairs.erase(detail::sym_pair{a, b});
    }

    repair_result out;
    out.table = std::move(table);
    out.streams.resize(streams.size());
    size_t stream_idx = 0;
    for (int64_t i = n == 0 ? none : 0; i != none; i = nxt[i]) {
        if (sym[i] == sep)
            ++stream_idx;
        else
            out.streams[stream_idx].push_back(sym[i]);
    }
    return out;
}

}  // namespace tracube
