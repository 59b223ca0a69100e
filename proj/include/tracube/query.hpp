#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tracube/store.hpp"
#include "tracube/types.hpp"

namespace tracube {

struct query_options {
    bool mbb_prune = true;     // rule-MBB accept/reject shortcuts
    bool region_prune = true;  // expanded-region candidate discarding
    // 0: nearest snapshot (ties towards the earlier one); -1: always walk
    // forward; +1: walk backward whenever a later snapshot exists.
    int force_direction = 0;
};

// Read-only query interface over a built store. All four queries answer
// directly on the compressed representation; rule metadata is used to skip
// or prune non-terminals and logs are expanded only when a rule straddles
// the queried instant and its bounding box is inconclusive.
class query_engine {
public:
    explicit query_engine(const store& s, query_options opt = {}) : s_(s), opt_(opt) {}

    const store& stored() const { return s_; }

    // The query box widened per axis by max_speed * dt on both sides,
    // clamped to the grid: every position from which the box is reachable
    // within dt instants.
    box expanded_region(const box& r, uint32_t dt) const {
        const cell sp = s_.max_speed();
        box e = r;
        e.x1 -= static_cast<int64_t>(sp.x) * dt;
        e.x2 += static_cast<int64_t>(sp.x) * dt;
        e.y1 -= static_cast<int64_t>(sp.y) * dt;
        e.y2 += static_cast<int64_t>(sp.y) * dt;
        e.z1 -= static_cast<int64_t>(sp.z) * dt;
        e.z2 += static_cast<int64_t>(sp.z) * dt;
        return e.clamped(s_.side());
    }

    std::optional<cell> position_of(uint32_t object, uint32_t t) const {
        check_instant(t);
        if (object >= s_.object_count()) return std::nullopt;
        auto [snap_idx, backward] = pick_snapshot(t);
        const uint32_t snap_instant = static_cast<uint32_t>(snap_idx) * s_.period();
        if (snap_instant == t) return s_.snapshot_at(snap_idx).find_object(object);
        if (backward) {
            auto at_snap = s_.snapshot_at(snap_idx).find_object(object);
            if (at_snap) return backward_position(object, snap_idx, *at_snap, t);
            // Gone before the later snapshot: walk forward from the earlier one.
            return forward_position(object, snap_idx - 1, t);
        }
        return forward_position(object, snap_idx, t);
    }

    // Positions for every instant of [t_s, t_e]; index i is instant t_s + i.
    std::vector<std::optional<cell>> trajectory(uint32_t object, uint32_t t_s, uint32_t t_e) const {
        check_instant(t_s);
        check_instant(t_e);
        if (t_s > t_e) throw std::invalid_argument("trajectory: t_s > t_e");
        std::vector<std::optional<cell>> out(t_e - t_s + 1);
        if (object >= s_.object_count()) return out;

        const uint32_t d = s_.period();
        for (size_t i = (t_s + d - 1) / d; i < s_.snapshot_count() && i * d <= t_e; ++i)
            out[i * d - t_s] = s_.snapshot_at(i).find_object(object);

        const uint32_t p_lo = t_s / d;
        for (uint32_t p = p_lo; p < s_.period_count() && s_.period_start(p) < t_e; ++p) {
            if (s_.period_end(p) < t_s) continue;
            sweep_period(object, p, t_s, t_e, out);
        }
        return out;
    }

    // Objects (with cells) whose known position lies inside r at instant t.
    std::vector<std::pair<uint32_t, cell>> time_slice(const box& r, uint32_t t) const {
        check_instant(t);
        std::vector<std::pair<uint32_t, cell>> out;
        const box rc = r.clamped(s_.side());
        if (rc.empty()) return out;

        auto [snap_idx, backward] = pick_snapshot(t);
        const uint32_t snap_instant = static_cast<uint32_t>(snap_idx) * s_.period();
        if (snap_instant == t) {
            out = s_.snapshot_at(snap_idx).objects_in_box(rc);
        } else if (!backward) {
            slice_forward(rc, t, snap_idx, nullptr, out);
        } else {
            const snapshot& later = s_.snapshot_at(snap_idx);
            slice_backward(rc, t, snap_idx, out);
            slice_forward(rc, t, snap_idx - 1, &later, out);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Objects whose known position lies inside r at any instant of [t_s, t_e].
    std::vector<uint32_t> time_interval(const box& r, uint32_t t_s, uint32_t t_e) const {
        check_instant(t_s);
        check_instant(t_e);
        if (t_s > t_e) throw std::invalid_argument("time_interval: t_s > t_e");
        const box rc = r.clamped(s_.side());
        std::vector<char> accepted(s_.object_count(), 0);
        if (rc.empty()) return {};

        const uint32_t d = s_.period();
        for (size_t i = (t_s + d - 1) / d; i < s_.snapshot_count() && i * d <= t_e; ++i) {
            for (const auto& [o, at] : s_.snapshot_at(i).objects_in_box(rc)) accepted[o] = 1;
        }
        for (uint32_t p = t_s / d; p < s_.period_count() && s_.period_start(p) < t_e; ++p) {
            const uint32_t a = std::max(t_s, s_.period_start(p) + 1);
            const uint32_t b = std::min(t_e, s_.period_end(p));
            if (a > b) continue;
            interval_portion(rc, p, a, b, accepted);
        }
        std::vector<uint32_t> out;
        for (uint32_t o = 0; o < accepted.size(); ++o)
            if (accepted[o]) out.push_back(o);
        return out;
    }

private:
    void check_instant(uint32_t t) const {
        if (t >= s_.instants()) throw std::out_of_range("query: instant out of range");
    }

    // Snapshot index to start from and the walk direction. Equidistant
    // instants resolve to the earlier snapshot.
    std::pair<size_t, bool> pick_snapshot(uint32_t t) const {
        const uint32_t d = s_.period();
        size_t f = t / d;
        if (t % d == 0) return {f, false};
        bool later_exists = f + 1 < s_.snapshot_count();
        if (!later_exists || opt_.force_direction < 0) return {f, false};
        if (opt_.force_direction > 0) return {f + 1, true};
        uint32_t fwd = t - static_cast<uint32_t>(f) * d;
        uint32_t bwd = static_cast<uint32_t>(f + 1) * d - t;
        return bwd < fwd ? std::make_pair(f + 1, true) : std::make_pair(f, false);
    }

    // Position after `steps_in` covered instants of `sym`, starting from the
    // position before the symbol; descends the rule tree without expanding.
    cell descend(uint64_t sym, cell before, uint32_t steps_in) const {
        const rule_table& rt = s_.rules();
        while (rule_table::is_nonterminal(sym)) {
            const grammar_rule& r = rt.rule_of(sym);
            uint32_t left_span = rt.span_of(r.left);
            if (steps_in <= left_span) {
                sym = r.left;
            } else {
                before = before + rt.meta_of(r.left).disp;
                steps_in -= left_span;
                sym = r.right;
            }
        }
        return before + movement::unpack(static_cast<uint32_t>(sym));
    }

    std::optional<cell> forward_position(uint32_t object, size_t period, uint32_t t) const {
        std::optional<cell> cur = s_.snapshot_at(period).find_object(object);
        for (const log_step& st : s_.steps(object, static_cast<uint32_t>(period))) {
            if (st.t_end < t) {
                apply_forward(st, cur);
                continue;
            }
            // st covers t
            switch (st.kind) {
                case step_kind::move:
                    return cur.value() + st.disp;
                case step_kind::rule:
                    if (t == st.t_end) return cur.value() + st.disp;
                    return descend(st.sym, cur.value(), t - st.t_begin);
                case step_kind::appear:
                    if (t == st.t_end) return st.abs;
                    return std::nullopt;
                case step_kind::reappear:
                    if (t == st.t_end) return cur.value() + st.disp;
                    return std::nullopt;
                case step_kind::vanish:
                    return std::nullopt;
            }
        }
        return std::nullopt;  // empty or short log: nothing known at t
    }

    std::optional<cell> backward_position(uint32_t object, size_t later_snap, cell at_snap,
                                          uint32_t t) const {
        const uint32_t period = static_cast<uint32_t>(later_snap) - 1;
        auto steps = s_.steps(object, period);
        cell cur = at_snap;  // position at the period end
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
            const log_step& st = *it;
            if (t > st.t_begin) {
                // t inside this step's coverage
                switch (st.kind) {
                    case step_kind::move:
                        return cur;  // t == t_end
                    case step_kind::rule:
                        if (t == st.t_end) return cur;
                        return descend(st.sym, cur - st.disp, t - st.t_begin);
                    case step_kind::appear:
                    case step_kind::reappear:
                        if (t == st.t_end) return cur;
                        return std::nullopt;  // inside the unknown gap
                    case step_kind::vanish:
                        return std::nullopt;
                }
            }
            // Un-apply the step to reach its begin position.
            switch (st.kind) {
                case step_kind::move:
                case step_kind::rule:
                case step_kind::reappear:
                    cur = cur - st.disp;
                    break;
                case step_kind::appear:
                    return std::nullopt;  // unknown before the appearance
                case step_kind::vanish:
                    return std::nullopt;  // cannot happen for objects present later
            }
        }
        return std::nullopt;
    }

    void apply_forward(const log_step& st, std::optional<cell>& cur) const {
        switch (st.kind) {
            case step_kind::move:
            case step_kind::rule:
            case step_kind::reappear:
                cur = cur.value() + st.disp;
                break;
            case step_kind::appear:
                cur = st.abs;
                break;
            case step_kind::vanish:
                cur.reset();
                break;
        }
    }

    // Expand the instants of one period that overlap [t_s, t_e] into `out`
    // (indexed by t - t_s). Rules wholly outside the range are skipped via
    // their displacement.
    void sweep_period(uint32_t object, uint32_t p, uint32_t t_s, uint32_t t_e,
                      std::vector<std::optional<cell>>& out) const {
        std::optional<cell> cur = s_.snapshot_at(p).find_object(object);
        for (const log_step& st : s_.steps(object, p)) {
            if (st.t_begin >= t_e) break;
            if (st.t_end < t_s) {
                apply_forward(st, cur);
                continue;
            }
            switch (st.kind) {
                case step_kind::move:
                case step_kind::reappear:
                    cur = cur.value() + st.disp;
                    if (st.t_end >= t_s && st.t_end <= t_e) out[st.t_end - t_s] = cur;
                    break;
                case step_kind::rule: {
                    uint32_t t = st.t_begin;
                    for (uint32_t code : s_.rules().expand(st.sym)) {
                        cur = cur.value() + movement::unpack(code);
                        ++t;
                        if (t >= t_s && t <= t_e) out[t - t_s] = cur;
                    }
                    break;
                }
                case step_kind::appear:
                    cur = st.abs;
                    if (st.t_end >= t_s && st.t_end <= t_e) out[st.t_end - t_s] = cur;
                    break;
                case step_kind::vanish:
                    return;  // absent to the period end
            }
            if (st.t_end >= t_e) break;
        }
    }

    // --- time slice ---

    struct slice_candidate {
        uint32_t object;
        cell pos;
        uint32_t at;          // instant of pos
        size_t step_offset;   // first unprocessed step
    };

    void slice_forward(const box& r, uint32_t t, size_t snap_idx, const snapshot* skip_if_in,
                       std::vector<std::pair<uint32_t, cell>>& out) const {
        const uint32_t s = static_cast<uint32_t>(snap_idx) * s_.period();
        const snapshot& snap = s_.snapshot_at(snap_idx);
        const box e0 = opt_.region_prune ? expanded_region(r, t - s) : whole_grid();

        std::vector<slice_candidate> cands;
        for (const auto& [o, pos] : snap.objects_in_box(e0)) {
            if (skip_if_in && skip_if_in->contains(o)) continue;
            cands.push_back({o, pos, s, 0});
        }
        // Objects unknown at the snapshot that appear mid-period before t.
        for (uint32_t o = 0; o < s_.object_count(); ++o) {
            if (snap.contains(o)) continue;
            if (skip_if_in && skip_if_in->contains(o)) continue;
            auto steps = s_.steps(o, static_cast<uint32_t>(snap_idx));
            if (steps.empty() || steps[0].kind != step_kind::appear) continue;
            const log_step& ap = steps[0];
            if (ap.t_end > t) continue;
            if (opt_.region_prune && !expanded_region(r, t - ap.t_end).contains(ap.abs)) continue;
            cands.push_back({o, ap.abs, ap.t_end, 1});
        }

        for (const auto& c : cands) {
            auto hit = track_to_instant(c, static_cast<uint32_t>(snap_idx), r, t);
            if (hit) out.emplace_back(c.object, *hit);
        }
    }

    // Follow one candidate to instant t; returns its cell when it ends up
    // inside r, nullopt otherwise.
    std::optional<cell> track_to_instant(const slice_candidate& c, uint32_t period, const box& r,
                                         uint32_t t) const {
        if (c.at == t) return r.contains(c.pos) ? std::optional<cell>(c.pos) : std::nullopt;
        auto steps = s_.steps(c.object, period);
        cell cur = c.pos;
        for (size_t i = c.step_offset; i < steps.size(); ++i) {
            const log_step& st = steps[i];
            if (st.t_end < t) {
                switch (st.kind) {
                    case step_kind::move:
                    case step_kind::rule:
                    case step_kind::reappear:
                        cur = cur + st.disp;
                        break;
                    case step_kind::appear:
                        cur = st.abs;
                        break;
                    case step_kind::vanish:
                        return std::nullopt;
                }
                if (opt_.region_prune && !expanded_region(r, t - st.t_end).contains(cur))
                    return std::nullopt;
                continue;
            }
            switch (st.kind) {
                case step_kind::move:
                    cur = cur + st.disp;
                    return r.contains(cur) ? std::optional<cell>(cur) : std::nullopt;
                case step_kind::rule: {
                    if (t == st.t_end) {
                        cur = cur + st.disp;
                        return r.contains(cur) ? std::optional<cell>(cur) : std::nullopt;
                    }
                    if (opt_.mbb_prune) {
                        const box mb = s_.rules().rule_of(st.sym).meta.mbb.anchored(cur);
                        if (!r.intersects(mb)) return std::nullopt;
                        // Fully-contained boxes accept as well; the descent
                        // below only resolves the exact reported cell.
                    }
                    cell at = descend(st.sym, cur, t - st.t_begin);
                    return r.contains(at) ? std::optional<cell>(at) : std::nullopt;
                }
                case step_kind::appear:
                    if (t == st.t_end && r.contains(st.abs)) return st.abs;
                    return std::nullopt;
                case step_kind::reappear:
                    if (t == st.t_end) {
                        cur = cur + st.disp;
                        return r.contains(cur) ? std::optional<cell>(cur) : std::nullopt;
                    }
                    return std::nullopt;
                case step_kind::vanish:
                    return std::nullopt;
            }
        }
        return std::nullopt;
    }

    void slice_backward(const box& r, uint32_t t, size_t snap_idx,
                        std::vector<std::pair<uint32_t, cell>>& out) const {
        const uint32_t e = static_cast<uint32_t>(snap_idx) * s_.period();
        const snapshot& snap = s_.snapshot_at(snap_idx);
        const box e0 = opt_.region_prune ? expanded_region(r, e - t) : whole_grid();
        const uint32_t period = static_cast<uint32_t>(snap_idx) - 1;

        for (const auto& [o, pos] : snap.objects_in_box(e0)) {
            auto steps = s_.steps(o, period);
            cell cur = pos;
            std::optional<cell> hit;
            bool resolved = false;
            for (auto it = steps.rbegin(); it != steps.rend() && !resolved; ++it) {
                const log_step& st = *it;
                if (t > st.t_begin) {
                    switch (st.kind) {
                        case step_kind::move:
                            hit = cur;
                            break;
                        case step_kind::rule:
                            if (t == st.t_end) {
                                hit = cur;
                            } else if (opt_.mbb_prune) {
                                const box mb =
                                    s_.rules().rule_of(st.sym).meta.mbb.anchored(cur - st.disp);
                                if (r.intersects(mb))
                                    hit = descend(st.sym, cur - st.disp, t - st.t_begin);
                            } else {
                                hit = descend(st.sym, cur - st.disp, t - st.t_begin);
                            }
                            break;
                        case step_kind::appear:
                        case step_kind::reappear:
                            if (t == st.t_end) hit = cur;
                            break;
                        case step_kind::vanish:
                            break;
                    }
                    resolved = true;
                    break;
                }
                switch (st.kind) {
                    case step_kind::move:
                    case step_kind::rule:
                    case step_kind::reappear:
                        cur = cur - st.disp;
                        break;
                    case step_kind::appear:
                    case step_kind::vanish:
                        resolved = true;  // unknown at and before t
                        hit.reset();
                        break;
                }
                if (resolved) break;
                if (opt_.region_prune && !expanded_region(r, st.t_begin - t).contains(cur)) break;
            }
            if (hit && r.contains(*hit)) out.emplace_back(o, *hit);
        }
    }

    // --- time interval ---

    void interval_portion(const box& r, uint32_t p, uint32_t a, uint32_t b,
                          std::vector<char>& accepted) const {
        const uint32_t s = s_.period_start(p);
        const snapshot& snap = s_.snapshot_at(p);
        const box e0 = opt_.region_prune ? expanded_region(r, b - s) : whole_grid();

        std::vector<slice_candidate> cands;
        for (const auto& [o, pos] : snap.objects_in_box(e0)) {
            if (!accepted[o]) cands.push_back({o, pos, s, 0});
        }
        for (uint32_t o = 0; o < s_.object_count(); ++o) {
            if (accepted[o] || snap.contains(o)) continue;
            auto steps = s_.steps(o, p);
            if (steps.empty() || steps[0].kind != step_kind::appear) continue;
            const log_step& ap = steps[0];
            if (ap.t_end > b) continue;
            if (opt_.region_prune && !expanded_region(r, b - ap.t_end).contains(ap.abs)) continue;
            if (ap.t_end >= a && r.contains(ap.abs)) {
                accepted[o] = 1;
                continue;
            }
            cands.push_back({o, ap.abs, ap.t_end, 1});
        }

        for (const auto& c : cands) {
            if (track_through_window(c, p, r, a, b)) accepted[c.object] = 1;
        }
    }

    // True when the candidate's known position enters r at some instant of
    // [a, b] within period p.
    bool track_through_window(const slice_candidate& c, uint32_t p, const box& r, uint32_t a,
                              uint32_t b) const {
        auto steps = s_.steps(c.object, p);
        cell cur = c.pos;
        for (size_t i = c.step_offset; i < steps.size(); ++i) {
            const log_step& st = steps[i];
            if (st.t_begin >= b) break;
            switch (st.kind) {
                case step_kind::move:
                case step_kind::reappear:
                    cur = cur + st.disp;
                    if (st.t_end >= a && st.t_end <= b && r.contains(cur)) return true;
                    if (st.t_end > b) return false;  // reappears after the window
                    if (opt_.region_prune && !expanded_region(r, b - st.t_end).contains(cur))
                        return false;
                    break;
                case step_kind::rule: {
                    const uint32_t lo = std::max(a, st.t_begin + 1);
                    const uint32_t hi = std::min(b, st.t_end);
                    if (lo > hi) {  // no covered instant inside the window
                        cur = cur + st.disp;
                        if (st.t_end > b) return false;
                        if (opt_.region_prune && !expanded_region(r, b - st.t_end).contains(cur))
                            return false;
                        break;
                    }
                    if (opt_.mbb_prune) {
                        const box mb = s_.rules().rule_of(st.sym).meta.mbb.anchored(cur);
                        if (r.contains(mb)) return true;
                        if (!r.intersects(mb)) {
                            cur = cur + st.disp;
                            if (st.t_end > b) return false;
                            if (opt_.region_prune &&
                                !expanded_region(r, b - st.t_end).contains(cur))
                                return false;
                            break;
                        }
                    }
                    // Inconclusive: decompress and test instant by instant.
                    uint32_t t = st.t_begin;
                    for (uint32_t code : s_.rules().expand(st.sym)) {
                        cur = cur + movement::unpack(code);
                        ++t;
                        if (t > b) return false;
                        if (t >= a && r.contains(cur)) return true;
                        if (opt_.region_prune && !expanded_region(r, b - t).contains(cur))
                            return false;
                    }
                    break;
                }
                case step_kind::appear:
                    cur = st.abs;
                    if (st.t_end >= a && st.t_end <= b && r.contains(cur)) return true;
                    if (st.t_end > b) return false;
                    if (opt_.region_prune && !expanded_region(r, b - st.t_end).contains(cur))
                        return false;
                    break;
                case step_kind::vanish:
                    return false;
            }
        }
        return false;
    }

    box whole_grid() const {
        return box::of(0, 0, 0, s_.side() - 1, s_.side() - 1, s_.side() - 1);
    }

    const store& s_;
    query_options opt_;
};

}  // namespace tracube
