#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tracube/events.hpp"
#include "tracube/types.hpp"

namespace tracube {

// A raw trajectory sample: planar x/y (already projected) plus altitude, in
// the units the grid config discretizes.
struct raw_record {
    std::string id;
    double t = 0;  // seconds
    double x = 0;
    double y = 0;
    double z = 0;
};

struct grid_config {
    double origin_x = 0, origin_y = 0, origin_z = 0;
    double cell_size_x = 5000, cell_size_y = 5000, cell_size_z = 100;
    uint32_t step_seconds = 15;
    uint32_t side = 1u << 20;  // cells clamp into [0, side)
};

struct parse_result {
    std::vector<raw_record> records;
    size_t skipped = 0;
    std::vector<std::string> warnings;  // first few skip reasons
};

// Raw CSV `id,t,x,y,z`; malformed lines are counted and skipped.
inline parse_result parse_csv(std::istream& in) {
    parse_result out;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("raw csv: empty input");
    if (detail::strip_cr(line) != "id,t,x,y,z")
        throw std::invalid_argument("raw csv: expected header id,t,x,y,z");
    std::vector<std::string_view> fields;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = detail::strip_cr(line);
        if (sv.empty()) continue;
        detail::split_csv(sv, fields);
        raw_record r;
        bool ok = fields.size() == 5 && !fields[0].empty() && detail::parse_num(fields[1], r.t) &&
                  detail::parse_num(fields[2], r.x) && detail::parse_num(fields[3], r.y) &&
                  detail::parse_num(fields[4], r.z) && std::isfinite(r.t) && std::isfinite(r.x) &&
                  std::isfinite(r.y) && std::isfinite(r.z);
        if (!ok) {
            ++out.skipped;
            if (out.warnings.size() < 10)
                out.warnings.push_back("skipped malformed line " + std::to_string(line_no));
            continue;
        }
        r.id = std::string(fields[0]);
        out.records.push_back(std::move(r));
    }
    return out;
}

namespace detail {

inline uint32_t discretize(double pos, double origin, double size, uint32_t side) {
    double c = std::floor((pos - origin) / size);
    if (std::isnan(c) || c < 0) return 0;
    if (c >= side) return side - 1;
    return static_cast<uint32_t>(c);
}

}  // namespace detail

// Resample raw records to regular instants. Positions at instant boundaries
// come from linear interpolation between the surrounding records when their
// gap stays under `long_gap_instants`; otherwise the instant is absent (to
// be filled, if desired, by interpolate_gaps). Instants count from the
// earliest record in the input.
inline dataset normalize(const std::vector<raw_record>& records, const grid_config& grid,
                         uint32_t long_gap_instants = 60) {
    dataset ds;
    if (records.empty()) return ds;

    double t0 = records[0].t;
    for (const auto& r : records) t0 = std::min(t0, r.t);
    const double step = grid.step_seconds;
    const double gap_limit = static_cast<double>(long_gap_instants) * step;

    std::map<uint32_t, std::vector<const raw_record*>> by_object;
    std::unordered_map<std::string, uint32_t> dense;
    for (const auto& r : records) {
        auto [it, inserted] = dense.try_emplace(r.id, static_cast<uint32_t>(ds.ids.size()));
        if (inserted) ds.ids.push_back(r.id);
        by_object[it->second].push_back(&r);
    }

    for (auto& [object, recs] : by_object) {
        std::stable_sort(recs.begin(), recs.end(),
                         [](const raw_record* a, const raw_record* b) { return a->t < b->t; });
        // Same-timestamp duplicates: the earlier input record wins.
        recs.erase(std::unique(recs.begin(), recs.end(),
                               [](const raw_record* a, const raw_record* b) { return a->t == b->t; }),
                   recs.end());

        const int64_t i_first = std::llround((recs.front()->t - t0) / step);
        const int64_t i_last = std::llround((recs.back()->t - t0) / step);
        size_t next = 0;
        for (int64_t i = i_first; i <= i_last; ++i) {
            const double tau = t0 + static_cast<double>(i) * step;
            while (next < recs.size() && recs[next]->t < tau) ++next;
            const raw_record* after = next < recs.size() ? recs[next] : nullptr;
            const raw_record* before = next > 0 ? recs[next - 1] : nullptr;
            if (next < recs.size() && recs[next]->t == tau) before = recs[next];

            double px, py, pz;
            if (!before) {
                px = after->x, py = after->y, pz = after->z;
            } else if (!after || before == after) {
                px = before->x, py = before->y, pz = before->z;
            } else {
                if (after->t - before->t >= gap_limit) continue;  // long gap: absent
                const double w = (tau - before->t) / (after->t - before->t);
                px = before->x + w * (after->x - before->x);
                py = before->y + w * (after->y - before->y);
                pz = before->z + w * (after->z - before->z);
            }
            cell_event e;
            e.object = object;
            e.instant = static_cast<uint32_t>(i);
            e.at.x = detail::discretize(px, grid.origin_x, grid.cell_size_x, grid.side);
            e.at.y = detail::discretize(py, grid.origin_y, grid.cell_size_y, grid.side);
            e.at.z = detail::discretize(pz, grid.origin_z, grid.cell_size_z, grid.side);
            ds.events.push_back(e);
        }
    }
    ds.finalize();
    return ds;
}

// Fill absence runs of at least `threshold_instants` with per-axis linear
// interpolation between the bracketing known cells. Leading and trailing
// absences stay untouched; known events never change.
inline dataset interpolate_gaps(const dataset& in, uint32_t threshold_instants = 60) {
    dataset out;
    out.ids = in.ids;
    out.instants = in.instants;
    for (uint32_t o = 0; o < in.ids.size(); ++o) {
        auto [ev, ev_end] = in.events_of(o);
        for (const cell_event* e = ev; e != ev_end; ++e) {
            out.events.push_back(*e);
            if (e + 1 == ev_end) continue;
            const cell_event& nxt = *(e + 1);
            const uint32_t gap = nxt.instant - e->instant - 1;
            if (gap < threshold_instants) continue;
            const double span = nxt.instant - e->instant;
            for (uint32_t t = e->instant + 1; t < nxt.instant; ++t) {
                const double w = (t - e->instant) / span;
                cell_event f;
                f.object = o;
                f.instant = t;
                f.at.x = static_cast<uint32_t>(std::llround(e->at.x + w * (static_cast<double>(nxt.at.x) - e->at.x)));
                f.at.y = static_cast<uint32_t>(std::llround(e->at.y + w * (static_cast<double>(nxt.at.y) - e->at.y)));
                f.at.z = static_cast<uint32_t>(std::llround(e->at.z + w * (static_cast<double>(nxt.at.z) - e->at.z)));
                out.events.push_back(f);
            }
        }
    }
    out.finalize();
    return out;
}

// Deterministic xorshift-based generator; kept local so corpora are
// bit-identical across platforms and library versions.
class synth_rng {
public:
    explicit synth_rng(uint64_t seed) : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

    uint64_t next() {
        uint64_t x = state_;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        return state_ = x;
    }

    // Uniform in [lo, hi] inclusive.
    int64_t uniform(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(next() % static_cast<uint64_t>(hi - lo + 1));
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

struct gen_params {
    uint32_t objects = 100;
    uint32_t instants = 5000;
    uint32_t side = 256;
    uint64_t seed = 1;
    int32_t speed_x = 2, speed_y = 2, speed_z = 1;  // max cells per instant
    uint32_t segment_mean = 120;                    // constant-velocity run length
    double gap_prob = 0.15;                         // gap chance at segment boundaries
    uint32_t gap_min = 2, gap_max = 90;
    double lifespan = 0.8;  // fraction of the timeline an object is around for
};

inline uint32_t segment_len(synth_rng& rng, uint32_t mean) {
    const int64_t lo = std::max<int64_t>(1, mean / 2);
    const int64_t hi = std::max<int64_t>(lo, mean + mean / 2);
    return static_cast<uint32_t>(rng.uniform(lo, hi));
}

inline void step_axis(int64_t& p, int64_t& v, uint32_t side) {
    p += v;
    if (p < 0) {
        p = -p;
        v = -v;
    }
    if (p >= side) {
        p = 2 * static_cast<int64_t>(side) - 2 - p;
        v = -v;
    }
    if (p < 0) p = 0;  // reflection guard for tiny grids against large speeds
}

// Piecewise constant-velocity trajectories with injected observation gaps;
// objects keep moving while unobserved, so reappearances come back displaced.
inline dataset gen_synthetic(const gen_params& par) {
    if (par.objects == 0 || par.instants == 0 || par.side < 2 || par.segment_mean == 0 ||
        par.gap_min == 0 || par.gap_max < par.gap_min || par.gap_prob < 0 || par.gap_prob > 1 ||
        par.speed_x < 0 || par.speed_y < 0 || par.speed_z < 0)
        throw std::invalid_argument("gen_synthetic: invalid parameters");

    dataset ds;
    ds.instants = par.instants;
    synth_rng rng(par.seed);

    for (uint32_t o = 0; o < par.objects; ++o) {
        ds.ids.push_back("obj" + std::to_string(o));
        const uint32_t span = std::max<uint32_t>(1, static_cast<uint32_t>(par.instants * par.lifespan));
        const uint32_t slack = par.instants - span;
        const uint32_t start = slack == 0 ? 0 : static_cast<uint32_t>(rng.uniform(0, slack));
        const uint32_t end = std::min(par.instants - 1, start + span - 1);

        int64_t px = rng.uniform(0, par.side - 1);
        int64_t py = rng.uniform(0, par.side - 1);
        int64_t pz = rng.uniform(0, par.side - 1);
        int64_t vx = rng.uniform(-par.speed_x, par.speed_x);
        int64_t vy = rng.uniform(-par.speed_y, par.speed_y);
        int64_t vz = rng.uniform(-par.speed_z, par.speed_z);
        uint32_t seg_left = segment_len(rng, par.segment_mean);
        uint32_t gap_left = 0;

        for (uint32_t t = start; t <= end; ++t) {
            if (gap_left > 0) {
                --gap_left;
            } else {
                ds.events.push_back(
                    {o, t, cell{static_cast<uint32_t>(px), static_cast<uint32_t>(py),
                                static_cast<uint32_t>(pz)}});
            }
            step_axis(px, vx, par.side);
            step_axis(py, vy, par.side);
            step_axis(pz, vz, par.side);
            if (seg_left-- == 0) {
                vx = rng.uniform(-par.speed_x, par.speed_x);
                vy = rng.uniform(-par.speed_y, par.speed_y);
                vz = rng.uniform(-par.speed_z, par.speed_z);
                seg_left = segment_len(rng, par.segment_mean);
                if (gap_left == 0 && rng.uniform01() < par.gap_prob && t > start)
                    gap_left = static_cast<uint32_t>(rng.uniform(par.gap_min, par.gap_max));
            }
        }
    }
    ds.finalize();
    return ds;
}

}  // namespace tracube
