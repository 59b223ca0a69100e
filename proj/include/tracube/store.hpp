#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracube/dac.hpp"
#include "tracube/events.hpp"
#include "tracube/grammar.hpp"
#include "tracube/movement.hpp"
#include "tracube/snapshot.hpp"
#include "tracube/serialize.hpp"
#include "tracube/types.hpp"

namespace tracube {

// Physical meaning of the grid; carried through for reporting only.
struct grid_info {
    double origin_x = 0, origin_y = 0, origin_z = 0;
    double cell_size_x = 5000, cell_size_y = 5000, cell_size_z = 100;  // metres
    uint32_t step_seconds = 15;
};

struct build_config {
    uint32_t period = 120;  // instants between snapshots
    uint32_t k = 2;
    uint32_t side = 0;  // 0: derive from data, rounded up to a power of k
    uint32_t chunk_width = 8;
    uint32_t shortcut_step = 16;
    grid_info grid;
};

struct store_stats {
    size_t total_bytes = 0;
    size_t header_bytes = 0;
    size_t snapshot_bytes = 0;
    size_t log_bytes = 0;
    size_t rule_bytes = 0;
    size_t d_bytes = 0;
    size_t p_bytes = 0;
    size_t baseline_bytes = 0;
    double ratio = 0;  // compressed / baseline, smaller is better
    size_t objects = 0;
    size_t instants = 0;
    size_t events = 0;
    size_t snapshots = 0;
    size_t rules = 0;
    size_t appear_codewords = 0;
    size_t reappear_codewords = 0;
    size_t vanish_codewords = 0;

    size_t codewords() const { return appear_codewords + reappear_codewords + vanish_codewords; }
};

namespace detail {

// P-array entries are (x,y,z) triples in 21-bit fields; absolute positions
// directly, displacements zig-zag encoded. Caps the grid at 2^20 per axis.
constexpr uint32_t triple_field_bits = 21;
constexpr uint64_t triple_field_mask = (1ull << triple_field_bits) - 1;

inline uint64_t pack_abs(const cell& c) {
    return static_cast<uint64_t>(c.x) << 42 | static_cast<uint64_t>(c.y) << 21 | c.z;
}

inline cell unpack_abs(uint64_t v) {
    return cell{static_cast<uint32_t>(v >> 42 & triple_field_mask),
                static_cast<uint32_t>(v >> 21 & triple_field_mask),
                static_cast<uint32_t>(v & triple_field_mask)};
}

inline uint64_t pack_rel(const delta& d) {
    return static_cast<uint64_t>(movement::zigzag_encode(d.x)) << 42 |
           static_cast<uint64_t>(movement::zigzag_encode(d.y)) << 21 |
           movement::zigzag_encode(d.z);
}

inline delta unpack_rel(uint64_t v) {
    return delta{movement::zigzag_decode(static_cast<uint32_t>(v >> 42 & triple_field_mask)),
                 movement::zigzag_decode(static_cast<uint32_t>(v >> 21 & triple_field_mask)),
                 movement::zigzag_decode(static_cast<uint32_t>(v & triple_field_mask))};
}

}  // namespace detail

enum class step_kind : uint8_t {
    move,      // packed terminal movement, one instant
    rule,      // non-terminal, meta.span instants, object present throughout
    appear,    // AA: unknown from period start, absolute position at t_end
    reappear,  // RD: gap then reappearance displaced by disp at t_end
    vanish     // D: unknown from t_begin+1 to the period end
};

// One log symbol with its coverage resolved against the D/P arrays. A step
// covers instants (t_begin, t_end].
struct log_step {
    step_kind kind = step_kind::move;
    uint64_t sym = 0;
    uint32_t t_begin = 0;
    uint32_t t_end = 0;
    uint32_t d_entry = 0;  // codewords: the raw D-array value
    delta disp;            // move/rule/reappear
    cell abs;              // appear: position at t_end; vanish: last known position
};

// The complete compressed trajectory container: header, snapshots every
// `period` instants, per-object per-period compressed logs, the shared rule
// table, and per-object DAC-compressed D (durations/instants) and P
// (positions/displacements) arrays.
class store {
public:
    static constexpr uint16_t format_version = 1;

    struct period_log {
        uint32_t dp_offset = 0;  // D/P entries consumed before this period
        std::vector<uint64_t> symbols;
    };

    struct object_log {
        std::vector<period_log> periods;
        dac_sequence d;
        dac_sequence p;
    };

    store() = default;

    static store build(const dataset& ds, const build_config& cfg) {
        if (cfg.period < 2) throw std::invalid_argument("store: period must be >= 2");
        if (cfg.k < 2) throw std::invalid_argument("store: k must be >= 2");

        store st;
        st.period_ = cfg.period;
        st.k_ = cfg.k;
        st.grid_ = cfg.grid;
        st.chunk_width_ = cfg.chunk_width;
        st.shortcut_step_ = cfg.shortcut_step;
        st.instants_ = ds.instants;
        st.ids_ = ds.ids;
        st.event_count_ = ds.events.size();

        uint32_t need = ds.events.empty() ? 1 : ds.max_coordinate() + 1;
        uint32_t side = cfg.side;
        if (side == 0) {
            side = st.k_;
            while (side < need) side *= st.k_;
        }
        if (side > (1u << 20)) throw std::invalid_argument("store: grid side exceeds 2^20");
        if (need > side) throw std::out_of_range("store: event coordinates outside grid");
        {
            uint64_t s = st.k_;
            while (s < side) s *= st.k_;
            if (s != side) throw std::invalid_argument("store: side must be a power of k");
        }
        st.side_ = side;

        for (size_t i = 1; i < ds.events.size(); ++i) {
            const auto &a = ds.events[i - 1], &b = ds.events[i];
            if (b.object < a.object || (b.object == a.object && b.instant <= a.instant))
                throw std::invalid_argument("store: events must be sorted and unique");
        }

        const uint32_t n_objects = static_cast<uint32_t>(ds.ids.size());
        const uint32_t n_periods = st.period_count();
        std::vector<std::map<uint32_t, cell>> snap_positions(st.snapshot_count());

        std::vector<std::vector<uint64_t>> raw_streams;
        raw_streams.reserve(static_cast<size_t>(n_objects) * n_periods);
        st.logs_.resize(n_objects);
        std::vector<std::vector<uint64_t>> d_values(n_objects), p_values(n_objects);
        uint32_t speed_x = 0, speed_y = 0, speed_z = 0;

        for (uint32_t o = 0; o < n_objects; ++o) {
            auto [ev, ev_end] = ds.events_of(o);
            object_log& lg = st.logs_[o];
            lg.periods.resize(n_periods);

            for (const cell_event* e = ev; e != ev_end; ++e) {
                if (e->instant % st.period_ == 0 && e->instant / st.period_ < snap_positions.size())
                    snap_positions[e->instant / st.period_][o] = e->at;
            }

            const cell_event* cursor = ev;
            auto position_at = [&](uint32_t t) -> std::optional<cell> {
                while (cursor != ev_end && cursor->instant < t) ++cursor;
                if (cursor != ev_end && cursor->instant == t) return cursor->at;
                return std::nullopt;
            };

            for (uint32_t p = 0; p < n_periods; ++p) {
                const uint32_t s = p * st.period_;
                const uint32_t e = st.period_end(p);
                lg.periods[p].dp_offset = static_cast<uint32_t>(d_values[o].size());
                std::vector<uint64_t> stream;

                std::optional<std::pair<uint32_t, cell>> last;  // latest known (instant, cell)
                if (auto c = position_at(s)) last = {s, *c};
                for (uint32_t t = s + 1; t <= e; ++t) {
                    auto here = position_at(t);
                    if (!here) continue;
                    if (!last) {
                        // Unknown from the period start: absolute appearance.
                        stream.push_back(movement::cw_abs_appear);
                        d_values[o].push_back(t - s);
                        p_values[o].push_back(detail::pack_abs(*here));
                    } else {
                        delta d = *here - last->second;
                        uint32_t dur = t - last->first;
                        if (dur == 1 && movement::packable(d)) {
                            stream.push_back(movement::pack_unchecked(d));
                            speed_x = std::max(speed_x, static_cast<uint32_t>(std::abs(d.x)));
                            speed_y = std::max(speed_y, static_cast<uint32_t>(std::abs(d.y)));
                            speed_z = std::max(speed_z, static_cast<uint32_t>(std::abs(d.z)));
                        } else {
                            // Gap (or unpackable jump): relative disappearance
                            // covering `dur` instants.
                            stream.push_back(movement::cw_rel_disappear);
                            d_values[o].push_back(dur);
                            p_values[o].push_back(detail::pack_rel(d));
                            speed_x = std::max(speed_x, ceil_div_abs(d.x, dur));
                            speed_y = std::max(speed_y, ceil_div_abs(d.y, dur));
                            speed_z = std::max(speed_z, ceil_div_abs(d.z, dur));
                        }
                    }
                    last = {t, *here};
                }
                if (last && last->first < e) {
                    // Known until last->first, then nothing to the period end.
                    stream.push_back(movement::cw_disappear);
                    d_values[o].push_back(last->first + 1 - s);
                    p_values[o].push_back(detail::pack_abs(last->second));
                }
                raw_streams.push_back(std::move(stream));
            }
        }

        st.max_speed_ = cell{std::max(speed_x, 1u), std::max(speed_y, 1u), std::max(speed_z, 1u)};

        repair_result rp = repair_compress(raw_streams);
        st.rules_ = std::move(rp.table);
        size_t stream_idx = 0;
        for (uint32_t o = 0; o < n_objects; ++o) {
            for (uint32_t p = 0; p < n_periods; ++p)
                st.logs_[o].periods[p].symbols = std::move(rp.streams[stream_idx++]);
            st.logs_[o].d = dac_sequence(d_values[o], st.chunk_width_);
            st.logs_[o].p = dac_sequence(p_values[o], st.chunk_width_);
        }

        st.snapshots_.reserve(snap_positions.size());
        for (size_t i = 0; i < snap_positions.size(); ++i)
            st.snapshots_.emplace_back(snap_positions[i], static_cast<uint32_t>(i * st.period_),
                                       st.side_, st.k_);
        return st;
    }

    // --- header accessors ---
    uint32_t side() const { return side_; }
    uint32_t k() const { return k_; }
    uint32_t period() const { return period_; }
    uint32_t instants() const { return instants_; }
    uint32_t object_count() const { return static_cast<uint32_t>(ids_.size()); }
    const std::vector<std::string>& ids() const { return ids_; }
    const grid_info& grid() const { return grid_; }
    cell max_speed() const { return max_speed_; }

    std::optional<uint32_t> dense_id(const std::string& external) const {
        for (uint32_t i = 0; i < ids_.size(); ++i)
            if (ids_[i] == external) return i;
        return std::nullopt;
    }

    // --- snapshots and periods ---
    size_t snapshot_count() const {
        return instants_ == 0 ? 0 : static_cast<size_t>((instants_ - 1) / period_) + 1;
    }

    const snapshot& snapshot_at(size_t idx) const { return snapshots_[idx]; }

    uint32_t period_count() const {
        if (instants_ < 2) return 0;
        return (instants_ - 2) / period_ + 1;  // periods start at s*d with s*d < T-1
    }

    uint32_t period_start(uint32_t p) const { return p * period_; }
    uint32_t period_end(uint32_t p) const {
        return std::min((p + 1) * period_, instants_ - 1);
    }

    const object_log& log_of(uint32_t object) const { return logs_[object]; }
    const rule_table& rules() const { return rules_; }

    // Log symbols of one (object, period) with coverage and D/P data resolved.
    std::vector<log_step> steps(uint32_t object, uint32_t period) const {
        const period_log& pl = logs_[object].periods[period];
        const object_log& lg = logs_[object];
        const uint32_t s = period_start(period);
        const uint32_t e = period_end(period);
        std::vector<log_step> out;
        out.reserve(pl.symbols.size());
        uint32_t t = s;
        size_t dp = pl.dp_offset;
        for (uint64_t sym : pl.symbols) {
            log_step st;
            st.sym = sym;
            st.t_begin = t;
            if (rule_table::is_nonterminal(sym)) {
                const sym_meta& m = rules_.rule_of(sym).meta;
                st.kind = step_kind::rule;
                st.t_end = t + m.span;
                st.disp = m.disp;
            } else {
                switch (static_cast<uint32_t>(sym)) {
                    case movement::cw_abs_appear:
                        st.kind = step_kind::appear;
                        st.d_entry = static_cast<uint32_t>(lg.d[dp]);
                        st.t_end = s + st.d_entry;
                        st.abs = detail::unpack_abs(lg.p[dp]);
                        ++dp;
                        break;
                    case movement::cw_rel_disappear:
                        st.kind = step_kind::reappear;
                        st.d_entry = static_cast<uint32_t>(lg.d[dp]);
                        st.t_end = t + st.d_entry;
                        st.disp = detail::unpack_rel(lg.p[dp]);
                        ++dp;
                        break;
                    case movement::cw_disappear:
                        st.kind = step_kind::vanish;
                        st.d_entry = static_cast<uint32_t>(lg.d[dp]);
                        st.t_end = e;
                        st.abs = detail::unpack_abs(lg.p[dp]);
                        ++dp;
                        break;
                    default:
                        st.kind = step_kind::move;
                        st.t_end = t + 1;
                        st.disp = movement::unpack(static_cast<uint32_t>(sym));
                        break;
                }
            }
            t = st.t_end;
            out.push_back(st);
        }
        return out;
    }

    // Positions at every instant of (period_start, period_end], nullopt for
    // absence; the full expansion of the period's log.
    std::vector<std::optional<cell>> decode_period(uint32_t object, uint32_t period) const {
        const uint32_t s = period_start(period);
        const uint32_t e = period_end(period);
        std::vector<std::optional<cell>> out(e - s);
        std::optional<cell> cur = snapshots_[period].find_object(object);
        for (const log_step& st : steps(object, period)) {
            switch (st.kind) {
                case step_kind::move:
                    cur = cur.value() + st.disp;
                    out[st.t_end - s - 1] = cur;
                    break;
                case step_kind::rule: {
                    uint32_t t = st.t_begin;
                    for (uint32_t code : rules_.expand(st.sym)) {
                        cur = cur.value() + movement::unpack(code);
                        out[++t - s - 1] = cur;
                    }
                    break;
                }
                case step_kind::appear:
                    cur = st.abs;
                    out[st.t_end - s - 1] = cur;
                    break;
                case step_kind::reappear:
                    cur = cur.value() + st.disp;
                    out[st.t_end - s - 1] = cur;
                    break;
                case step_kind::vanish:
                    cur.reset();
                    break;
            }
        }
        return out;
    }

    // --- persistence ---
    std::vector<uint8_t> serialize() const {
        byte_writer w;
        w.bytes("3DGR", 4);
        w.u16(format_version);
        save_header(w);
        w.u32(static_cast<uint32_t>(snapshots_.size()));
        for (const auto& s : snapshots_) s.save(w);
        for (const auto& lg : logs_) {
            w.u32(static_cast<uint32_t>(lg.periods.size()));
            for (const auto& pl : lg.periods) {
                w.u32(pl.dp_offset);
                w.u32(static_cast<uint32_t>(pl.symbols.size()));
                for (uint64_t sym : pl.symbols) w.varint(sym);
            }
            lg.d.save(w);
            lg.p.save(w);
        }
        rules_.save(w);
        uint32_t crc = crc32(w.data().data(), w.size());
        w.u32(crc);
        return w.take();
    }

    static store deserialize(const std::vector<uint8_t>& bytes) {
        if (bytes.size() < 10) throw corrupt_error("store: file too short");
        if (std::string(bytes.begin(), bytes.begin() + 4) != "3DGR")
            throw corrupt_error("store: bad magic");
        uint32_t stored_crc = 0;
        for (int i = 0; i < 4; ++i)
            stored_crc |= static_cast<uint32_t>(bytes[bytes.size() - 4 + i]) << (8 * i);
        if (crc32(bytes.data(), bytes.size() - 4) != stored_crc)
            throw corrupt_error("store: checksum mismatch");

        byte_reader r(bytes.data(), bytes.size() - 4);
        char magic[4];
        r.bytes(magic, 4);
        if (r.u16() != format_version) throw corrupt_error("store: unsupported version");

        store st;
        try {
            st.load_header(r);
            uint32_t n_snaps = r.u32();
            if (n_snaps != st.snapshot_count()) throw corrupt_error("store: snapshot count mismatch");
            if (n_snaps > r.remaining() / 16) throw corrupt_error("store: snapshot count exceeds data");
            if (st.period_count() > r.remaining() / 8)
                throw corrupt_error("store: period count exceeds data");
            st.snapshots_.reserve(n_snaps);
            for (uint32_t i = 0; i < n_snaps; ++i) {
                st.snapshots_.push_back(snapshot::load(r));
                if (st.snapshots_.back().instant() != i * st.period_ ||
                    st.snapshots_.back().tree().side() != st.side_)
                    throw corrupt_error("store: snapshot header mismatch");
            }
            st.logs_.resize(st.ids_.size());
            for (auto& lg : st.logs_) {
                uint32_t n_periods = r.u32();
                if (n_periods != st.period_count()) throw corrupt_error("store: period count mismatch");
                lg.periods.resize(n_periods);
                for (auto& pl : lg.periods) {
                    pl.dp_offset = r.u32();
                    uint32_t n_syms = r.u32();
                    if (n_syms > r.remaining()) throw corrupt_error("store: symbol count exceeds data");
                    pl.symbols.resize(n_syms);
                    for (auto& sym : pl.symbols) sym = r.varint();
                }
                lg.d = dac_sequence::load(r);
                lg.p = dac_sequence::load(r);
            }
            st.rules_ = rule_table::load(r);
            st.validate();
        } catch (const std::out_of_range& ex) {
            throw corrupt_error(std::string("store: ") + ex.what());
        } catch (const std::invalid_argument& ex) {
            throw corrupt_error(std::string("store: ") + ex.what());
        }
        return st;
    }

    void save_file(const std::string& path) const {
        auto bytes = serialize();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out.flush()) throw std::runtime_error("failed writing " + path);
    }

    static store load_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
        return deserialize(bytes);
    }

    store_stats stats() const {
        store_stats out;
        byte_writer w;
        save_header(w);
        out.header_bytes = w.size();
        {
            byte_writer sw;
            for (const auto& s : snapshots_) s.save(sw);
            out.snapshot_bytes = sw.size();
        }
        {
            byte_writer lw, dw, pw;
            for (const auto& lg : logs_) {
                for (const auto& pl : lg.periods) {
                    lw.u32(pl.dp_offset);
                    lw.u32(static_cast<uint32_t>(pl.symbols.size()));
                    for (uint64_t sym : pl.symbols) lw.varint(sym);
                }
                lg.d.save(dw);
                lg.p.save(pw);
            }
            out.log_bytes = lw.size();
            out.d_bytes = dw.size();
            out.p_bytes = pw.size();
        }
        {
            byte_writer rw;
            rules_.save(rw);
            out.rule_bytes = rw.size();
        }
        out.total_bytes = serialize().size();
        out.objects = ids_.size();
        out.instants = instants_;
        out.events = event_count_;
        out.snapshots = snapshots_.size();
        out.rules = rules_.size();
        for (const auto& lg : logs_) {
            for (const auto& pl : lg.periods) {
                for (uint64_t sym : pl.symbols) {
                    if (rule_table::is_nonterminal(sym)) continue;
                    switch (static_cast<uint32_t>(sym)) {
                        case movement::cw_abs_appear: ++out.appear_codewords; break;
                        case movement::cw_rel_disappear: ++out.reappear_codewords; break;
                        case movement::cw_disappear: ++out.vanish_codewords; break;
                        default: break;
                    }
                }
            }
        }
        // Baseline: one 32-bit record per present (object, instant) plus an
        // 8-byte per-object header.
        out.baseline_bytes = 4 * event_count_ + 8 * ids_.size();
        out.ratio = out.baseline_bytes == 0
                        ? 0.0
                        : static_cast<double>(out.total_bytes) / static_cast<double>(out.baseline_bytes);
        return out;
    }

private:
    static uint32_t ceil_div_abs(int32_t v, uint32_t dur) {
        uint32_t a = static_cast<uint32_t>(v < 0 ? -static_cast<int64_t>(v) : v);
        return (a + dur - 1) / dur;
    }

    void save_header(byte_writer& w) const {
        w.u32(side_);
        w.u32(k_);
        w.u32(period_);
        w.u32(grid_.step_seconds);
        w.u32(instants_);
        w.u32(static_cast<uint32_t>(ids_.size()));
        w.u64(event_count_);
        w.u32(max_speed_.x);
        w.u32(max_speed_.y);
        w.u32(max_speed_.z);
        w.f64(grid_.origin_x);
        w.f64(grid_.origin_y);
        w.f64(grid_.origin_z);
        w.f64(grid_.cell_size_x);
        w.f64(grid_.cell_size_y);
        w.f64(grid_.cell_size_z);
        w.u32(chunk_width_);
        w.u32(shortcut_step_);
        for (const auto& id : ids_) w.str(id);
    }

    void load_header(byte_reader& r) {
        side_ = r.u32();
        k_ = r.u32();
        period_ = r.u32();
        grid_.step_seconds = r.u32();
        instants_ = r.u32();
        uint32_t n_objects = r.u32();
        event_count_ = r.u64();
        max_speed_.x = r.u32();
        max_speed_.y = r.u32();
        max_speed_.z = r.u32();
        grid_.origin_x = r.f64();
        grid_.origin_y = r.f64();
        grid_.origin_z = r.f64();
        grid_.cell_size_x = r.f64();
        grid_.cell_size_y = r.f64();
        grid_.cell_size_z = r.f64();
        chunk_width_ = r.u32();
        shortcut_step_ = r.u32();
        if (period_ < 2 || k_ < 2 || side_ == 0 || side_ > (1u << 20))
            throw corrupt_error("store: invalid header");
        if (n_objects > r.remaining() / 2) throw corrupt_error("store: object count exceeds data");
        ids_.reserve(n_objects);
        for (uint32_t i = 0; i < n_objects; ++i) ids_.push_back(r.str());
    }

    // Structural consistency of every log against its period bounds and the
    // D/P arrays; run once per load.
    void validate() const {
        for (uint32_t o = 0; o < ids_.size(); ++o) {
            const object_log& lg = logs_[o];
            size_t dp = 0;
            for (uint32_t p = 0; p < lg.periods.size(); ++p) {
                if (lg.periods[p].dp_offset != dp)
                    throw corrupt_error("store: D/P offsets not contiguous");
                const uint32_t s = period_start(p);
                const uint32_t e = period_end(p);
                uint32_t prev_end = s;
                bool closed = false;
                bool known = snapshots_[p].contains(o);
                for (const log_step& st : steps(o, p)) {
                    if (closed) throw corrupt_error("store: symbols after disappearance");
                    if (st.t_end <= st.t_begin) throw corrupt_error("store: empty step coverage");
                    if (st.t_begin != prev_end || st.t_end > e)
                        throw corrupt_error("store: log coverage out of bounds");
                    switch (st.kind) {
                        case step_kind::appear:
                            if (st.t_begin != s || known)
                                throw corrupt_error("store: misplaced appearance");
                            if (st.abs.x >= side_ || st.abs.y >= side_ || st.abs.z >= side_)
                                throw corrupt_error("store: appearance outside grid");
                            known = true;
                            break;
                        case step_kind::vanish:
                            if (!known || st.d_entry != st.t_begin + 1 - s)
                                throw corrupt_error("store: inconsistent disappearance");
                            closed = true;
                            break;
                        case step_kind::move:
                        case step_kind::rule:
                        case step_kind::reappear:
                            if (!known) throw corrupt_error("store: movement without position");
                            break;
                    }
                    if (st.kind == step_kind::appear || st.kind == step_kind::reappear ||
                        st.kind == step_kind::vanish)
                        ++dp;
                    prev_end = st.t_end;
                }
                if (!lg.periods[p].symbols.empty() && prev_end != e)
                    throw corrupt_error("store: log does not cover its period");
            }
            if (dp != lg.d.size() || dp != lg.p.size())
                throw corrupt_error("store: D/P array sizes do not match codewords");
        }
    }

    uint32_t side_ = 2;
    uint32_t k_ = 2;
    uint32_t period_ = 120;
    uint32_t instants_ = 0;
    uint32_t chunk_width_ = 8;
    uint32_t shortcut_step_ = 16;
    uint64_t event_count_ = 0;
    cell max_speed_{1, 1, 1};
    grid_info grid_;
    std::vector<std::string> ids_;
    std::vector<snapshot> snapshots_;
    std::vector<object_log> logs_;
    rule_table rules_;
};

}  // namespace tracube
