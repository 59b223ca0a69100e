#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tracube/types.hpp"

namespace tracube {

// One known position of one object at one instant; absence is simply the
// lack of an event.
struct cell_event {
    uint32_t object = 0;  // dense id
    uint32_t instant = 0;
    cell at;

    friend auto operator<=>(const cell_event&, const cell_event&) = default;
};

// Normalized event stream plus the dense-id dictionary (dense ids are
// assigned in order of first appearance). Events are sorted by
// (object, instant) with no duplicates.
struct dataset {
    std::vector<std::string> ids;
    std::vector<cell_event> events;
    uint32_t instants = 0;

    uint32_t max_coordinate() const {
        uint32_t m = 0;
        for (const auto& e : events) m = std::max({m, e.at.x, e.at.y, e.at.z});
        return m;
    }

    void finalize() {
        std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
            return a.object != b.object ? a.object < b.object : a.instant < b.instant;
        });
        for (size_t i = 1; i < events.size(); ++i) {
            if (events[i].object == events[i - 1].object &&
                events[i].instant == events[i - 1].instant)
                throw std::invalid_argument("dataset: duplicate (object, instant) event");
        }
        uint32_t t = 0;
        for (const auto& e : events) t = std::max(t, e.instant + 1);
        instants = std::max(instants, t);
    }

    // [first, last) range of one object's events.
    std::pair<const cell_event*, const cell_event*> events_of(uint32_t object) const {
        auto lo = std::lower_bound(events.begin(), events.end(), object,
                                   [](const cell_event& e, uint32_t o) { return e.object < o; });
        auto hi = std::upper_bound(events.begin(), events.end(), object,
                                   [](uint32_t o, const cell_event& e) { return o < e.object; });
        return {events.data() + (lo - events.begin()), events.data() + (hi - events.begin())};
    }
};

namespace detail {

inline bool split_csv(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return true;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

template <typename T>
bool parse_num(std::string_view s, T& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

inline std::string_view strip_cr(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

}  // namespace detail

// Interchange format: CSV `id,instant,cx,cy,cz`, absence omitted.
inline dataset read_events_csv(std::istream& in) {
    dataset ds;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("events csv: empty input");
    if (detail::strip_cr(line) != "id,instant,cx,cy,cz")
        throw std::invalid_argument("events csv: expected header id,instant,cx,cy,cz");
    std::unordered_map<std::string, uint32_t> dense;
    std::vector<std::string_view> fields;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = detail::strip_cr(line);
        if (sv.empty()) continue;
        detail::split_csv(sv, fields);
        cell_event e;
        if (fields.size() != 5 || !detail::parse_num(fields[1], e.instant) ||
            !detail::parse_num(fields[2], e.at.x) || !detail::parse_num(fields[3], e.at.y) ||
            !detail::parse_num(fields[4], e.at.z))
            throw std::invalid_argument("events csv: malformed line " + std::to_string(line_no));
        std::string id(fields[0]);
        auto [it, inserted] = dense.try_emplace(id, static_cast<uint32_t>(ds.ids.size()));
        if (inserted) ds.ids.push_back(id);
        e.object = it->second;
        ds.events.push_back(e);
    }
    ds.finalize();
    return ds;
}

inline void write_events_csv(std::ostream& out, const dataset& ds) {
    out << "id,instant,cx,cy,cz\n";
    for (const auto& e : ds.events) {
        out << ds.ids[e.object] << ',' << e.instant << ',' << e.at.x << ',' << e.at.y << ','
            << e.at.z << '\n';
    }
}

inline dataset read_events_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_events_csv(in);
}

inline void write_events_file(const std::string& path, const dataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_events_csv(out, ds);
    if (!out.flush()) throw std::runtime_error("failed writing " + path);
}

}  // namespace tracube
