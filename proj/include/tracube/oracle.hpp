#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tracube/events.hpp"
#include "tracube/types.hpp"

namespace tracube {

// Uncompressed (object, instant) -> cell table answering the four queries by
// literal scans. Ground truth for every correctness test; deliberately naive.
class oracle_store {
public:
    explicit oracle_store(const dataset& ds) : instants_(ds.instants) {
        table_.resize(ds.ids.size());
        for (const auto& e : ds.events) table_[e.object].emplace(e.instant, e.at);
    }

    uint32_t instants() const { return instants_; }
    uint32_t object_count() const { return static_cast<uint32_t>(table_.size()); }

    std::optional<cell> position_of(uint32_t object, uint32_t t) const {
        if (object >= table_.size()) return std::nullopt;
        auto it = table_[object].find(t);
        if (it == table_[object].end()) return std::nullopt;
        return it->second;
    }

    std::vector<std::optional<cell>> trajectory(uint32_t object, uint32_t t_s, uint32_t t_e) const {
        std::vector<std::optional<cell>> out(t_e - t_s + 1);
        for (uint32_t t = t_s; t <= t_e; ++t) out[t - t_s] = position_of(object, t);
        return out;
    }

    std::vector<std::pair<uint32_t, cell>> time_slice(const box& r, uint32_t t) const {
        std::vector<std::pair<uint32_t, cell>> out;
        for (uint32_t o = 0; o < table_.size(); ++o) {
            auto pos = position_of(o, t);
            if (pos && r.contains(*pos)) out.emplace_back(o, *pos);
        }
        return out;
    }

    std::vector<uint32_t> time_interval(const box& r, uint32_t t_s, uint32_t t_e) const {
        std::vector<uint32_t> out;
        for (uint32_t o = 0; o < table_.size(); ++o) {
            for (uint32_t t = t_s; t <= t_e; ++t) {
                auto pos = position_of(o, t);
                if (pos && r.contains(*pos)) {
                    out.push_back(o);
                    break;
                }
            }
        }
        return out;
    }

private:
    std::vector<std::unordered_map<uint32_t, cell>> table_;
    uint32_t instants_ = 0;
};

}  // namespace tracube
