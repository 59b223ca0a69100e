#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tracube {

// Grid cell coordinate. All coordinates are 0-based cell indices inside
// a cubic grid of side `side` (padded to a power of k by the builder).
struct cell {
    uint32_t x = 0;
    uint32_t y = 0;
    uint32_t z = 0;

    friend auto operator<=>(const cell&, const cell&) = default;
};

// Signed per-axis cell displacement.
struct delta {
    int32_t x = 0;
    int32_t y = 0;
    int32_t z = 0;

    friend auto operator<=>(const delta&, const delta&) = default;

    delta& operator+=(const delta& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    friend delta operator+(delta a, const delta& b) { return a += b; }
    friend delta operator-(delta a, const delta& b) {
        return delta{a.x - b.x, a.y - b.y, a.z - b.z};
    }
};

inline cell operator+(const cell& c, const delta& d) {
    return cell{static_cast<uint32_t>(static_cast<int64_t>(c.x) + d.x),
                static_cast<uint32_t>(static_cast<int64_t>(c.y) + d.y),
                static_cast<uint32_t>(static_cast<int64_t>(c.z) + d.z)};
}

inline cell operator-(const cell& c, const delta& d) {
    return cell{static_cast<uint32_t>(static_cast<int64_t>(c.x) - d.x),
                static_cast<uint32_t>(static_cast<int64_t>(c.y) - d.y),
                static_cast<uint32_t>(static_cast<int64_t>(c.z) - d.z)};
}

inline delta operator-(const cell& a, const cell& b) {
    return delta{static_cast<int32_t>(static_cast<int64_t>(a.x) - b.x),
                 static_cast<int32_t>(static_cast<int64_t>(a.y) - b.y),
                 static_cast<int32_t>(static_cast<int64_t>(a.z) - b.z)};
}

// Inclusive axis-aligned box of cells. Kept in signed 64-bit so expansion
// arithmetic cannot overflow before clamping.
struct box {
    int64_t x1 = 0, y1 = 0, z1 = 0;
    int64_t x2 = -1, y2 = -1, z2 = -1;

    friend auto operator<=>(const box&, const box&) = default;

    static box of(int64_t x1, int64_t y1, int64_t z1, int64_t x2, int64_t y2, int64_t z2) {
        return box{x1, y1, z1, x2, y2, z2};
    }

    bool empty() const { return x1 > x2 || y1 > y2 || z1 > z2; }

    bool contains(const cell& c) const {
        return static_cast<int64_t>(c.x) >= x1 && static_cast<int64_t>(c.x) <= x2 &&
               static_cast<int64_t>(c.y) >= y1 && static_cast<int64_t>(c.y) <= y2 &&
               static_cast<int64_t>(c.z) >= z1 && static_cast<int64_t>(c.z) <= z2;
    }

    bool contains(const box& o) const {
        return !o.empty() && o.x1 >= x1 && o.x2 <= x2 && o.y1 >= y1 && o.y2 <= y2 &&
               o.z1 >= z1 && o.z2 <= z2;
    }

    bool intersects(const box& o) const {
        if (empty() || o.empty()) return false;
        return x1 <= o.x2 && o.x1 <= x2 && y1 <= o.y2 && o.y1 <= y2 && z1 <= o.z2 && o.z1 <= z2;
    }

    box clamped(uint32_t side) const {
        box r = *this;
        r.x1 = std::max<int64_t>(r.x1, 0);
        r.y1 = std::max<int64_t>(r.y1, 0);
        r.z1 = std::max<int64_t>(r.z1, 0);
        r.x2 = std::min<int64_t>(r.x2, static_cast<int64_t>(side) - 1);
        r.y2 = std::min<int64_t>(r.y2, static_cast<int64_t>(side) - 1);
        r.z2 = std::min<int64_t>(r.z2, static_cast<int64_t>(side) - 1);
        return r;
    }
};

// Store files that fail validation raise this instead of crashing.
class corrupt_error : public std::runtime_error {
public:
    explicit corrupt_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tracube
