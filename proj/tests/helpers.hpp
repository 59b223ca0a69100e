#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tracube/events.hpp"
#include "tracube/ingest.hpp"
#include "tracube/types.hpp"

namespace testutil {

using namespace tracube;

// Dataset from (object, instant, x, y, z) tuples; ids named obj<N>.
inline dataset make_dataset(const std::vector<std::array<uint32_t, 5>>& rows,
                            uint32_t object_count) {
    dataset ds;
    for (uint32_t o = 0; o < object_count; ++o) ds.ids.push_back("obj" + std::to_string(o));
    for (const auto& r : rows) ds.events.push_back({r[0], r[1], cell{r[2], r[3], r[4]}});
    ds.finalize();
    return ds;
}

inline box random_box(synth_rng& rng, uint32_t side, int64_t max_extent) {
    int64_t sz = rng.uniform(0, max_extent);
    int64_t x = rng.uniform(0, side - 1);
    int64_t y = rng.uniform(0, side - 1);
    int64_t z = rng.uniform(0, side - 1);
    return box::of(x, y, z, x + sz, y + sz, z + sz);
}

inline box cube_at(synth_rng& rng, uint32_t side, int64_t extent) {
    int64_t x = rng.uniform(0, side - 1);
    int64_t y = rng.uniform(0, side - 1);
    int64_t z = rng.uniform(0, side - 1);
    return box::of(x, y, z, x + extent - 1, y + extent - 1, z + extent - 1);
}

}  // namespace testutil
