#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tracube/bitvector.hpp"
#include "tracube/serialize.hpp"

namespace tracube {

// Direct-access codes over non-negative integers: each value is split into
// fixed-width chunks, one per level, with a continuation bitvector per level
// whose rank gives random access without decoding preceding values.
// chunk_width is fixed at build time; level count is
// ceil(bit_length(max_value) / chunk_width).
class dac_sequence {
public:
    dac_sequence() = default;

    explicit dac_sequence(const std::vector<uint64_t>& values, uint32_t chunk_width = 8)
        : chunk_width_(chunk_width), size_(values.size()) {
        if (chunk_width_ == 0 || chunk_width_ > 58)
            throw std::invalid_argument("dac_sequence: chunk_width out of range");
        if (values.empty()) return;

        uint64_t max_v = 0;
        for (uint64_t v : values) max_v = std::max(max_v, v);
        uint32_t bits = max_v == 0 ? 1 : 64 - std::countl_zero(max_v);
        uint32_t n_levels = (bits + chunk_width_ - 1) / chunk_width_;

        std::vector<std::vector<uint64_t>> chunks(n_levels);
        std::vector<bit_builder> cont(n_levels);
        for (uint64_t v : values) {
            for (uint32_t l = 0; l < n_levels; ++l) {
                chunks[l].push_back(v & ((1ull << chunk_width_) - 1));
                v >>= chunk_width_;
                bool more = v != 0;
                cont[l].push_back(more);
                if (!more) break;
            }
        }
        levels_.reserve(n_levels);
        for (uint32_t l = 0; l < n_levels; ++l)
            levels_.push_back({pack(chunks[l]), chunks[l].size(), bit_vector(std::move(cont[l]))});
    }

    size_t size() const { return size_; }
    uint32_t chunk_width() const { return chunk_width_; }
    size_t num_levels() const { return levels_.size(); }

    uint64_t access(size_t i) const {
        if (i >= size_) throw std::out_of_range("dac_sequence::access: index out of range");
        uint64_t v = 0;
        uint32_t shift = 0;
        size_t idx = i;
        for (const auto& lv : levels_) {
            v |= chunk_at(lv, idx) << shift;
            if (!lv.cont[idx]) break;
            idx = lv.cont.rank1(idx);  // position among continuing values
            shift += chunk_width_;
        }
        return v;
    }

    uint64_t operator[](size_t i) const { return access(i); }

    void save(byte_writer& w) const {
        w.u32(chunk_width_);
        w.u64(size_);
        w.u32(static_cast<uint32_t>(levels_.size()));
        for (const auto& lv : levels_) {
            w.u64(lv.count);
            for (uint64_t word : lv.chunks) w.u64(word);
            lv.cont.save(w);
        }
    }

    static dac_sequence load(byte_reader& r) {
        dac_sequence s;
        s.chunk_width_ = r.u32();
        if (s.chunk_width_ == 0 || s.chunk_width_ > 58) throw corrupt_error("dac chunk width invalid");
        s.size_ = r.u64();
        uint32_t n_levels = r.u32();
        if (n_levels > (63 + s.chunk_width_) / s.chunk_width_)
            throw corrupt_error("dac level count exceeds the value width");
        for (uint32_t l = 0; l < n_levels; ++l) {
            level lv;
            lv.count = r.u64();
            size_t n_words = (lv.count * s.chunk_width_ + 63) / 64;
            if (n_words > r.remaining() / 8) throw corrupt_error("dac level exceeds data");
            lv.chunks.resize(n_words);
            for (auto& word : lv.chunks) word = r.u64();
            lv.cont = bit_vector::load(r);
            if (lv.cont.size() != lv.count) throw corrupt_error("dac continuation size mismatch");
            s.levels_.push_back(std::move(lv));
        }
        if (n_levels == 0 && s.size_ != 0) throw corrupt_error("dac missing levels");
        if (n_levels > 0 && s.levels_[0].count != s.size_) throw corrupt_error("dac level size mismatch");
        return s;
    }

private:
    struct level {
        std::vector<uint64_t> chunks;  // packed chunk_width-bit entries
        size_t count = 0;
        bit_vector cont;
    };

    std::vector<uint64_t> pack(const std::vector<uint64_t>& raw) const {
        std::vector<uint64_t> words((raw.size() * chunk_width_ + 63) / 64, 0);
        for (size_t i = 0; i < raw.size(); ++i) {
            size_t bit = i * chunk_width_;
            words[bit / 64] |= raw[i] << (bit % 64);
            if (bit % 64 + chunk_width_ > 64) words[bit / 64 + 1] |= raw[i] >> (64 - bit % 64);
        }
        return words;
    }

    uint64_t chunk_at(const level& lv, size_t i) const {
        size_t bit = i * chunk_width_;
        uint64_t v = lv.chunks[bit / 64] >> (bit % 64);
        if (bit % 64 + chunk_width_ > 64) v |= lv.chunks[bit / 64 + 1] << (64 - bit % 64);
        return v & ((1ull << chunk_width_) - 1);
    }

    uint32_t chunk_width_ = 8;
    size_t size_ = 0;
    std::vector<level> levels_;
};

}  // namespace tracube
