#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tracube/serialize.hpp"

namespace tracube {

class bit_vector;

// Append-only staging area for bit content; frozen into a bit_vector.
class bit_builder {
public:
    bit_builder() = default;
    explicit bit_builder(size_t n, bool value = false)
        : words_((n + 63) / 64, value ? ~0ull : 0ull), size_(n) {
        trim();
    }

    void push_back(bool b) {
        if (size_ % 64 == 0) words_.push_back(0);
        if (b) words_.back() |= 1ull << (size_ % 64);
        ++size_;
    }

    void set(size_t i, bool b = true) {
        if (b)
            words_[i / 64] |= 1ull << (i % 64);
        else
            words_[i / 64] &= ~(1ull << (i % 64));
    }

    bool get(size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
    size_t size() const { return size_; }

private:
    void trim() {
        if (size_ % 64 != 0 && !words_.empty()) words_.back() &= (1ull << (size_ % 64)) - 1;
    }

    friend class bit_vector;
    std::vector<uint64_t> words_;
    size_t size_ = 0;
};

// Plain bitvector with a two-level rank directory (512-bit superblocks over
// 64-bit blocks). rank_b(i) counts occurrences of b in [0, i); select_b(j)
// returns the 0-based position of the j-th occurrence (j is 1-based).
// Immutable once constructed.
class bit_vector {
public:
    static constexpr size_t words_per_super = 8;  // 512 bits

    bit_vector() { build_directories(); }

    explicit bit_vector(bit_builder&& b) : words_(std::move(b.words_)), size_(b.size_) {
        b.size_ = 0;
        build_directories();
    }

    explicit bit_vector(const std::vector<bool>& bits) {
        bit_builder b;
        for (bool x : bits) b.push_back(x);
        *this = bit_vector(std::move(b));
    }

    size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool operator[](size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }

    size_t count_ones() const { return total_ones_; }
    size_t count_zeros() const { return size_ - total_ones_; }
    size_t count(bool b) const { return b ? count_ones() : count_zeros(); }

    // Number of 1s in [0, i).
    size_t rank1(size_t i) const {
        if (i > size_) throw std::out_of_range("bit_vector::rank: position past end");
        if (i == 0) return 0;
        size_t w = i / 64;
        size_t r = super_[w / words_per_super] + block_[w];
        size_t tail = i % 64;
        if (tail != 0) r += std::popcount(words_[w] & ((1ull << tail) - 1));
        return r;
    }

    size_t rank0(size_t i) const { return i - rank1(i); }
    size_t rank(size_t i, bool b) const { return b ? rank1(i) : rank0(i); }

    // Position of the j-th 1, j in [1, count_ones()].
    size_t select1(size_t j) const {
        if (j == 0 || j > total_ones_) throw std::out_of_range("bit_vector::select1: no such occurrence");
        return select_impl<true>(j);
    }

    // Position of the j-th 0, j in [1, count_zeros()].
    size_t select0(size_t j) const {
        if (j == 0 || j > size_ - total_ones_)
            throw std::out_of_range("bit_vector::select0: no such occurrence");
        return select_impl<false>(j);
    }

    size_t select(size_t j, bool b) const { return b ? select1(j) : select0(j); }

    void save(byte_writer& w) const {
        w.u64(size_);
        for (uint64_t word : words_) w.u64(word);
        // Directory tables; rebuildable but kept for a stable byte layout.
        w.u32(static_cast<uint32_t>(super_.size()));
        for (uint64_t s : super_) w.u64(s);
        for (uint16_t b : block_) w.u16(b);
    }

    static bit_vector load(byte_reader& r) {
        bit_vector v;
        v.size_ = r.u64();
        size_t n_words = (v.size_ + 63) / 64;
        if (n_words > r.remaining() / 8) throw corrupt_error("bit_vector length exceeds data");
        v.words_.resize(n_words);
        for (auto& word : v.words_) word = r.u64();
        v.build_directories();
        uint32_t n_super = r.u32();
        if (n_super != v.super_.size()) throw corrupt_error("bit_vector directory size mismatch");
        for (size_t i = 0; i < n_super; ++i) {
            if (r.u64() != v.super_[i]) throw corrupt_error("bit_vector directory mismatch");
        }
        for (size_t i = 0; i < v.block_.size(); ++i) {
            if (r.u16() != v.block_[i]) throw corrupt_error("bit_vector directory mismatch");
        }
        return v;
    }

    friend bool operator==(const bit_vector& a, const bit_vector& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

private:
    void build_directories() {
        size_t n_words = words_.size();
        super_.assign(n_words / words_per_super + 1, 0);
        block_.assign(n_words + 1, 0);
        uint64_t total = 0;
        uint64_t in_super = 0;
        for (size_t w = 0; w < n_words; ++w) {
            if (w % words_per_super == 0) {
                super_[w / words_per_super] = total;
                in_super = 0;
            }
            block_[w] = static_cast<uint16_t>(in_super);
            uint64_t c = std::popcount(words_[w]);
            total += c;
            in_super += c;
        }
        if (n_words % words_per_super == 0) {
            super_[n_words / words_per_super] = total;
            in_super = 0;
        }
        block_[n_words] = static_cast<uint16_t>(in_super);
        total_ones_ = total;
    }

    template <bool One>
    size_t ones_at_super(size_t s) const {
        size_t pos = std::min(s * words_per_super * 64, size_);
        return One ? super_[s] : pos - super_[s];
    }

    template <bool One>
    size_t select_impl(size_t j) const {
        // Binary search the superblock directory, then walk blocks and bits.
        size_t lo = 0, hi = super_.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi + 1) / 2;
            if (ones_at_super<One>(mid) < j)
                lo = mid;
            else
                hi = mid - 1;
        }
        size_t w = lo * words_per_super;
        size_t seen = ones_at_super<One>(lo);
        size_t end = std::min(w + words_per_super, words_.size());
        for (; w < end; ++w) {
            uint64_t word = One ? words_[w] : ~words_[w];
            if (w == words_.size() - 1 && size_ % 64 != 0) word &= (1ull << (size_ % 64)) - 1;
            size_t c = std::popcount(word);
            if (seen + c >= j) {
                size_t need = j - seen;
                for (size_t bit = 0;; ++bit) {
                    if ((word >> bit) & 1) {
                        if (--need == 0) return w * 64 + bit;
                    }
                }
            }
            seen += c;
        }
        throw std::out_of_range("bit_vector::select: no such occurrence");
    }

    std::vector<uint64_t> words_;
    size_t size_ = 0;
    size_t total_ones_ = 0;
    std::vector<uint64_t> super_;
    std::vector<uint16_t> block_;
};

}  // namespace tracube
