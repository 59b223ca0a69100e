#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "tracube/types.hpp"

namespace tracube {

// Little-endian byte sink used by every serialized structure.
class byte_writer {
public:
    void u8(uint8_t v) { buf_.push_back(v); }

    void u16(uint16_t v) {
        buf_.push_back(static_cast<uint8_t>(v));
        buf_.push_back(static_cast<uint8_t>(v >> 8));
    }

    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void i32(int32_t v) { u32(static_cast<uint32_t>(v)); }

    void f64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        u64(bits);
    }

    // LEB128.
    void varint(uint64_t v) {
        while (v >= 0x80) {
            buf_.push_back(static_cast<uint8_t>(v) | 0x80);
            v >>= 7;
        }
        buf_.push_back(static_cast<uint8_t>(v));
    }

    void bytes(const void* p, size_t n) {
        const auto* b = static_cast<const uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }

    void str(const std::string& s) {
        u16(static_cast<uint16_t>(s.size()));
        bytes(s.data(), s.size());
    }

    size_t size() const { return buf_.size(); }
    const std::vector<uint8_t>& data() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

private:
    std::vector<uint8_t> buf_;
};

// Bounds-checked reader; any read past the end is a corruption error.
class byte_reader {
public:
    byte_reader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
    explicit byte_reader(const std::vector<uint8_t>& v) : byte_reader(v.data(), v.size()) {}

    uint8_t u8() {
        need(1);
        return data_[pos_++];
    }

    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(data_[pos_]) |
                     static_cast<uint16_t>(data_[pos_ + 1]) << 8;
        pos_ += 2;
        return v;
    }

    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += 8;
        return v;
    }

    int32_t i32() { return static_cast<int32_t>(u32()); }

    double f64() {
        uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

    uint64_t varint() {
        uint64_t v = 0;
        int shift = 0;
        for (;;) {
            uint8_t b = u8();
            if (shift >= 64) throw corrupt_error("varint overflow");
            v |= static_cast<uint64_t>(b & 0x7F) << shift;
            if ((b & 0x80) == 0) return v;
            shift += 7;
        }
    }

    void bytes(void* p, size_t n) {
        need(n);
        std::memcpy(p, data_ + pos_, n);
        pos_ += n;
    }

    std::string str() {
        uint16_t n = u16();
        need(n);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }

    size_t pos() const { return pos_; }
    size_t remaining() const { return size_ - pos_; }

private:
    void need(size_t n) const {
        if (pos_ + n > size_) throw corrupt_error("unexpected end of serialized data");
    }

    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
};

// CRC-32 (IEEE), used as the store container trailer.
inline uint32_t crc32(const uint8_t* data, size_t n, uint32_t seed = 0) {
    static const std::array<uint32_t, 256> table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int j = 0; j < 8; ++j) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    uint32_t crc = ~seed;
    for (size_t i = 0; i < n; ++i) crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
    return ~crc;
}

}  // namespace tracube
