#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace snnq {

enum class IoErrc {
    BadMagic,
    BadVersion,
    Truncated,
    RangeViolation,
    OrderViolation,
    BadValue,
    EmptyStream,
    HashMismatch,
    UnsupportedBits,
    FileSystem,
};

// Carries the error kind plus the byte offset (or record index context in the
// message) where decoding stopped.
class IoError : public std::runtime_error {
public:
    IoError(IoErrc code, std::uint64_t offset, const std::string& msg)
        : std::runtime_error(msg + " (byte offset " + std::to_string(offset) + ")"),
          code_(code),
          offset_(offset) {}

    IoErrc code() const { return code_; }
    std::uint64_t offset() const { return offset_; }

private:
    IoErrc code_;
    std::uint64_t offset_;
};

// Little-endian append-only buffer.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) { put_le(v, 2); }
    void u32(std::uint32_t v) { put_le(v, 4); }
    void u64(std::uint64_t v) { put_le(v, 8); }
    void f32(float v) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        u32(bits);
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf_.insert(buf_.end(), b, b + n);
    }

    std::size_t size() const { return buf_.size(); }
    const std::vector<std::uint8_t>& data() const { return buf_; }

private:
    void put_le(std::uint64_t v, int n) {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t> buf_;
};

// Little-endian cursor over a byte buffer; throws Truncated with the offset of
// the short read.
class ByteReader {
public:
    ByteReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}
    explicit ByteReader(const std::vector<std::uint8_t>& v) : ByteReader(v.data(), v.size()) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }

    std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get_le(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
    std::uint64_t u64() { return get_le(8); }
    float f32() {
        std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::vector<std::uint8_t> bytes(std::size_t n) {
        need(n);
        std::vector<std::uint8_t> out(data_ + pos_, data_ + pos_ + n);
        pos_ += n;
        return out;
    }

    void need(std::size_t n) const {
        if (size_ - pos_ < n)
            throw IoError(IoErrc::Truncated, pos_,
                          "unexpected end of data, need " + std::to_string(n) + " more bytes");
    }

private:
    std::uint64_t get_le(int n) {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

// FNV-1a, used to pin serialized network specs inside container files.
inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
// Writes via a temp file in the same directory plus rename, so a crash never
// leaves a half-written artifact at `path`.
void write_file_atomic(const std::string& path, const void* data, std::size_t size);

}  // namespace snnq
