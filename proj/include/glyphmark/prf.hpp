#pragma once

// Message bits, 128-bit secret keys, and keyed whitening. The keystream is
// SipHash-2-4 over the bit-block index, XORed onto the message; whitening
// is its own inverse.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "glyphmark/image.hpp"

namespace glyphmark {

using SecretKey = std::array<std::uint8_t, 16>;

struct Message {
    std::vector<int> bits;  // 0/1, MSB-first within each hex byte

    std::size_t size() const { return bits.size(); }
    bool empty() const { return bits.empty(); }

    static Message from_bitstring(const std::string& s) {
        Message m;
        for (char c : s) {
            if (c == '0') m.bits.push_back(0);
            else if (c == '1') m.bits.push_back(1);
            else throw ConfigError("message: bit string may contain only 0/1");
        }
        if (m.bits.empty()) throw ConfigError("message: empty bit string");
        return m;
    }

    static Message from_hex(const std::string& s) {
        Message m;
        for (char c : s) {
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            else throw ConfigError("message: invalid hex digit");
            for (int b = 3; b >= 0; --b) m.bits.push_back((v >> b) & 1);
        }
        if (m.bits.empty()) throw ConfigError("message: empty hex string");
        return m;
    }

    std::string to_bitstring() const {
        std::string s;
        s.reserve(bits.size());
        for (int b : bits) s += b ? '1' : '0';
        return s;
    }

    friend bool operator==(const Message&, const Message&) = default;
};

inline SecretKey key_from_hex(const std::string& s) {
    if (s.size() != 32) throw ConfigError("key: expected 32 hex characters (128 bits)");
    SecretKey key{};
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw ConfigError("key: invalid hex digit");
    };
    for (int i = 0; i < 16; ++i)
        key[i] = static_cast<std::uint8_t>(nib(s[2 * i]) << 4 | nib(s[2 * i + 1]));
    return key;
}

namespace detail {

inline std::uint64_t rotl64(std::uint64_t v, int b) { return (v << b) | (v >> (64 - b)); }

inline std::uint64_t load_le64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

} // namespace detail

/// SipHash-2-4 of an arbitrary byte string under a 128-bit key.
inline std::uint64_t siphash24(const SecretKey& key, const std::uint8_t* data,
                               std::size_t len) {
    const std::uint64_t k0 = detail::load_le64(key.data());
    const std::uint64_t k1 = detail::load_le64(key.data() + 8);
    std::uint64_t v0 = 0x736f6d6570736575ULL ^ k0;
    std::uint64_t v1 = 0x646f72616e646f6dULL ^ k1;
    std::uint64_t v2 = 0x6c7967656e657261ULL ^ k0;
    std::uint64_t v3 = 0x7465646279746573ULL ^ k1;

    auto round = [&] {
        v0 += v1; v1 = detail::rotl64(v1, 13); v1 ^= v0; v0 = detail::rotl64(v0, 32);
        v2 += v3; v3 = detail::rotl64(v3, 16); v3 ^= v2;
        v0 += v3; v3 = detail::rotl64(v3, 21); v3 ^= v0;
        v2 += v1; v1 = detail::rotl64(v1, 17); v1 ^= v2; v2 = detail::rotl64(v2, 32);
    };

    const std::size_t blocks = len / 8;
    for (std::size_t i = 0; i < blocks; ++i) {
        const std::uint64_t m = detail::load_le64(data + 8 * i);
        v3 ^= m;
        round();
        round();
        v0 ^= m;
    }
    std::uint64_t tail = static_cast<std::uint64_t>(len & 0xff) << 56;
    for (std::size_t i = 0; i < len - blocks * 8; ++i)
        tail |= static_cast<std::uint64_t>(data[blocks * 8 + i]) << (8 * i);
    v3 ^= tail;
    round();
    round();
    v0 ^= tail;
    v2 ^= 0xff;
    round();
    round();
    round();
    round();
    return v0 ^ v1 ^ v2 ^ v3;
}

/// Keyed keystream over bit indices: 64 bits per SipHash call on the block
/// counter.
inline std::vector<int> keystream(const SecretKey& key, std::size_t nbits) {
    std::vector<int> out;
    out.reserve(nbits);
    for (std::size_t block = 0; out.size() < nbits; ++block) {
        std::uint8_t counter[8];
        for (int i = 0; i < 8; ++i)
            counter[i] = static_cast<std::uint8_t>((block >> (8 * i)) & 0xff);
        const std::uint64_t h = siphash24(key, counter, 8);
        for (int b = 0; b < 64 && out.size() < nbits; ++b)
            out.push_back(static_cast<int>((h >> b) & 1));
    }
    return out;
}

inline std::vector<int> xor_bits(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw ContractError("xor_bits: length mismatch");
    std::vector<int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

inline Message whiten(const Message& msg, const SecretKey& key) {
    return Message{xor_bits(msg.bits, keystream(key, msg.bits.size()))};
}

inline Message unwhiten(const Message& msg, const SecretKey& key) {
    return whiten(msg, key);  // XOR whitening is an involution
}

} // namespace glyphmark
