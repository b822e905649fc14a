#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncauth/random.hpp"

namespace ncauth {

// Raised when two elements from different rings are combined.
class DescriptorMismatch : public std::invalid_argument {
public:
    DescriptorMismatch() : std::invalid_argument("incompatible ring parameters") {}
};

// Malformed canonical element encoding.
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Parameters of the matrix ring M_d(Z_q).
 *
 * d >= 2 keeps the ring non-commutative. q is bounded by 2^31 so every
 * entry fits the 4-byte wire format and a product of two entries fits
 * in 64 bits.
 */
class RingDescriptor {
public:
    static constexpr std::uint32_t kMaxDimension = 255;
    static constexpr std::uint64_t kModulusBound = std::uint64_t{1} << 31;

    // Throws std::invalid_argument naming the violated bound.
    RingDescriptor(std::uint32_t dimension, std::uint64_t modulus);

    std::uint32_t dimension() const noexcept { return dimension_; }
    std::uint32_t modulus() const noexcept { return modulus_; }
    std::size_t entry_count() const noexcept { return std::size_t{dimension_} * dimension_; }

    // Length in bytes of the canonical encoding of any element: 10 + 4d^2.
    std::size_t encoded_size() const noexcept { return 10 + 4 * entry_count(); }

    friend bool operator==(const RingDescriptor&, const RingDescriptor&) = default;

private:
    std::uint32_t dimension_;
    std::uint32_t modulus_;
};

// A d x d matrix over Z_q, stored row-major with every entry reduced.
class RingElement {
public:
    static RingElement zero(const RingDescriptor& desc);
    static RingElement identity(const RingDescriptor& desc);

    // Entries are reduced mod q. Throws if the count is not d^2.
    static RingElement from_entries(const RingDescriptor& desc, std::span<const std::uint64_t> entries);
    static RingElement from_entries(const RingDescriptor& desc, std::initializer_list<std::uint64_t> entries);

    const RingDescriptor& descriptor() const noexcept { return desc_; }
    std::span<const std::uint32_t> entries() const noexcept { return entries_; }
    std::uint32_t at(std::size_t row, std::size_t col) const {
        return entries_.at(row * desc_.dimension() + col);
    }

    bool is_zero() const noexcept;

    friend bool operator==(const RingElement&, const RingElement&) = default;

private:
    explicit RingElement(const RingDescriptor& desc) : desc_(desc), entries_(desc.entry_count(), 0) {}

    RingDescriptor desc_;
    std::vector<std::uint32_t> entries_;

    friend RingElement operator+(const RingElement&, const RingElement&);
    friend RingElement operator*(const RingElement&, const RingElement&);
    friend RingElement scale(std::uint64_t, const RingElement&);
    friend RingElement random_element(const RingDescriptor&, RandomSource&);
    friend RingElement decode_element(std::span<const std::uint8_t>);
};

RingElement operator+(const RingElement& a, const RingElement& b);
RingElement operator*(const RingElement& a, const RingElement& b);

// (k)r: the k-fold sum r + ... + r, which in characteristic q equals
// (k mod q) times each entry. scale(0, r) is zero.
RingElement scale(std::uint64_t k, const RingElement& r);

// r^e by square-and-multiply; r^0 is the identity.
RingElement pow(const RingElement& r, std::uint64_t e);

// z^left * x * z^right, the shape shared by key generation, challenges,
// commitments and the decomposition problem.
RingElement sandwich(const RingElement& z, const RingElement& x, std::uint64_t left, std::uint64_t right);

// Entries i.i.d. uniform in [0, q-1].
RingElement random_element(const RingDescriptor& desc, RandomSource& rng);

// Canonical bytes: "NCRE" | 0x01 | d | q (u32 BE) | d^2 entries (u32 BE, row-major).
std::vector<std::uint8_t> encode_element(const RingElement& r);
RingElement decode_element(std::span<const std::uint8_t> bytes);

struct Digest {
    static constexpr std::size_t kSize = 32;
    std::array<std::uint8_t, kSize> bytes{};

    std::string hex() const;
    friend bool operator==(const Digest&, const Digest&) = default;
};

inline constexpr const char* kHashName = "SHA-256";

// SHA-256 over the canonical encoding.
Digest hash_element(const RingElement& r);
Digest hash_bytes(std::span<const std::uint8_t> bytes);

// Comparison whose running time does not depend on where the digests differ.
bool digest_equal(const Digest& a, const Digest& b);

std::string to_string(const RingElement& r);

}  // namespace ncauth
