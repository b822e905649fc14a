#include "ncauth/ring.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <algorithm>
#include <sstream>

#include "ncauth/bytes.hpp"

namespace ncauth {

namespace {

constexpr std::uint8_t kElementMagic[4] = {'N', 'C', 'R', 'E'};
constexpr std::uint8_t kElementVersion = 0x01;

void require_same(const RingElement& a, const RingElement& b) {
    if (!(a.descriptor() == b.descriptor())) {
        throw DescriptorMismatch();
    }
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) {
        throw std::invalid_argument("hex string has odd length");
    }
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw std::invalid_argument("invalid hex digit");
    };
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        out.push_back(static_cast<std::uint8_t>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
    }
    return out;
}

RingDescriptor::RingDescriptor(std::uint32_t dimension, std::uint64_t modulus) {
    if (dimension < 2) {
        throw std::invalid_argument("ring dimension must be >= 2 (d = 1 is commutative)");
    }
    if (dimension > kMaxDimension) {
        throw std::invalid_argument("ring dimension must be <= 255");
    }
    if (modulus < 2) {
        throw std::invalid_argument("ring modulus must be >= 2");
    }
    if (modulus >= kModulusBound) {
        throw std::invalid_argument("ring modulus must be < 2^31");
    }
    dimension_ = dimension;
    modulus_ = static_cast<std::uint32_t>(modulus);
}

RingElement RingElement::zero(const RingDescriptor& desc) { return RingElement(desc); }

RingElement RingElement::identity(const RingDescriptor& desc) {
    RingElement r(desc);
    for (std::uint32_t i = 0; i < desc.dimension(); ++i) {
        r.entries_[i * desc.dimension() + i] = 1;
    }
    return r;
}

RingElement RingElement::from_entries(const RingDescriptor& desc, std::span<const std::uint64_t> entries) {
    if (entries.size() != desc.entry_count()) {
        throw std::invalid_argument("element needs exactly d^2 entries");
    }
    RingElement r(desc);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        r.entries_[i] = static_cast<std::uint32_t>(entries[i] % desc.modulus());
    }
    return r;
}

RingElement RingElement::from_entries(const RingDescriptor& desc, std::initializer_list<std::uint64_t> entries) {
    return from_entries(desc, std::span<const std::uint64_t>(entries.begin(), entries.size()));
}

bool RingElement::is_zero() const noexcept {
    for (auto e : entries_) {
        if (e != 0) return false;
    }
    return true;
}

RingElement operator+(const RingElement& a, const RingElement& b) {
    require_same(a, b);
    RingElement out(a.desc_);
    const std::uint64_t q = a.desc_.modulus();
    for (std::size_t i = 0; i < out.entries_.size(); ++i) {
        out.entries_[i] = static_cast<std::uint32_t>((std::uint64_t{a.entries_[i]} + b.entries_[i]) % q);
    }
    return out;
}

RingElement operator*(const RingElement& a, const RingElement& b) {
    require_same(a, b);
    RingElement out(a.desc_);
    const std::size_t d = a.desc_.dimension();
    const std::uint64_t q = a.desc_.modulus();
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            // each reduced product is < 2^31, so d <= 255 of them cannot overflow
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < d; ++k) {
                acc += (std::uint64_t{a.entries_[i * d + k]} * b.entries_[k * d + j]) % q;
            }
            out.entries_[i * d + j] = static_cast<std::uint32_t>(acc % q);
        }
    }
    return out;
}

RingElement scale(std::uint64_t k, const RingElement& r) {
    RingElement out(r.desc_);
    const std::uint64_t q = r.desc_.modulus();
    const std::uint64_t factor = k % q;
    for (std::size_t i = 0; i < out.entries_.size(); ++i) {
        out.entries_[i] = static_cast<std::uint32_t>((factor * r.entries_[i]) % q);
    }
    return out;
}

RingElement pow(const RingElement& r, std::uint64_t e) {
    RingElement result = RingElement::identity(r.descriptor());
    RingElement square = r;
    while (e > 0) {
        if (e & 1) {
            result = result * square;
        }
        e >>= 1;
        if (e > 0) {
            square = square * square;
        }
    }
    return result;
}

RingElement sandwich(const RingElement& z, const RingElement& x, std::uint64_t left, std::uint64_t right) {
    require_same(z, x);
    if (left == right) {
        const RingElement side = pow(z, left);
        return side * x * side;
    }
    return pow(z, left) * x * pow(z, right);
}

RingElement random_element(const RingDescriptor& desc, RandomSource& rng) {
    RingElement r(desc);
    for (auto& e : r.entries_) {
        e = static_cast<std::uint32_t>(rng.uniform(0, desc.modulus() - 1));
    }
    return r;
}

std::vector<std::uint8_t> encode_element(const RingElement& r) {
    const auto& desc = r.descriptor();
    Bytes out;
    out.reserve(desc.encoded_size());
    out.insert(out.end(), std::begin(kElementMagic), std::end(kElementMagic));
    out.push_back(kElementVersion);
    out.push_back(static_cast<std::uint8_t>(desc.dimension()));
    put_u32(out, desc.modulus());
    for (auto e : r.entries()) {
        put_u32(out, e);
    }
    return out;
}

RingElement decode_element(std::span<const std::uint8_t> bytes) {
    ByteReader<DecodeError> in(bytes, "ring element");
    auto magic = in.take(4);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kElementMagic))) {
        throw DecodeError("ring element: bad magic");
    }
    if (in.u8() != kElementVersion) {
        throw DecodeError("ring element: unsupported version");
    }
    const std::uint32_t d = in.u8();
    const std::uint32_t q = in.u32();
    RingDescriptor desc = [&] {
        try {
            return RingDescriptor(d, q);
        } catch (const std::invalid_argument& e) {
            throw DecodeError(std::string("ring element: ") + e.what());
        }
    }();
    if (in.remaining() != 4 * desc.entry_count()) {
        throw DecodeError("ring element: length does not match 10 + 4d^2");
    }
    RingElement r(desc);
    for (auto& e : r.entries_) {
        e = in.u32();
        if (e >= q) {
            throw DecodeError("ring element: entry not reduced mod q");
        }
    }
    return r;
}

std::string Digest::hex() const { return to_hex(bytes); }

Digest hash_bytes(std::span<const std::uint8_t> bytes) {
    Digest d;
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), d.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != Digest::kSize) {
        throw std::runtime_error("SHA-256 failed");
    }
    return d;
}

Digest hash_element(const RingElement& r) { return hash_bytes(encode_element(r)); }

bool digest_equal(const Digest& a, const Digest& b) {
    return CRYPTO_memcmp(a.bytes.data(), b.bytes.data(), Digest::kSize) == 0;
}

std::string to_string(const RingElement& r) {
    std::ostringstream os;
    const auto d = r.descriptor().dimension();
    os << '[';
    for (std::uint32_t i = 0; i < d; ++i) {
        os << (i ? ",[" : "[");
        for (std::uint32_t j = 0; j < d; ++j) {
            os << (j ? "," : "") << r.at(i, j);
        }
        os << ']';
    }
    os << "] mod " << r.descriptor().modulus();
    return os.str();
}

}  // namespace ncauth
