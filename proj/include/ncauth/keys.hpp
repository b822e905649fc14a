#pragma once

#include <cstdint>
#include <string>

#include "ncauth/polynomial.hpp"
#include "ncauth/random.hpp"
#include "ncauth/ring.hpp"

namespace ncauth {

// Public system parameters shared by prover and verifier: the ring, the
// two sandwich exponents, the hash, and the polynomial sampler that both
// sides draw private and challenge polynomials from.
struct SystemParams {
    RingDescriptor ring{3, 2147483647};
    std::uint32_t left_exponent = 3;
    std::uint32_t right_exponent = 5;
    std::string hash_id = kHashName;
    PolynomialSamplerConfig sampler{};

    // Protocol defaults: d=3, q=2^31-1, exponents (3,5), D=5, C=2^16.
    static SystemParams protocol_defaults() { return SystemParams{}; }

    // Throws std::invalid_argument naming the violated bound.
    void validate() const;

    friend bool operator==(const SystemParams& a, const SystemParams& b) {
        return a.ring == b.ring && a.left_exponent == b.left_exponent && a.right_exponent == b.right_exponent &&
               a.hash_id == b.hash_id && a.sampler.max_degree == b.sampler.max_degree &&
               a.sampler.max_coefficient == b.sampler.max_coefficient &&
               a.sampler.require_nonzero_eval == b.sampler.require_nonzero_eval;
    }
};

// Published key (p, q, y): target = f(base)^l * middle * f(base)^r.
struct PublicKey {
    RingElement base;
    RingElement middle;
    RingElement target;

    friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct KeyPair {
    SystemParams params;
    IntPolynomial private_poly;
    RingElement private_element;
    PublicKey public_key;
};

// Random base and middle; f drawn with a non-zero evaluation at base.
KeyPair generate_keypair(const SystemParams& params, RandomSource& rng);

// Deterministic construction from chosen parts. Throws std::invalid_argument
// when f(base) = 0.
KeyPair keypair_from_parts(const SystemParams& params, const RingElement& base, const RingElement& middle,
                           const IntPolynomial& f);

// Recomputes private_element and target from the stored parts.
bool keypair_consistent(const KeyPair& kp);

// SHA-256 of the canonical encoding of the public target.
Digest fingerprint(const PublicKey& pk);

}  // namespace ncauth
