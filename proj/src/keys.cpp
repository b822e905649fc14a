#include "ncauth/keys.hpp"

#include <stdexcept>

namespace ncauth {

void SystemParams::validate() const {
    if (left_exponent < 1 || right_exponent < 1) {
        throw std::invalid_argument("exponents m, n must be >= 1 (got m=" + std::to_string(left_exponent) +
                                    ", n=" + std::to_string(right_exponent) + ")");
    }
    if (hash_id != kHashName) {
        throw std::invalid_argument("unsupported hash '" + hash_id + "'");
    }
    sampler.validate();
}

KeyPair keypair_from_parts(const SystemParams& params, const RingElement& base, const RingElement& middle,
                           const IntPolynomial& f) {
    params.validate();
    if (!(base.descriptor() == params.ring) || !(middle.descriptor() == params.ring)) {
        throw DescriptorMismatch();
    }
    auto secret = evaluate(f, base);
    if (secret.is_zero()) {
        throw std::invalid_argument("private polynomial evaluates to zero at the base element");
    }
    auto target = sandwich(secret, middle, params.left_exponent, params.right_exponent);
    return KeyPair{params, f, std::move(secret), PublicKey{base, middle, std::move(target)}};
}

KeyPair generate_keypair(const SystemParams& params, RandomSource& rng) {
    params.validate();
    auto base = random_element(params.ring, rng);
    auto middle = random_element(params.ring, rng);
    auto cfg = params.sampler;
    cfg.require_nonzero_eval = true;
    auto f = sample_polynomial(cfg, base, rng);
    return keypair_from_parts(params, base, middle, f);
}

bool keypair_consistent(const KeyPair& kp) {
    const auto secret = evaluate(kp.private_poly, kp.public_key.base);
    return !secret.is_zero() && secret == kp.private_element &&
           sandwich(secret, kp.public_key.middle, kp.params.left_exponent, kp.params.right_exponent) ==
               kp.public_key.target;
}

Digest fingerprint(const PublicKey& pk) { return hash_element(pk.target); }

}  // namespace ncauth
