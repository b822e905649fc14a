#include "ncauth/auth_dh.hpp"

#include <string>

namespace ncauth {

namespace {

void require_ring(const SystemParams& params, const PublicKey& pk) {
    if (!(pk.base.descriptor() == params.ring) || !(pk.middle.descriptor() == params.ring) ||
        !(pk.target.descriptor() == params.ring)) {
        throw DescriptorMismatch();
    }
}

}  // namespace

IntPolynomial dh_draw_challenge_poly(const SystemParams& params, const PublicKey& pk, RandomSource& rng) {
    require_ring(params, pk);
    auto cfg = params.sampler;
    cfg.require_nonzero_eval = true;
    for (int attempt = 0; attempt < kSamplerRetryLimit; ++attempt) {
        auto h = sample_polynomial(cfg, pk.base, rng);
        const auto hp = evaluate(h, pk.base);
        if (!sandwich(hp, pk.middle, params.left_exponent, params.right_exponent).is_zero()) {
            return h;
        }
    }
    throw SamplerExhausted("every challenge drawn was zero after " + std::to_string(kSamplerRetryLimit) +
                           " attempts; the public key is degenerate");
}

std::pair<DhVerifierState, DhChallenge> dh_challenge_for(const SystemParams& params, const PublicKey& pk,
                                                         const IntPolynomial& h) {
    require_ring(params, pk);
    const auto hp = evaluate(h, pk.base);
    auto u = sandwich(hp, pk.middle, params.left_exponent, params.right_exponent);
    auto expected = hash_element(sandwich(hp, pk.target, params.left_exponent, params.right_exponent));
    return {DhVerifierState{h, expected}, DhChallenge{std::move(u)}};
}

std::pair<DhVerifierState, DhChallenge> dh_make_challenge(const SystemParams& params, const PublicKey& pk,
                                                          RandomSource& rng) {
    return dh_challenge_for(params, pk, dh_draw_challenge_poly(params, pk, rng));
}

RingElement dh_prover_preimage(const KeyPair& kp, const RingElement& u) {
    return sandwich(kp.private_element, u, kp.params.left_exponent, kp.params.right_exponent);
}

RingElement dh_verifier_preimage(const SystemParams& params, const PublicKey& pk, const IntPolynomial& h) {
    return sandwich(evaluate(h, pk.base), pk.target, params.left_exponent, params.right_exponent);
}

DhResponse dh_respond(const KeyPair& kp, const DhChallenge& challenge) {
    return DhResponse{hash_element(dh_prover_preimage(kp, challenge.u))};
}

bool dh_verify(const DhVerifierState& state, const DhResponse& response) {
    return digest_equal(state.expected, response.w);
}

std::pair<IntPolynomial, Digest> dh_hvzk_simulate(const SystemParams& params, const PublicKey& pk, RandomSource& rng) {
    auto h = dh_draw_challenge_poly(params, pk, rng);
    auto digest = hash_element(dh_verifier_preimage(params, pk, h));
    return {std::move(h), digest};
}

}  // namespace ncauth
