#pragma once

#include <utility>

#include "ncauth/keys.hpp"
#include "ncauth/polynomial.hpp"
#include "ncauth/random.hpp"
#include "ncauth/ring.hpp"

namespace ncauth {

// Two-pass challenge-response authentication.
//
//   verifier: draw h, send u = h(p)^m q h(p)^n, keep H(h(p)^m y h(p)^n)
//   prover:   reply w = H(f(p)^m u f(p)^n)
//
// The two hash inputs are equal because f(p) and h(p) commute.

struct DhChallenge {
    RingElement u;
};

struct DhVerifierState {
    IntPolynomial challenge_poly;
    Digest expected;
};

struct DhResponse {
    Digest w;
};

inline KeyPair dh_keygen(const SystemParams& params, RandomSource& rng) { return generate_keypair(params, rng); }

// Draws the challenge polynomial, redrawing while the challenge element
// would be zero (a zero challenge has the publicly known answer H(0)).
// Throws SamplerExhausted after kSamplerRetryLimit draws.
IntPolynomial dh_draw_challenge_poly(const SystemParams& params, const PublicKey& pk, RandomSource& rng);

std::pair<DhVerifierState, DhChallenge> dh_make_challenge(const SystemParams& params, const PublicKey& pk,
                                                          RandomSource& rng);

// Challenge for a chosen h, without the non-zero redraw.
std::pair<DhVerifierState, DhChallenge> dh_challenge_for(const SystemParams& params, const PublicKey& pk,
                                                         const IntPolynomial& h);

// Pre-hash values on each side: f(p)^m u f(p)^n and h(p)^m y h(p)^n.
RingElement dh_prover_preimage(const KeyPair& kp, const RingElement& u);
RingElement dh_verifier_preimage(const SystemParams& params, const PublicKey& pk, const IntPolynomial& h);

DhResponse dh_respond(const KeyPair& kp, const DhChallenge& challenge);

bool dh_verify(const DhVerifierState& state, const DhResponse& response);

// Honest-verifier simulator: h from the verifier's own draw and the digest
// H(h(p)^m y h(p)^n), computed from public data only.
std::pair<IntPolynomial, Digest> dh_hvzk_simulate(const SystemParams& params, const PublicKey& pk, RandomSource& rng);

}  // namespace ncauth
