#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ncauth/keys.hpp"
#include "ncauth/polynomial.hpp"
#include "ncauth/random.hpp"
#include "ncauth/ring.hpp"
#include "ncauth/wire.hpp"

namespace ncauth {

// Three-pass identification repeated for k rounds. Per round:
//
//   prover:   commit u = h(p)^m y h(p)^n
//   verifier: random bit c
//   prover:   c = 0 -> v = h(p)        verifier checks u = v^m y v^n
//             c = 1 -> v = f(p) h(p)   verifier checks u = v^m q v^n
//
// A prover without f(p) can prepare for only one value of c, so it
// survives k rounds with probability 2^-k.

struct FsCommitment {
    RingElement u;
};

struct FsChallenge {
    bool c = false;
};

struct FsResponse {
    RingElement v;
};

struct FsProverState {
    IntPolynomial round_poly;
    RingElement round_element;
};

struct FsSessionConfig {
    std::uint16_t rounds = 20;
    // Drawn from the session's random source when unset.
    std::optional<SessionId> session_id;

    void validate() const;
};

// Fresh h per call, redrawn while h(p) = 0.
std::pair<FsProverState, FsCommitment> fs_commit(const KeyPair& kp, RandomSource& rng);

// Commitment for a chosen h.
std::pair<FsProverState, FsCommitment> fs_commit_with(const KeyPair& kp, const IntPolynomial& h);

FsChallenge fs_challenge(RandomSource& rng);

FsResponse fs_respond(const KeyPair& kp, const FsProverState& state, FsChallenge c);

bool fs_verify_round(const SystemParams& params, const PublicKey& pk, const FsCommitment& u, FsChallenge c,
                     const FsResponse& v);

// Prover side of one round at a time.
class FsProver {
public:
    virtual ~FsProver() = default;
    virtual FsCommitment commit(RandomSource& rng) = 0;
    virtual FsResponse respond(FsChallenge c) = 0;
};

class HonestFsProver final : public FsProver {
public:
    explicit HonestFsProver(KeyPair kp) : kp_(std::move(kp)) {}

    FsCommitment commit(RandomSource& rng) override;
    FsResponse respond(FsChallenge c) override;

    // Polynomial behind the most recent commitment.
    const std::optional<FsProverState>& round_state() const noexcept { return state_; }

private:
    KeyPair kp_;
    std::optional<FsProverState> state_;
};

/**
 * Prover that knows only the public key. Each round it guesses the
 * challenge g and prepares that branch:
 *   g = 0: u = h(p)^m y h(p)^n, answers v = h(p)
 *   g = 1: u = h(p)^m q h(p)^n, answers v = h(p), which passes the c = 1 check
 * The round passes iff c = g, barring a coincidence in the ring.
 */
class CheatingFsProver final : public FsProver {
public:
    // A fixed guess, or a fresh uniform guess each round when unset.
    CheatingFsProver(SystemParams params, PublicKey pk, std::optional<bool> fixed_guess = std::nullopt);

    FsCommitment commit(RandomSource& rng) override;
    FsResponse respond(FsChallenge c) override;

    bool last_guess() const noexcept { return guess_; }

private:
    SystemParams params_;
    PublicKey pk_;
    std::optional<bool> fixed_guess_;
    bool guess_ = false;
    std::optional<RingElement> round_element_;
};

struct FsSessionResult {
    bool accepted = false;
    Transcript transcript;
};

/**
 * Runs rounds sequentially in-process. The verifier checks against
 * `verifier_pk` and rejects at the first failing round. The transcript
 * starts with HELLO and ends with the ACCEPT or REJECT frame.
 */
FsSessionResult fs_run_session(FsProver& prover, const SystemParams& params, const PublicKey& verifier_pk,
                               const FsSessionConfig& cfg, RandomSource& rng);
FsSessionResult fs_run_session(const KeyPair& prover, const PublicKey& verifier_pk, const FsSessionConfig& cfg,
                               RandomSource& rng);

// Answers a commitment with a challenge bit; the honest verifier ignores
// the commitment and draws a uniform bit.
using FsChallengeSource = std::function<FsChallenge(const FsCommitment&, RandomSource&)>;

inline FsChallenge honest_challenge_source(const FsCommitment&, RandomSource& rng) { return fs_challenge(rng); }

struct FsSimulation {
    Transcript transcript;
    std::vector<std::uint32_t> attempts_per_round;
};

inline constexpr std::uint32_t kSimulatorRetryLimit = 1000;

class SimulatorExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Transcript simulator that never touches the private key. Per round: pick
 * c and v(p), set u from the c-branch verification equation, ask the
 * challenge source for a bit, and keep the triple only when the bit equals
 * c. Throws SimulatorExhausted after kSimulatorRetryLimit attempts in a round.
 */
FsSimulation fs_zk_simulate(const SystemParams& params, const PublicKey& pk, const FsSessionConfig& cfg,
                            RandomSource& rng, const FsChallengeSource& verifier = honest_challenge_source);

struct FsRoundRecord {
    RingElement u;
    bool c;
    RingElement v;

    friend bool operator==(const FsRoundRecord&, const FsRoundRecord&) = default;
};

// Decoded (u, c, v) triples of the complete rounds in a transcript.
std::vector<FsRoundRecord> fs_rounds(const Transcript& t);

}  // namespace ncauth
