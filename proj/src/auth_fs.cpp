#include "ncauth/auth_fs.hpp"

#include <stdexcept>
#include <string>

namespace ncauth {

namespace {

SessionId draw_session_id(RandomSource& rng) {
    SessionId sid{};
    for (auto& b : sid) {
        b = static_cast<std::uint8_t>(rng.uniform(0, 255));
    }
    return sid;
}

PolynomialSamplerConfig nonzero_sampler(const SystemParams& params) {
    auto cfg = params.sampler;
    cfg.require_nonzero_eval = true;
    return cfg;
}

}  // namespace

void FsSessionConfig::validate() const {
    if (rounds < 1) {
        throw std::invalid_argument("round count k must be >= 1");
    }
}

std::pair<FsProverState, FsCommitment> fs_commit_with(const KeyPair& kp, const IntPolynomial& h) {
    auto hp = evaluate(h, kp.public_key.base);
    auto u = sandwich(hp, kp.public_key.target, kp.params.left_exponent, kp.params.right_exponent);
    return {FsProverState{h, std::move(hp)}, FsCommitment{std::move(u)}};
}

std::pair<FsProverState, FsCommitment> fs_commit(const KeyPair& kp, RandomSource& rng) {
    return fs_commit_with(kp, sample_polynomial(nonzero_sampler(kp.params), kp.public_key.base, rng));
}

FsChallenge fs_challenge(RandomSource& rng) { return FsChallenge{rng.bit()}; }

FsResponse fs_respond(const KeyPair& kp, const FsProverState& state, FsChallenge c) {
    if (!c.c) {
        return FsResponse{state.round_element};
    }
    return FsResponse{kp.private_element * state.round_element};
}

bool fs_verify_round(const SystemParams& params, const PublicKey& pk, const FsCommitment& u, FsChallenge c,
                     const FsResponse& v) {
    const auto& middle = c.c ? pk.middle : pk.target;
    return sandwich(v.v, middle, params.left_exponent, params.right_exponent) == u.u;
}

FsCommitment HonestFsProver::commit(RandomSource& rng) {
    auto [state, commitment] = fs_commit(kp_, rng);
    state_ = std::move(state);
    return commitment;
}

FsResponse HonestFsProver::respond(FsChallenge c) {
    if (!state_) {
        throw std::logic_error("respond called before commit");
    }
    auto response = fs_respond(kp_, *state_, c);
    state_.reset();
    return response;
}

CheatingFsProver::CheatingFsProver(SystemParams params, PublicKey pk, std::optional<bool> fixed_guess)
    : params_(std::move(params)), pk_(std::move(pk)), fixed_guess_(fixed_guess) {}

FsCommitment CheatingFsProver::commit(RandomSource& rng) {
    guess_ = fixed_guess_ ? *fixed_guess_ : rng.bit();
    auto h = sample_polynomial(nonzero_sampler(params_), pk_.base, rng);
    round_element_ = evaluate(h, pk_.base);
    const auto& middle = guess_ ? pk_.middle : pk_.target;
    return FsCommitment{sandwich(*round_element_, middle, params_.left_exponent, params_.right_exponent)};
}

FsResponse CheatingFsProver::respond(FsChallenge) {
    if (!round_element_) {
        throw std::logic_error("respond called before commit");
    }
    // Either branch gets h(p); only the prepared one verifies.
    FsResponse response{*round_element_};
    round_element_.reset();
    return response;
}

FsSessionResult fs_run_session(FsProver& prover, const SystemParams& params, const PublicKey& verifier_pk,
                               const FsSessionConfig& cfg, RandomSource& rng) {
    cfg.validate();
    const SessionId sid = cfg.session_id ? *cfg.session_id : draw_session_id(rng);
    FsSessionResult result;
    auto& t = result.transcript;
    t.record(Direction::ProverToVerifier,
             make_frame(MsgType::Hello, sid, 0, encode_hello(Hello{Scheme::Fs, cfg.rounds, params, verifier_pk})));

    for (std::uint16_t round = 1; round <= cfg.rounds; ++round) {
        const auto u = prover.commit(rng);
        t.record(Direction::ProverToVerifier, make_frame(MsgType::FsCommit, sid, round, encode_element(u.u)));
        const auto c = fs_challenge(rng);
        t.record(Direction::VerifierToProver, make_frame(MsgType::FsChallenge, sid, round, encode_challenge_bit(c.c)));
        const auto v = prover.respond(c);
        t.record(Direction::ProverToVerifier, make_frame(MsgType::FsResponse, sid, round, encode_element(v.v)));
        if (!fs_verify_round(params, verifier_pk, u, c, v)) {
            const std::string reason = "round " + std::to_string(round) + " failed verification";
            t.record(Direction::VerifierToProver,
                     make_frame(MsgType::Reject, sid, round, Bytes(reason.begin(), reason.end())));
            return result;
        }
    }
    t.record(Direction::VerifierToProver, make_frame(MsgType::Accept, sid, cfg.rounds));
    result.accepted = true;
    return result;
}

FsSessionResult fs_run_session(const KeyPair& prover, const PublicKey& verifier_pk, const FsSessionConfig& cfg,
                               RandomSource& rng) {
    HonestFsProver honest(prover);
    return fs_run_session(honest, prover.params, verifier_pk, cfg, rng);
}

FsSimulation fs_zk_simulate(const SystemParams& params, const PublicKey& pk, const FsSessionConfig& cfg,
                            RandomSource& rng, const FsChallengeSource& verifier) {
    cfg.validate();
    const SessionId sid = cfg.session_id ? *cfg.session_id : draw_session_id(rng);
    FsSimulation sim;
    auto& t = sim.transcript;
    t.record(Direction::ProverToVerifier,
             make_frame(MsgType::Hello, sid, 0, encode_hello(Hello{Scheme::Fs, cfg.rounds, params, pk})));
    const auto sampler = nonzero_sampler(params);

    for (std::uint16_t round = 1; round <= cfg.rounds; ++round) {
        std::uint32_t attempts = 0;
        while (true) {
            if (attempts == kSimulatorRetryLimit) {
                throw SimulatorExhausted("simulator failed to match the challenge in round " + std::to_string(round) +
                                         " after " + std::to_string(kSimulatorRetryLimit) + " attempts");
            }
            ++attempts;
            const bool c = rng.bit();
            const auto v = evaluate(sample_polynomial(sampler, pk.base, rng), pk.base);
            const auto& middle = c ? pk.middle : pk.target;
            const FsCommitment u{sandwich(v, middle, params.left_exponent, params.right_exponent)};
            if (verifier(u, rng).c != c) {
                continue;
            }
            t.record(Direction::ProverToVerifier, make_frame(MsgType::FsCommit, sid, round, encode_element(u.u)));
            t.record(Direction::VerifierToProver, make_frame(MsgType::FsChallenge, sid, round, encode_challenge_bit(c)));
            t.record(Direction::ProverToVerifier, make_frame(MsgType::FsResponse, sid, round, encode_element(v)));
            break;
        }
        sim.attempts_per_round.push_back(attempts);
    }
    t.record(Direction::VerifierToProver, make_frame(MsgType::Accept, sid, cfg.rounds));
    return sim;
}

std::vector<FsRoundRecord> fs_rounds(const Transcript& t) {
    const auto ring = t.hello().params.ring;
    std::vector<FsRoundRecord> rounds;
    std::optional<RingElement> u;
    std::optional<bool> c;
    for (const auto& e : t.entries) {
        switch (e.frame.type) {
            case MsgType::FsCommit:
                u = decode_element_in(ring, e.frame.payload);
                c.reset();
                break;
            case MsgType::FsChallenge:
                c = decode_challenge_bit(e.frame.payload);
                break;
            case MsgType::FsResponse:
                if (u && c) {
                    rounds.push_back(FsRoundRecord{*u, *c, decode_element_in(ring, e.frame.payload)});
                }
                u.reset();
                c.reset();
                break;
            default:
                break;
        }
    }
    return rounds;
}

}  // namespace ncauth
