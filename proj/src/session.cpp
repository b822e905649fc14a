#include "ncauth/session.hpp"

#include <deque>
#include <stdexcept>

namespace ncauth {

namespace {

SessionId draw_session_id(RandomSource& rng) {
    SessionId sid{};
    for (auto& b : sid) {
        b = static_cast<std::uint8_t>(rng.uniform(0, 255));
    }
    return sid;
}

std::string payload_text(const Frame& f) { return std::string(f.payload.begin(), f.payload.end()); }

}  // namespace

const char* to_string(Decision d) noexcept { return d == Decision::Accept ? "ACCEPT" : "REJECT"; }

const char* to_string(VerifierSession::State s) noexcept {
    using S = VerifierSession::State;
    switch (s) {
        case S::AwaitHello: return "AwaitHello";
        case S::AwaitDhResponse: return "AwaitDhResponse";
        case S::AwaitFsCommit: return "AwaitFsCommit";
        case S::AwaitFsResponse: return "AwaitFsResponse";
        case S::Accepted: return "Accepted";
        case S::Rejected: return "Rejected";
    }
    return "?";
}

StepResult VerifierSession::send(Frame f) {
    transcript_.record(Direction::VerifierToProver, f);
    StepResult r;
    r.outgoing.push_back(std::move(f));
    return r;
}

StepResult VerifierSession::reject(const std::string& reason) {
    state_ = State::Rejected;
    decision_ = Decision::Reject;
    reason_ = reason;
    auto r = send(make_frame(MsgType::Reject, sid_, round_, Bytes(reason.begin(), reason.end())));
    r.decision = Decision::Reject;
    return r;
}

StepResult VerifierSession::accept() {
    state_ = State::Accepted;
    decision_ = Decision::Accept;
    auto r = send(make_frame(MsgType::Accept, sid_, round_));
    r.decision = Decision::Accept;
    return r;
}

StepResult VerifierSession::abort(const std::string& reason) {
    if (terminal()) return {};
    return reject(reason);
}

StepResult VerifierSession::step(const Frame& in, RandomSource& rng) {
    if (terminal()) {
        return {};
    }
    if (state_ != State::AwaitHello && in.session_id != sid_) {
        return reject("session id mismatch");
    }
    transcript_.record(Direction::ProverToVerifier, in);
    try {
        switch (state_) {
            case State::AwaitHello: {
                sid_ = in.session_id;
                if (in.type != MsgType::Hello || in.round_index != 0) {
                    return reject(std::string("expected HELLO, got ") + to_string(in.type));
                }
                auto hello = decode_hello(in.payload);
                if (cfg_.scheme && *cfg_.scheme != hello.scheme) {
                    return reject("scheme not offered by this verifier");
                }
                if (cfg_.pinned_params && !(*cfg_.pinned_params == hello.params)) {
                    return reject("system parameters do not match");
                }
                if (cfg_.pinned_key && !(*cfg_.pinned_key == hello.public_key)) {
                    return reject("public key does not match");
                }
                hello_ = std::move(hello);
                if (hello_->scheme == Scheme::Dh) {
                    auto [state, challenge] = dh_make_challenge(hello_->params, hello_->public_key, rng);
                    transcript_.verifier_audit = state.challenge_poly;
                    dh_state_ = std::move(state);
                    state_ = State::AwaitDhResponse;
                    return send(make_frame(MsgType::DhChallenge, sid_, 0, encode_element(challenge.u)));
                }
                if (hello_->rounds < 1 || (cfg_.rounds && *cfg_.rounds != hello_->rounds)) {
                    return reject("round count not acceptable");
                }
                round_ = 1;
                state_ = State::AwaitFsCommit;
                return {};
            }
            case State::AwaitDhResponse: {
                if (in.type != MsgType::DhResponse || in.round_index != 0) {
                    return reject(std::string("expected DH_RESPONSE, got ") + to_string(in.type));
                }
                const DhResponse response{decode_digest(in.payload)};
                return dh_verify(*dh_state_, response) ? accept() : reject("response digest mismatch");
            }
            case State::AwaitFsCommit: {
                if (in.type != MsgType::FsCommit || in.round_index != round_) {
                    return reject(std::string("expected FS_COMMIT, got ") + to_string(in.type));
                }
                fs_commitment_ = FsCommitment{decode_element_in(hello_->params.ring, in.payload)};
                fs_challenge_ = fs_challenge(rng);
                state_ = State::AwaitFsResponse;
                return send(make_frame(MsgType::FsChallenge, sid_, round_, encode_challenge_bit(fs_challenge_.c)));
            }
            case State::AwaitFsResponse: {
                if (in.type != MsgType::FsResponse || in.round_index != round_) {
                    return reject(std::string("expected FS_RESPONSE, got ") + to_string(in.type));
                }
                const FsResponse response{decode_element_in(hello_->params.ring, in.payload)};
                if (!fs_verify_round(hello_->params, hello_->public_key, *fs_commitment_, fs_challenge_, response)) {
                    return reject("round " + std::to_string(round_) + " failed verification");
                }
                completed_rounds_ = round_;
                if (round_ == hello_->rounds) {
                    return accept();
                }
                ++round_;
                state_ = State::AwaitFsCommit;
                return {};
            }
            case State::Accepted:
            case State::Rejected:
                break;
        }
    } catch (const std::exception& e) {
        return reject(std::string("bad message: ") + e.what());
    }
    return {};
}

ProverSession::ProverSession(Config cfg, KeyPair kp)
    : cfg_(cfg), params_(kp.params), pk_(kp.public_key), kp_(std::move(kp)) {
    if (cfg_.scheme == Scheme::Fs) {
        fs_prover_ = std::make_unique<HonestFsProver>(*kp_);
    }
}

ProverSession::ProverSession(Config cfg, SystemParams params, PublicKey pk, std::unique_ptr<FsProver> strategy)
    : cfg_(cfg), params_(std::move(params)), pk_(std::move(pk)), fs_prover_(std::move(strategy)) {
    if (cfg_.scheme != Scheme::Fs || !fs_prover_) {
        throw std::invalid_argument("a custom prover strategy needs the FS scheme");
    }
}

Frame ProverSession::sent(Frame f) {
    transcript_.record(Direction::ProverToVerifier, f);
    return f;
}

std::vector<Frame> ProverSession::start(RandomSource& rng) {
    if (state_ != State::Idle) {
        throw std::logic_error("prover session already started");
    }
    if (cfg_.scheme == Scheme::Fs && cfg_.rounds < 1) {
        throw std::invalid_argument("round count k must be >= 1");
    }
    sid_ = cfg_.session_id ? *cfg_.session_id : draw_session_id(rng);
    std::vector<Frame> out;
    out.push_back(sent(make_frame(MsgType::Hello, sid_, 0,
                                  encode_hello(Hello{cfg_.scheme, cfg_.rounds, params_, pk_}))));
    if (cfg_.scheme == Scheme::Dh) {
        state_ = State::AwaitDhChallenge;
    } else {
        round_ = 1;
        out.push_back(sent(make_frame(MsgType::FsCommit, sid_, round_, encode_element(fs_prover_->commit(rng).u))));
        state_ = State::AwaitFsChallenge;
    }
    return out;
}

StepResult ProverSession::finish(Decision d, const std::string& reason) {
    state_ = d == Decision::Accept ? State::Accepted : State::Rejected;
    decision_ = d;
    reason_ = reason;
    StepResult r;
    r.decision = d;
    return r;
}

StepResult ProverSession::abort(const std::string& reason) {
    if (terminal()) return {};
    return finish(Decision::Reject, reason);
}

StepResult ProverSession::step(const Frame& in, RandomSource& rng) {
    if (terminal()) {
        return {};
    }
    if (in.session_id != sid_) {
        return finish(Decision::Reject, "session id mismatch");
    }
    transcript_.record(Direction::VerifierToProver, in);
    if (in.type == MsgType::Reject) {
        return finish(Decision::Reject, payload_text(in));
    }
    if (in.type == MsgType::Accept) {
        if (state_ != State::AwaitDecision) {
            return finish(Decision::Reject, "ACCEPT before the protocol finished");
        }
        return finish(Decision::Accept, "");
    }
    try {
        if (state_ == State::AwaitDhChallenge && in.type == MsgType::DhChallenge && in.round_index == 0) {
            const DhChallenge challenge{decode_element_in(params_.ring, in.payload)};
            const auto w = dh_respond(*kp_, challenge).w;
            StepResult r;
            r.outgoing.push_back(sent(make_frame(MsgType::DhResponse, sid_, 0, Bytes(w.bytes.begin(), w.bytes.end()))));
            state_ = State::AwaitDecision;
            return r;
        }
        if (state_ == State::AwaitFsChallenge && in.type == MsgType::FsChallenge && in.round_index == round_) {
            const FsChallenge c{decode_challenge_bit(in.payload)};
            StepResult r;
            r.outgoing.push_back(
                sent(make_frame(MsgType::FsResponse, sid_, round_, encode_element(fs_prover_->respond(c).v))));
            if (round_ < cfg_.rounds) {
                ++round_;
                r.outgoing.push_back(
                    sent(make_frame(MsgType::FsCommit, sid_, round_, encode_element(fs_prover_->commit(rng).u))));
            } else {
                state_ = State::AwaitDecision;
            }
            return r;
        }
    } catch (const std::exception& e) {
        return finish(Decision::Reject, std::string("bad message: ") + e.what());
    }
    return finish(Decision::Reject, std::string("unexpected ") + to_string(in.type));
}

LocalRun run_in_process(ProverSession& prover, VerifierSession& verifier, RandomSource& prover_rng,
                        RandomSource& verifier_rng) {
    std::deque<Frame> to_verifier;
    for (auto& f : prover.start(prover_rng)) to_verifier.push_back(std::move(f));
    while (!verifier.terminal() && !to_verifier.empty()) {
        std::deque<Frame> to_prover;
        while (!to_verifier.empty() && !verifier.terminal()) {
            auto r = verifier.step(to_verifier.front(), verifier_rng);
            to_verifier.pop_front();
            for (auto& f : r.outgoing) to_prover.push_back(std::move(f));
        }
        for (auto& f : to_prover) {
            auto r = prover.step(f, prover_rng);
            for (auto& g : r.outgoing) to_verifier.push_back(std::move(g));
        }
    }
    verifier.abort("prover stopped before the protocol finished");

    LocalRun run;
    run.verifier_decision = *verifier.decision();
    run.prover_decision = prover.decision();
    run.transcript = verifier.transcript();
    for (const auto& e : run.transcript.entries) {
        const auto t = e.frame.type;
        if (t != MsgType::Hello && t != MsgType::Accept && t != MsgType::Reject) ++run.protocol_frames;
    }
    return run;
}

std::optional<bool> replay_decision(const Transcript& t) {
    try {
        if (!t.well_ordered()) return false;
        const auto hello = t.hello();
        if (hello.scheme == Scheme::Dh) {
            if (!t.verifier_audit) return std::nullopt;
            const auto [state, challenge] = dh_challenge_for(hello.params, hello.public_key, *t.verifier_audit);
            std::optional<RingElement> sent_u;
            std::optional<Digest> w;
            for (const auto& e : t.entries) {
                if (e.frame.type == MsgType::DhChallenge) sent_u = decode_element_in(hello.params.ring, e.frame.payload);
                if (e.frame.type == MsgType::DhResponse) w = decode_digest(e.frame.payload);
            }
            if (!sent_u || !w || !(*sent_u == challenge.u)) return false;
            return dh_verify(state, DhResponse{*w});
        }
        const auto rounds = fs_rounds(t);
        if (hello.rounds < 1 || rounds.size() != hello.rounds) return false;
        for (const auto& r : rounds) {
            if (!fs_verify_round(hello.params, hello.public_key, FsCommitment{r.u}, FsChallenge{r.c},
                                 FsResponse{r.v})) {
                return false;
            }
        }
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace ncauth
