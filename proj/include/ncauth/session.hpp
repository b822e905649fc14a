#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncauth/auth_dh.hpp"
#include "ncauth/auth_fs.hpp"
#include "ncauth/keys.hpp"
#include "ncauth/random.hpp"
#include "ncauth/wire.hpp"

namespace ncauth {

enum class Decision { Accept, Reject };

const char* to_string(Decision d) noexcept;

struct StepResult {
    std::vector<Frame> outgoing;
    // Set exactly once per session, on the step that reaches a terminal state.
    std::optional<Decision> decision;
};

/**
 * Verifier side of either scheme, driven one incoming frame at a time.
 *
 *   DH: AwaitHello -> AwaitDhResponse -> Accepted | Rejected
 *   FS: AwaitHello -> (AwaitFsCommit -> AwaitFsResponse) x k -> Accepted | Rejected
 *
 * Any frame that does not fit the current state (wrong type, session id,
 * round index, or an undecodable payload) ends the session with REJECT.
 * Once terminal, further frames are ignored.
 */
class VerifierSession {
public:
    enum class State { AwaitHello, AwaitDhResponse, AwaitFsCommit, AwaitFsResponse, Accepted, Rejected };

    struct Config {
        // Only this scheme is accepted when set.
        std::optional<Scheme> scheme;
        // FS round count the prover must announce; any k >= 1 when unset.
        std::optional<std::uint16_t> rounds;
        // Parameters and key the HELLO must match when set.
        std::optional<SystemParams> pinned_params;
        std::optional<PublicKey> pinned_key;
    };

    explicit VerifierSession(Config cfg = {}) : cfg_(std::move(cfg)) {}

    StepResult step(const Frame& incoming, RandomSource& rng);

    // Ends the session from outside (transport failure, malformed bytes).
    StepResult abort(const std::string& reason);

    State state() const noexcept { return state_; }
    bool terminal() const noexcept { return state_ == State::Accepted || state_ == State::Rejected; }
    std::optional<Decision> decision() const noexcept { return decision_; }
    const std::string& reason() const noexcept { return reason_; }
    std::uint16_t completed_rounds() const noexcept { return completed_rounds_; }

    // Every frame seen or sent, plus the DH challenge polynomial for audit.
    const Transcript& transcript() const noexcept { return transcript_; }

private:
    StepResult reject(const std::string& reason);
    StepResult accept();
    StepResult send(Frame f);

    Config cfg_;
    State state_ = State::AwaitHello;
    std::optional<Decision> decision_;
    std::string reason_;
    std::optional<Hello> hello_;
    SessionId sid_{};
    std::uint16_t round_ = 0;
    std::uint16_t completed_rounds_ = 0;
    std::optional<DhVerifierState> dh_state_;
    std::optional<FsCommitment> fs_commitment_;
    FsChallenge fs_challenge_{};
    Transcript transcript_;
};

const char* to_string(VerifierSession::State s) noexcept;

/**
 * Prover side. start() emits HELLO (and the first FS_COMMIT); each incoming
 * challenge produces the response and, for FS, the next commitment. The
 * verifier's ACCEPT or REJECT ends the session.
 */
class ProverSession {
public:
    enum class State { Idle, AwaitDhChallenge, AwaitFsChallenge, AwaitDecision, Accepted, Rejected };

    struct Config {
        Scheme scheme = Scheme::Dh;
        std::uint16_t rounds = 1;
        std::optional<SessionId> session_id;
    };

    // Honest prover holding the key pair.
    ProverSession(Config cfg, KeyPair kp);

    // FS prover with a custom strategy (e.g. CheatingFsProver) claiming `pk`.
    ProverSession(Config cfg, SystemParams params, PublicKey pk, std::unique_ptr<FsProver> strategy);

    std::vector<Frame> start(RandomSource& rng);
    StepResult step(const Frame& incoming, RandomSource& rng);
    StepResult abort(const std::string& reason);

    State state() const noexcept { return state_; }
    bool terminal() const noexcept { return state_ == State::Accepted || state_ == State::Rejected; }
    std::optional<Decision> decision() const noexcept { return decision_; }
    const std::string& reason() const noexcept { return reason_; }
    const SessionId& session_id() const noexcept { return sid_; }
    const Transcript& transcript() const noexcept { return transcript_; }

private:
    StepResult finish(Decision d, const std::string& reason);
    Frame sent(Frame f);

    Config cfg_;
    SystemParams params_;
    PublicKey pk_;
    std::optional<KeyPair> kp_;
    std::unique_ptr<FsProver> fs_prover_;
    State state_ = State::Idle;
    std::optional<Decision> decision_;
    std::string reason_;
    SessionId sid_{};
    std::uint16_t round_ = 0;
    Transcript transcript_;
};

struct LocalRun {
    Decision verifier_decision = Decision::Reject;
    std::optional<Decision> prover_decision;
    // Verifier-side transcript, including the DH audit polynomial.
    Transcript transcript;
    std::size_t protocol_frames = 0;
};

// Connects the two state machines in memory until the verifier decides.
LocalRun run_in_process(ProverSession& prover, VerifierSession& verifier, RandomSource& prover_rng,
                        RandomSource& verifier_rng);

/**
 * Re-derives the verifier's decision from a recorded transcript using the
 * scheme verification equations. DH needs the audit polynomial; returns
 * nullopt when it is missing.
 */
std::optional<bool> replay_decision(const Transcript& t);

}  // namespace ncauth
