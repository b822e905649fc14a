#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ncauth/bytes.hpp"
#include "ncauth/keys.hpp"
#include "ncauth/polynomial.hpp"
#include "ncauth/ring.hpp"

namespace ncauth {

enum class MsgType : std::uint8_t {
    Hello = 0x00,
    DhChallenge = 0x01,
    DhResponse = 0x02,
    FsCommit = 0x10,
    FsChallenge = 0x11,
    FsResponse = 0x12,
    Accept = 0x7E,
    Reject = 0x7F,
};

bool is_known_msg_type(std::uint8_t v) noexcept;
const char* to_string(MsgType t) noexcept;

using SessionId = std::array<std::uint8_t, 16>;

/**
 * Wire frame. Header layout (28 bytes, big-endian):
 *
 *   0  magic "NCRA"
 *   4  version 0x01
 *   5  msg_type
 *   6  session_id (16 bytes)
 *  22  round_index (u16)
 *  24  payload_len (u32)
 *  28  payload
 */
struct Frame {
    static constexpr std::size_t kHeaderSize = 28;
    static constexpr std::uint8_t kVersion = 0x01;
    static constexpr std::uint32_t kMaxPayload = 1u << 20;

    MsgType type = MsgType::Hello;
    SessionId session_id{};
    std::uint16_t round_index = 0;
    Bytes payload;

    friend bool operator==(const Frame&, const Frame&) = default;
};

inline Frame make_frame(MsgType type, const SessionId& sid, std::uint16_t round, Bytes payload = {}) {
    return Frame{type, sid, round, std::move(payload)};
}

class FrameError : public std::runtime_error {
public:
    enum class Kind { MalformedHeader, TruncatedPayload, UnknownMsgType, TrailingBytes };

    FrameError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

Bytes encode_frame(const Frame& f);

// Requires exactly one frame in `bytes`.
Frame decode_frame(std::span<const std::uint8_t> bytes);

struct FrameHeader {
    MsgType type;
    SessionId session_id;
    std::uint16_t round_index;
    std::uint32_t payload_len;
};

// Validates magic, version, type and the payload bound of a 28-byte header.
FrameHeader decode_frame_header(std::span<const std::uint8_t> header);

enum class Scheme : std::uint8_t { Dh = 0x01, Fs = 0x02 };

const char* to_string(Scheme s) noexcept;

// HELLO payload: the prover announces scheme, round count, parameters and
// public key.
struct Hello {
    Scheme scheme = Scheme::Dh;
    std::uint16_t rounds = 1;
    SystemParams params;
    PublicKey public_key;
};

Bytes encode_hello(const Hello& h);
Hello decode_hello(std::span<const std::uint8_t> payload);

// Payload helpers for the per-message bodies.
Bytes encode_challenge_bit(bool c);
bool decode_challenge_bit(std::span<const std::uint8_t> payload);
Digest decode_digest(std::span<const std::uint8_t> payload);

// Reads an element and checks it belongs to `ring`.
RingElement decode_element_in(const RingDescriptor& ring, std::span<const std::uint8_t> payload);

enum class Direction : std::uint8_t { ProverToVerifier = 0x01, VerifierToProver = 0x02 };

struct TranscriptEntry {
    Direction direction;
    Frame frame;

    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

/**
 * Ordered record of one session. The HELLO frame carries the parameters and
 * public key. For DH sessions recorded on the verifier side, the challenge
 * polynomial is kept as an audit field; it never travels on the wire.
 */
struct Transcript {
    std::vector<TranscriptEntry> entries;
    std::optional<IntPolynomial> verifier_audit;

    void record(Direction dir, Frame f) { entries.push_back({dir, std::move(f)}); }

    // Decoded first frame; throws TranscriptError if it is not a HELLO.
    Hello hello() const;

    // Accept/Reject from the final decision frame, if present.
    std::optional<bool> recorded_decision() const;

    // Frames strictly increasing in (round_index, position within round).
    bool well_ordered() const;

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

class TranscriptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * `.ncrt` layout: "NCRT" | 0x01 | records, each record being
 * u32 BE length | kind | body. Kinds: 0x01/0x02 an encoded frame in that
 * direction, 0x10 the verifier audit polynomial in text form.
 */
Bytes encode_transcript(const Transcript& t);
Transcript decode_transcript(std::span<const std::uint8_t> bytes);
void write_transcript(const std::string& path, const Transcript& t);
Transcript read_transcript(const std::string& path);

}  // namespace ncauth
