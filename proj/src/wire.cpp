#include "ncauth/wire.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <utility>

namespace ncauth {

namespace {

constexpr std::uint8_t kFrameMagic[4] = {'N', 'C', 'R', 'A'};
constexpr std::uint8_t kTranscriptMagic[4] = {'N', 'C', 'R', 'T'};
constexpr std::uint8_t kTranscriptVersion = 0x01;
constexpr std::uint8_t kAuditRecord = 0x10;

// Position of a message within its round, for transcript ordering.
int intra_round_rank(MsgType t) {
    switch (t) {
        case MsgType::Hello:
        case MsgType::FsCommit:
            return 0;
        case MsgType::DhChallenge:
        case MsgType::FsChallenge:
            return 1;
        case MsgType::DhResponse:
        case MsgType::FsResponse:
            return 2;
        case MsgType::Accept:
        case MsgType::Reject:
            return 3;
    }
    return 4;
}

}  // namespace

bool is_known_msg_type(std::uint8_t v) noexcept {
    switch (static_cast<MsgType>(v)) {
        case MsgType::Hello:
        case MsgType::DhChallenge:
        case MsgType::DhResponse:
        case MsgType::FsCommit:
        case MsgType::FsChallenge:
        case MsgType::FsResponse:
        case MsgType::Accept:
        case MsgType::Reject:
            return true;
    }
    return false;
}

const char* to_string(MsgType t) noexcept {
    switch (t) {
        case MsgType::Hello: return "HELLO";
        case MsgType::DhChallenge: return "DH_CHALLENGE";
        case MsgType::DhResponse: return "DH_RESPONSE";
        case MsgType::FsCommit: return "FS_COMMIT";
        case MsgType::FsChallenge: return "FS_CHALLENGE";
        case MsgType::FsResponse: return "FS_RESPONSE";
        case MsgType::Accept: return "ACCEPT";
        case MsgType::Reject: return "REJECT";
    }
    return "UNKNOWN";
}

const char* to_string(Scheme s) noexcept { return s == Scheme::Dh ? "dh" : "fs"; }

Bytes encode_frame(const Frame& f) {
    if (f.payload.size() > Frame::kMaxPayload) {
        throw std::invalid_argument("frame payload exceeds maximum size");
    }
    Bytes out;
    out.reserve(Frame::kHeaderSize + f.payload.size());
    out.insert(out.end(), std::begin(kFrameMagic), std::end(kFrameMagic));
    out.push_back(Frame::kVersion);
    out.push_back(static_cast<std::uint8_t>(f.type));
    out.insert(out.end(), f.session_id.begin(), f.session_id.end());
    put_u16(out, f.round_index);
    put_u32(out, static_cast<std::uint32_t>(f.payload.size()));
    put_bytes(out, f.payload);
    return out;
}

FrameHeader decode_frame_header(std::span<const std::uint8_t> header) {
    using Kind = FrameError::Kind;
    if (header.size() < Frame::kHeaderSize) {
        throw FrameError(Kind::MalformedHeader, "frame header shorter than 28 bytes");
    }
    if (!std::equal(std::begin(kFrameMagic), std::end(kFrameMagic), header.begin())) {
        throw FrameError(Kind::MalformedHeader, "bad frame magic");
    }
    if (header[4] != Frame::kVersion) {
        throw FrameError(Kind::MalformedHeader, "unsupported frame version");
    }
    if (!is_known_msg_type(header[5])) {
        throw FrameError(Kind::UnknownMsgType, "unknown message type " + std::to_string(header[5]));
    }
    FrameHeader h{};
    h.type = static_cast<MsgType>(header[5]);
    std::copy_n(header.begin() + 6, h.session_id.size(), h.session_id.begin());
    h.round_index = get_u16(header, 22);
    h.payload_len = get_u32(header, 24);
    if (h.payload_len > Frame::kMaxPayload) {
        throw FrameError(Kind::MalformedHeader, "payload length exceeds maximum");
    }
    return h;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
    using Kind = FrameError::Kind;
    const auto h = decode_frame_header(bytes);
    const std::size_t available = bytes.size() - Frame::kHeaderSize;
    if (h.payload_len > available) {
        throw FrameError(Kind::TruncatedPayload, "payload length " + std::to_string(h.payload_len) +
                                                     " exceeds the " + std::to_string(available) +
                                                     " bytes present");
    }
    if (h.payload_len < available) {
        throw FrameError(Kind::TrailingBytes, "bytes after frame payload");
    }
    Frame f;
    f.type = h.type;
    f.session_id = h.session_id;
    f.round_index = h.round_index;
    f.payload.assign(bytes.begin() + Frame::kHeaderSize, bytes.end());
    return f;
}

Bytes encode_hello(const Hello& h) {
    const auto& p = h.params;
    if (p.sampler.max_coefficient > 0xFFFFFFFFull) {
        throw std::invalid_argument("sampler max coefficient does not fit the HELLO encoding");
    }
    if (p.hash_id.size() > 255) {
        throw std::invalid_argument("hash identifier too long");
    }
    Bytes out;
    out.push_back(static_cast<std::uint8_t>(h.scheme));
    put_u16(out, h.rounds);
    out.push_back(static_cast<std::uint8_t>(p.ring.dimension()));
    put_u32(out, p.ring.modulus());
    put_u32(out, p.left_exponent);
    put_u32(out, p.right_exponent);
    out.push_back(static_cast<std::uint8_t>(p.hash_id.size()));
    out.insert(out.end(), p.hash_id.begin(), p.hash_id.end());
    put_u32(out, p.sampler.max_degree);
    put_u32(out, static_cast<std::uint32_t>(p.sampler.max_coefficient));
    out.push_back(p.sampler.require_nonzero_eval ? 1 : 0);
    put_bytes(out, encode_element(h.public_key.base));
    put_bytes(out, encode_element(h.public_key.middle));
    put_bytes(out, encode_element(h.public_key.target));
    return out;
}

Hello decode_hello(std::span<const std::uint8_t> payload) {
    ByteReader<DecodeError> in(payload, "HELLO");
    const auto scheme = in.u8();
    if (scheme != static_cast<std::uint8_t>(Scheme::Dh) && scheme != static_cast<std::uint8_t>(Scheme::Fs)) {
        throw DecodeError("HELLO: unknown scheme");
    }
    const auto rounds = in.u16();
    SystemParams params;
    const std::uint32_t d = in.u8();
    const std::uint32_t q = in.u32();
    try {
        params.ring = RingDescriptor(d, q);
    } catch (const std::invalid_argument& e) {
        throw DecodeError(std::string("HELLO: ") + e.what());
    }
    params.left_exponent = in.u32();
    params.right_exponent = in.u32();
    auto hash = in.take(in.u8());
    params.hash_id.assign(hash.begin(), hash.end());
    params.sampler.max_degree = in.u32();
    params.sampler.max_coefficient = in.u32();
    params.sampler.require_nonzero_eval = in.u8() != 0;
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw DecodeError(std::string("HELLO: ") + e.what());
    }
    const auto size = params.ring.encoded_size();
    auto base = decode_element_in(params.ring, in.take(size));
    auto middle = decode_element_in(params.ring, in.take(size));
    auto target = decode_element_in(params.ring, in.take(size));
    if (!in.done()) {
        throw DecodeError("HELLO: trailing bytes");
    }
    return Hello{static_cast<Scheme>(scheme), rounds, std::move(params),
                 PublicKey{std::move(base), std::move(middle), std::move(target)}};
}

Bytes encode_challenge_bit(bool c) { return Bytes{static_cast<std::uint8_t>(c ? 1 : 0)}; }

bool decode_challenge_bit(std::span<const std::uint8_t> payload) {
    if (payload.size() != 1 || payload[0] > 1) {
        throw DecodeError("challenge bit must be a single 0x00 or 0x01 byte");
    }
    return payload[0] == 1;
}

Digest decode_digest(std::span<const std::uint8_t> payload) {
    if (payload.size() != Digest::kSize) {
        throw DecodeError("digest payload must be 32 bytes");
    }
    Digest d;
    std::copy(payload.begin(), payload.end(), d.bytes.begin());
    return d;
}

RingElement decode_element_in(const RingDescriptor& ring, std::span<const std::uint8_t> payload) {
    auto r = decode_element(payload);
    if (!(r.descriptor() == ring)) {
        throw DecodeError("element belongs to a different ring");
    }
    return r;
}

Hello Transcript::hello() const {
    if (entries.empty() || entries.front().frame.type != MsgType::Hello) {
        throw TranscriptError("transcript does not start with HELLO");
    }
    return decode_hello(entries.front().frame.payload);
}

std::optional<bool> Transcript::recorded_decision() const {
    if (entries.empty()) return std::nullopt;
    const auto type = entries.back().frame.type;
    if (type == MsgType::Accept) return true;
    if (type == MsgType::Reject) return false;
    return std::nullopt;
}

bool Transcript::well_ordered() const {
    for (std::size_t i = 1; i < entries.size(); ++i) {
        const auto& a = entries[i - 1].frame;
        const auto& b = entries[i].frame;
        const auto ka = std::pair(a.round_index, intra_round_rank(a.type));
        const auto kb = std::pair(b.round_index, intra_round_rank(b.type));
        if (!(ka < kb)) return false;
    }
    return true;
}

Bytes encode_transcript(const Transcript& t) {
    Bytes out(std::begin(kTranscriptMagic), std::end(kTranscriptMagic));
    out.push_back(kTranscriptVersion);
    for (const auto& e : t.entries) {
        const auto frame = encode_frame(e.frame);
        put_u32(out, static_cast<std::uint32_t>(frame.size() + 1));
        out.push_back(static_cast<std::uint8_t>(e.direction));
        put_bytes(out, frame);
    }
    if (t.verifier_audit) {
        const auto text = to_string(*t.verifier_audit);
        put_u32(out, static_cast<std::uint32_t>(text.size() + 1));
        out.push_back(kAuditRecord);
        out.insert(out.end(), text.begin(), text.end());
    }
    return out;
}

Transcript decode_transcript(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 5 || !std::equal(std::begin(kTranscriptMagic), std::end(kTranscriptMagic), bytes.begin())) {
        throw TranscriptError("not a transcript file");
    }
    if (bytes[4] != kTranscriptVersion) {
        throw TranscriptError("unsupported transcript version");
    }
    Transcript t;
    std::size_t pos = 5;
    while (pos < bytes.size()) {
        if (bytes.size() - pos < 4) throw TranscriptError("truncated record length");
        const std::uint32_t len = get_u32(bytes, pos);
        pos += 4;
        if (len == 0 || bytes.size() - pos < len) throw TranscriptError("truncated record");
        const auto kind = bytes[pos];
        auto body = bytes.subspan(pos + 1, len - 1);
        pos += len;
        if (kind == static_cast<std::uint8_t>(Direction::ProverToVerifier) ||
            kind == static_cast<std::uint8_t>(Direction::VerifierToProver)) {
            t.record(static_cast<Direction>(kind), decode_frame(body));
        } else if (kind == kAuditRecord) {
            t.verifier_audit = parse_polynomial(std::string(body.begin(), body.end()));
        } else {
            throw TranscriptError("unknown transcript record kind");
        }
    }
    return t;
}

void write_transcript(const std::string& path, const Transcript& t) {
    const auto bytes = encode_transcript(t);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw TranscriptError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw TranscriptError("failed writing " + path);
}

Transcript read_transcript(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw TranscriptError("cannot open " + path);
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_transcript(bytes);
}

}  // namespace ncauth
