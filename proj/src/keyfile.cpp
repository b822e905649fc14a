#include "ncauth/keyfile.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ncauth/bytes.hpp"
#include "ncauth/wire.hpp"

namespace ncauth {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "ncauth-keypair-v1";

std::string element_hex(const RingElement& r) { return to_hex(encode_element(r)); }

RingElement element_from_hex(const RingDescriptor& ring, const json& j) {
    return decode_element_in(ring, from_hex(j.get<std::string>()));
}

json params_json(const SystemParams& p) {
    return json{{"dimension", p.ring.dimension()},
                {"modulus", p.ring.modulus()},
                {"m", p.left_exponent},
                {"n", p.right_exponent},
                {"hash", p.hash_id},
                {"max_degree", p.sampler.max_degree},
                {"max_coefficient", p.sampler.max_coefficient}};
}

SystemParams params_from_json(const json& j) {
    SystemParams p;
    p.ring = RingDescriptor(j.at("dimension").get<std::uint32_t>(), j.at("modulus").get<std::uint64_t>());
    p.left_exponent = j.at("m").get<std::uint32_t>();
    p.right_exponent = j.at("n").get<std::uint32_t>();
    p.hash_id = j.at("hash").get<std::string>();
    p.sampler.max_degree = j.at("max_degree").get<std::uint32_t>();
    p.sampler.max_coefficient = j.at("max_coefficient").get<std::uint64_t>();
    p.sampler.require_nonzero_eval = true;
    p.validate();
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw KeyFileError("cannot open key file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename F>
auto guarded(F&& f) {
    try {
        return f();
    } catch (const KeyFileError&) {
        throw;
    } catch (const std::exception& e) {
        throw KeyFileError(std::string("invalid key file: ") + e.what());
    }
}

}  // namespace

std::string serialize_keypair(const KeyPair& kp) {
    json j{{"format", kFormat},
           {"params", params_json(kp.params)},
           {"private", {{"f", to_string(kp.private_poly)}}},
           {"public",
            {{"p", element_hex(kp.public_key.base)},
             {"q", element_hex(kp.public_key.middle)},
             {"y", element_hex(kp.public_key.target)}}}};
    return j.dump(2) + "\n";
}

std::pair<SystemParams, PublicKey> parse_public_key(const std::string& text) {
    return guarded([&] {
        const auto j = json::parse(text);
        if (j.at("format").get<std::string>() != kFormat) {
            throw KeyFileError("unsupported key file format");
        }
        auto params = params_from_json(j.at("params"));
        const auto& pub = j.at("public");
        PublicKey pk{element_from_hex(params.ring, pub.at("p")), element_from_hex(params.ring, pub.at("q")),
                     element_from_hex(params.ring, pub.at("y"))};
        return std::pair{std::move(params), std::move(pk)};
    });
}

KeyPair parse_keypair(const std::string& text) {
    return guarded([&] {
        auto [params, pk] = parse_public_key(text);
        const auto j = json::parse(text);
        auto f = parse_polynomial(j.at("private").at("f").get<std::string>());
        auto kp = keypair_from_parts(params, pk.base, pk.middle, f);
        if (!(kp.public_key.target == pk.target)) {
            throw KeyFileError("stored public key does not match the private polynomial");
        }
        return kp;
    });
}

void save_keypair(const std::string& path, const KeyPair& kp) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw KeyFileError("cannot write key file " + path);
    out << serialize_keypair(kp);
    if (!out) throw KeyFileError("failed writing key file " + path);
}

KeyPair load_keypair(const std::string& path) { return parse_keypair(read_file(path)); }

std::pair<SystemParams, PublicKey> load_public_key(const std::string& path) {
    return parse_public_key(read_file(path));
}

}  // namespace ncauth
