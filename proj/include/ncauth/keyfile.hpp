#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "ncauth/keys.hpp"

namespace ncauth {

class KeyFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// JSON document with "params", "private" {"f": text form} and "public"
// {"p","q","y": hex of canonical encodings}. Output is byte-stable.
std::string serialize_keypair(const KeyPair& kp);
KeyPair parse_keypair(const std::string& text);

// Parameters and public key only; the private section may be absent.
std::pair<SystemParams, PublicKey> parse_public_key(const std::string& text);

void save_keypair(const std::string& path, const KeyPair& kp);
KeyPair load_keypair(const std::string& path);
std::pair<SystemParams, PublicKey> load_public_key(const std::string& path);

}  // namespace ncauth
