#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace wvrecon {

// Hex digest of the SHA-256 of the given bytes.
std::string sha256_hex(std::span<const unsigned char> data);
std::string sha256_hex(const std::string& data);

}  // namespace wvrecon
