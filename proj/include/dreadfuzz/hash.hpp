#pragma once

#include <string>
#include <string_view>

namespace dreadfuzz::hash {

// Lowercase hex SHA-256 of the bytes. Reports pin the rulebase they
// were produced with by hashing its canonical serialization.
std::string sha256_hex(std::string_view data);

}  // namespace dreadfuzz::hash
