#include "dreadfuzz/hash.hpp"

#include <openssl/evp.h>

#include "dreadfuzz/errors.hpp"

namespace dreadfuzz::hash {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(),
                   nullptr) != 1) {
        throw Error(ErrorKind::Validation, "sha256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0x0f]);
    }
    return out;
}

}  // namespace dreadfuzz::hash
