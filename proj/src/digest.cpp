#include "ruledistill/digest.hpp"

#include <fstream>
#include <iterator>
#include <vector>

#include <openssl/sha.h>

#include "ruledistill/errors.hpp"

namespace rd {

Sha256 sha256(std::span<const std::uint8_t> bytes) {
    Sha256 out{};
    SHA256(bytes.data(), bytes.size(), out.data());
    return out;
}

Sha256 sha256(std::string_view text) {
    return sha256(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string to_hex(const Sha256& digest) {
    static constexpr char hex[] = "0123456789abcdef";
    std::string s;
    s.reserve(64);
    for (auto b : digest) {
        s += hex[b >> 4];
        s += hex[b & 0xf];
    }
    return s;
}

std::string file_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return to_hex(sha256(std::string_view(data.data(), data.size())));
}

} // namespace rd
