#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/lab.hpp"

namespace bergman::lab {

namespace {

std::string to_hex(const unsigned char* data, unsigned int n) {
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < n; ++i) os << std::setw(2) << static_cast<int>(data[i]);
    return os.str();
}

}  // namespace

std::string sha256_bytes(const std::string& bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw NumericalError("sha256: digest computation failed");
    return to_hex(digest, len);
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("sha256_file: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_bytes(buf.str());
}

nlohmann::json to_json(const RunManifest& m) {
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : m.files) files.push_back({{"path", f.path}, {"bytes", f.bytes}, {"sha256", f.sha256}});
    nlohmann::json timings = nlohmann::json::array();
    for (const auto& [stage, seconds] : m.timings) timings.push_back({{"stage", stage}, {"seconds", seconds}});
    return {{"scenario", m.scenario}, {"versions", m.versions}, {"timings", timings}, {"files", files}};
}

}  // namespace bergman::lab
