#include "bnn/harness/artifacts.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace bnn::harness {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
}

void ArtifactWriter::write(const std::string& relative, const std::string& bytes) {
    const std::filesystem::path path = root_ / relative;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw std::runtime_error("write failed: " + path.string());
    hashes_[relative] = sha256_hex(bytes);
}

void ArtifactWriter::write_json(const std::string& relative, const nlohmann::json& j) {
    write(relative, j.dump(2) + "\n");
}

void ArtifactWriter::write_manifest(const std::string& command, const nlohmann::json& plan) {
    nlohmann::json artifacts = nlohmann::json::object();
    for (const auto& [path, hash] : hashes_) artifacts[path] = hash;
    const nlohmann::json manifest = {
        {"command", command}, {"plan", plan}, {"artifacts", artifacts}};
    const std::string text = manifest.dump(2) + "\n";
    const std::filesystem::path path = root_ / ("manifest_" + command + ".json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
}

} // namespace bnn::harness
