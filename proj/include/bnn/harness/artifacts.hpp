#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "json.hpp"

namespace bnn::harness {

// shortest decimal form that parses back to the same double
std::string format_double(double v);

std::string sha256_hex(const std::string& bytes);

// Funnels every artifact write through one place so the manifest always
// lists each emitted file with its content hash. Writes are atomic enough
// for our purposes (whole-string, then close) and never embed timestamps,
// keeping reruns byte-identical.
class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    // writes bytes to root/relative, creating parents; records the hash
    void write(const std::string& relative, const std::string& bytes);

    void write_json(const std::string& relative, const nlohmann::json& j);

    const std::map<std::string, std::string>& hashes() const { return hashes_; }

    // manifest_<command>.json with the plan echo and every artifact hash
    void write_manifest(const std::string& command, const nlohmann::json& plan);

private:
    std::filesystem::path root_;
    std::map<std::string, std::string> hashes_;
};

} // namespace bnn::harness
