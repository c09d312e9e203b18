#pragma once

#include <cstdint>
#include <string>

#include "finset/curation.hpp"
#include "finset/dedup.hpp"
#include "finset/retrieval.hpp"

namespace finset {

struct CliConfig {
    CurationConfig curation;
    DedupConfig dedup;
    RetrievalConfig retrieval;
    std::uint64_t seed = 0;
    bool strict_io = false;

    void validate() const;

    // Stable hex hash of the canonicalized (sorted-key, default-filled) content.
    std::string digest() const;
};

CliConfig load_config(const std::string& path);  // throws ConfigError
CliConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const CliConfig& config);

}  // namespace finset
