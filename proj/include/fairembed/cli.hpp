#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fairembed/trainer.hpp"

namespace fairembed::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64-bit over file contents (moving a file does not change its digest).
std::uint64_t fnv1a64_file(const std::string& path);

// Flat key=value record written next to every output file; in deterministic
// mode it fully determines the run.
struct RunManifest {
    std::string subcommand;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> config;         // resolved options
    std::map<std::string, std::string> input_digests;  // role -> fnv1a64:hex

    void add_input(const std::string& role, const std::string& path);
    std::string serialize(const std::string& output_path) const;
    // Writes <output_path>.manifest.
    void write_for(const std::string& output_path) const;
};

// Defaults, then "key = value" lines from `path` (empty path skips the
// file), then overrides given as "key=value" strings. Unknown keys and type
// mismatches raise ConfigError.
TrainingConfig load_config(const std::string& path,
                           const std::vector<std::string>& overrides);

// Subcommand front end: prep, train, debias, eval-cluster, eval-sembias,
// eval-weat, eval-neighbors, eval-proximity, export-projection.
// Returns 0 on success, 1 on validation/usage errors, 2 on I/O errors.
int run(const std::vector<std::string>& args);

}  // namespace fairembed::cli
