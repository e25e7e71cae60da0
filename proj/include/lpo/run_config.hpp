#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "lpo/gradient.hpp"
#include "lpo/search.hpp"
#include "lpo/synthetic.hpp"
#include "lpo/task.hpp"

namespace lpo {

// Flat key=value config file with [section] headers mapping to dotted keys.
// Values are quoted strings (with \n, \t, \", \\ escapes), numbers or
// true/false; # starts a comment.
class KvConfig {
public:
    static KvConfig parse_file(const std::filesystem::path& path);
    static KvConfig parse_string(const std::string& text,
                                 const std::string& origin = "<string>");

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key,
                           const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::string origin_;
};

struct ProviderSettings {
    std::string kind = "synthetic";  // http | synthetic | replay
    bool record = true;
    std::filesystem::path replay_store;  // empty = <out_dir>/replay.jsonl
    std::string task_model = "gpt-3.5-turbo";
    std::string proposal_model = "gpt-4o";
    double task_temperature = 0.0;
    double proposal_temperature = 1.0;
    int max_tokens = 1024;
    std::string api_base;  // LPO_API_BASE wins when set
};

struct SyntheticSettings {
    std::filesystem::path file;
    std::size_t edit_budget = 2;
    bool honor_tags = true;
    bool flaky_identification = false;
    std::vector<std::string> vocabulary;
};

// Everything a run needs, resolved from the config file plus CLI overrides.
struct RunConfig {
    Strategy strategy = Strategy::Ape;
    Mode mode = Mode::Global;
    SearchConfig search;
    ProposalConfig proposal;
    TaskSpec task_spec;
    std::filesystem::path task_data;  // JSONL dataset; empty for synthetic
    ProviderSettings provider;
    SyntheticSettings synthetic;
    std::filesystem::path templates_dir = "templates";
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;

    // Loads and validates; `overrides` are dotted keys applied on top of the
    // file (the CLI flags). Paths are resolved relative to the config file.
    static RunConfig load(const std::filesystem::path& path,
                          const std::map<std::string, std::string>& overrides = {});
    static RunConfig from_kv(KvConfig kv, const std::filesystem::path& base_dir);

    void validate() const;
};

}  // namespace lpo
