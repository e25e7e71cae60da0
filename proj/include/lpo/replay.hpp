#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "lpo/chat.hpp"

namespace lpo {

// Append-only JSONL store of (request, response) records keyed by the request
// digest. Concurrent reads are lock-free after load; appends are serialized.
class ReplayStore {
public:
    ReplayStore(std::filesystem::path path, bool writable);

    // Loads existing records; missing file is an empty store.
    static std::shared_ptr<ReplayStore> load(const std::filesystem::path& path) {
        return std::make_shared<ReplayStore>(path, false);
    }

    // Opens for appending, loading any existing records first.
    static std::shared_ptr<ReplayStore> open_for_record(
        const std::filesystem::path& path) {
        return std::make_shared<ReplayStore>(path, true);
    }

    std::optional<ChatResponse> find(const CacheKey& key) const;
    bool contains(const CacheKey& key) const;

    // Records a completion. No-op when the key is already present.
    void append(const CacheKey& key, const ChatRequest& request,
                const ChatResponse& response);

    std::size_t size() const;

    // Every stored request, for audits over recorded runs.
    std::vector<ChatRequest> requests() const;

private:
    void load_file();

    std::filesystem::path path_;
    bool writable_ = false;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, ChatResponse> responses_;
    std::vector<std::string> order_;  // insertion order of digests
    std::unordered_map<std::string, ChatRequest> requests_;
};

}  // namespace lpo
