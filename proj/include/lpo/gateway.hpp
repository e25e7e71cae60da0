#pragma once

#include <atomic>
#include <memory>

#include "lpo/chat.hpp"
#include "lpo/providers.hpp"
#include "lpo/replay.hpp"

namespace lpo {

// Per-role model settings. Evaluation wants stable outputs, proposals want
// diversity, hence the different temperature defaults.
struct RoleSettings {
    std::string model;
    double temperature = 0.0;
    int max_tokens = 1024;
};

inline RoleSettings default_task_settings(std::string model = "gpt-3.5-turbo") {
    return RoleSettings{std::move(model), 0.0, 1024};
}

inline RoleSettings default_proposal_settings(std::string model = "gpt-4o") {
    return RoleSettings{std::move(model), 1.0, 1024};
}

struct CallCounts {
    std::int64_t task = 0;
    std::int64_t proposal = 0;
};

// Routes requests to the provider registered for their role, with optional
// record/replay through a ReplayStore. Safe to use from many workers.
class Gateway {
public:
    enum class CacheMode { None, Record, Replay };

    Gateway(std::shared_ptr<ChatProvider> task_provider,
            std::shared_ptr<ChatProvider> proposal_provider,
            RoleSettings task_settings, RoleSettings proposal_settings);

    Gateway(Gateway&& other) noexcept
        : task_provider_(std::move(other.task_provider_)),
          proposal_provider_(std::move(other.proposal_provider_)),
          task_settings_(std::move(other.task_settings_)),
          proposal_settings_(std::move(other.proposal_settings_)),
          store_(std::move(other.store_)),
          mode_(other.mode_),
          task_calls_(other.task_calls_.load()),
          proposal_calls_(other.proposal_calls_.load()) {}

    // Replay mode needs no live providers.
    static Gateway replay_only(std::shared_ptr<ReplayStore> store,
                               RoleSettings task_settings,
                               RoleSettings proposal_settings);

    void set_store(std::shared_ptr<ReplayStore> store, CacheMode mode);

    const RoleSettings& settings(Role role) const {
        return role == Role::Task ? task_settings_ : proposal_settings_;
    }

    // Builds a request with the role's model/temperature settings.
    ChatRequest make_request(Role role, std::vector<ChatMessage> messages,
                             std::optional<std::int64_t> seed = std::nullopt) const;

    ChatResponse complete(const ChatRequest& request);

    CallCounts counts() const {
        return CallCounts{task_calls_.load(), proposal_calls_.load()};
    }

    std::shared_ptr<ReplayStore> store() const { return store_; }
    CacheMode cache_mode() const { return mode_; }

private:
    std::shared_ptr<ChatProvider> task_provider_;
    std::shared_ptr<ChatProvider> proposal_provider_;
    RoleSettings task_settings_;
    RoleSettings proposal_settings_;
    std::shared_ptr<ReplayStore> store_;
    CacheMode mode_ = CacheMode::None;
    std::atomic<std::int64_t> task_calls_{0};
    std::atomic<std::int64_t> proposal_calls_{0};
};

}  // namespace lpo
