#include "lpo/gateway.hpp"

#include "lpo/errors.hpp"

namespace lpo {

Gateway::Gateway(std::shared_ptr<ChatProvider> task_provider,
                 std::shared_ptr<ChatProvider> proposal_provider,
                 RoleSettings task_settings, RoleSettings proposal_settings)
    : task_provider_(std::move(task_provider)),
      proposal_provider_(std::move(proposal_provider)),
      task_settings_(std::move(task_settings)),
      proposal_settings_(std::move(proposal_settings)) {}

Gateway Gateway::replay_only(std::shared_ptr<ReplayStore> store,
                             RoleSettings task_settings,
                             RoleSettings proposal_settings) {
    Gateway g(nullptr, nullptr, std::move(task_settings),
              std::move(proposal_settings));
    g.set_store(std::move(store), CacheMode::Replay);
    return g;
}

void Gateway::set_store(std::shared_ptr<ReplayStore> store, CacheMode mode) {
    store_ = std::move(store);
    mode_ = mode;
}

ChatRequest Gateway::make_request(Role role, std::vector<ChatMessage> messages,
                                  std::optional<std::int64_t> seed) const {
    const RoleSettings& s = settings(role);
    ChatRequest r;
    r.role_tag = role;
    r.model_name = s.model;
    r.messages = std::move(messages);
    r.temperature = s.temperature;
    r.max_tokens = s.max_tokens;
    r.request_seed = seed;
    return r;
}

ChatResponse Gateway::complete(const ChatRequest& request) {
    request.validate();
    auto& counter = request.role_tag == Role::Task ? task_calls_ : proposal_calls_;
    counter.fetch_add(1);

    const CacheKey key = cache_key(request);
    if (mode_ == CacheMode::Replay || mode_ == CacheMode::Record) {
        if (auto cached = store_->find(key)) {
            cached->cache_hit = true;
            return *cached;
        }
        if (mode_ == CacheMode::Replay) throw CacheMissError(key.digest);
    }

    auto& provider =
        request.role_tag == Role::Task ? task_provider_ : proposal_provider_;
    if (!provider)
        throw ProviderError(std::string("no provider configured for role ") +
                                to_string(request.role_tag),
                            /*recoverable=*/false);
    ChatResponse response = provider->complete(request);
    if (mode_ == CacheMode::Record) store_->append(key, request, response);
    return response;
}

}  // namespace lpo
