#include "lpo/replay.hpp"

#include <chrono>
#include <fstream>

#include "lpo/errors.hpp"

namespace lpo {
namespace {

std::string utc_now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

ReplayStore::ReplayStore(std::filesystem::path path, bool writable)
    : path_(std::move(path)), writable_(writable) {
    load_file();
}

void ReplayStore::load_file() {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError("replay store " + path_.string() + " line " +
                                  std::to_string(line_no) + ": " + e.what(),
                              line_no);
        }
        std::string key = j.at("key").get<std::string>();
        if (responses_.count(key)) continue;
        responses_.emplace(key, chat_response_from_json(j.at("response")));
        requests_.emplace(key, chat_request_from_json(j.at("request")));
        order_.push_back(key);
    }
}

std::optional<ChatResponse> ReplayStore::find(const CacheKey& key) const {
    std::lock_guard lock(mutex_);
    auto it = responses_.find(key.digest);
    if (it == responses_.end()) return std::nullopt;
    return it->second;
}

bool ReplayStore::contains(const CacheKey& key) const {
    std::lock_guard lock(mutex_);
    return responses_.count(key.digest) > 0;
}

void ReplayStore::append(const CacheKey& key, const ChatRequest& request,
                         const ChatResponse& response) {
    std::lock_guard lock(mutex_);
    if (responses_.count(key.digest)) return;
    if (!writable_) throw Error("replay store is read-only");
    nlohmann::json record{{"key", key.digest},
                          {"request", to_json(request)},
                          {"response", to_json(response)},
                          {"recorded_at", utc_now_iso8601()}};
    std::filesystem::create_directories(path_.parent_path().empty()
                                            ? std::filesystem::path(".")
                                            : path_.parent_path());
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error("cannot open replay store for append: " + path_.string());
    out << record.dump() << '\n';
    responses_.emplace(key.digest, response);
    requests_.emplace(key.digest, request);
    order_.push_back(key.digest);
}

std::size_t ReplayStore::size() const {
    std::lock_guard lock(mutex_);
    return responses_.size();
}

std::vector<ChatRequest> ReplayStore::requests() const {
    std::lock_guard lock(mutex_);
    std::vector<ChatRequest> out;
    out.reserve(order_.size());
    for (const auto& key : order_) out.push_back(requests_.at(key));
    return out;
}

}  // namespace lpo
