#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace lpo {

// One record of the run-event stream. Events carry a monotone sequence
// number instead of wall time so identical runs produce identical logs.
struct Event {
    std::uint64_t seq = 0;
    std::string type;
    nlohmann::json data;

    nlohmann::json to_json() const {
        return nlohmann::json{{"seq", seq}, {"type", type}, {"data", data}};
    }
    static Event from_json(const nlohmann::json& j) {
        return Event{j.at("seq").get<std::uint64_t>(),
                     j.at("type").get<std::string>(), j.at("data")};
    }
};

class EventSink {
public:
    virtual ~EventSink() = default;
    virtual void emit(const std::string& type, nlohmann::json data) = 0;
};

class NullEventSink final : public EventSink {
public:
    void emit(const std::string&, nlohmann::json) override {}
};

// Collects events in memory; used by tests and the report builder.
class MemoryEventSink final : public EventSink {
public:
    void emit(const std::string& type, nlohmann::json data) override {
        events_.push_back(Event{next_seq_++, type, std::move(data)});
    }
    const std::vector<Event>& events() const { return events_; }

private:
    std::uint64_t next_seq_ = 0;
    std::vector<Event> events_;
};

// Writes one JSON object per line to events.jsonl.
class JsonlEventSink final : public EventSink {
public:
    explicit JsonlEventSink(const std::filesystem::path& path);

    void emit(const std::string& type, nlohmann::json data) override;

private:
    std::uint64_t next_seq_ = 0;
    std::ofstream out_;
    std::mutex mutex_;
};

std::vector<Event> read_events(const std::filesystem::path& path);

}  // namespace lpo
