#include "lpo/events.hpp"

#include "lpo/errors.hpp"

namespace lpo {

JsonlEventSink::JsonlEventSink(const std::filesystem::path& path) {
    if (!path.parent_path().empty())
        std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::trunc);
    if (!out_) throw Error("cannot open event log for writing: " + path.string());
}

void JsonlEventSink::emit(const std::string& type, nlohmann::json data) {
    std::lock_guard lock(mutex_);
    out_ << Event{next_seq_++, type, std::move(data)}.to_json().dump() << '\n';
    out_.flush();
}

std::vector<Event> read_events(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open event log: " + path.string());
    std::vector<Event> events;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            events.push_back(Event::from_json(nlohmann::json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path.string() + " line " + std::to_string(line_no) +
                                  ": " + e.what(),
                              line_no);
        }
    }
    return events;
}

}  // namespace lpo
