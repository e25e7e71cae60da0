#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lpo/errors.hpp"
#include "lpo/events.hpp"

namespace lpo {

// Raised by report generation when a run directory has no event log.
class MissingEventsError : public Error {
public:
    explicit MissingEventsError(const std::string& msg) : Error(msg) {}
};

// One candidate's evolution record, reconstructed from events.
struct EvolutionRow {
    std::string id;
    int timestep = 0;
    std::optional<std::string> parent_id;
    std::string prompt;
    std::optional<std::string> tagged_parent;  // present iff local + identified
    double dev_score = 0.0;
};

// Everything the report needs about one run, derived solely from its event
// stream.
struct RunRecord {
    std::string strategy;
    std::string mode;
    std::string task;
    std::uint64_t seed = 0;
    std::string best_prompt;
    double best_dev_score = 0.0;
    std::optional<double> test_score;
    int optimal_timestep = 0;
    std::int64_t task_calls = 0;
    std::int64_t proposal_calls = 0;
    std::vector<EvolutionRow> evolution;
};

RunRecord parse_run_events(const std::vector<Event>& events);
RunRecord load_run_record(const std::filesystem::path& run_dir);

struct ReportRow {
    std::string task;
    std::string strategy;
    std::string mode;
    int n_runs = 0;
    double mean_dev = 0.0;
    std::optional<double> mean_test;
    double mean_steps = 0.0;
};

struct TimestepRow {
    std::string task;
    std::string strategy;
    std::string mode;
    std::uint64_t seed = 0;
    int optimal_timestep = 0;
};

// Comparison table (strategy × mode × task) plus per-run optimal timesteps.
struct Report {
    std::vector<ReportRow> rows;
    std::vector<TimestepRow> timesteps;
    std::vector<RunRecord> runs;
};

Report build_report(const std::vector<RunRecord>& runs);

// percent with one decimal: 0.787 -> "78.7"
std::string format_percent(double value);
// integral values print bare ("4"), otherwise one decimal ("2.5")
std::string format_steps(double value);

std::string report_csv(const Report& report);
std::string report_text_table(const Report& report);
std::string timesteps_csv(const Report& report);
std::string evolution_text(const Report& report);

}  // namespace lpo
