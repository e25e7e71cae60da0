#include "lpo/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace lpo {

RunRecord parse_run_events(const std::vector<Event>& events) {
    RunRecord record;
    bool saw_start = false;
    bool saw_summary = false;
    for (const auto& event : events) {
        if (event.type == "run_start") {
            record.strategy = event.data.at("strategy").get<std::string>();
            record.mode = event.data.at("mode").get<std::string>();
            record.task = event.data.at("task").get<std::string>();
            record.seed = event.data.at("seed").get<std::uint64_t>();
            saw_start = true;
        } else if (event.type == "candidate") {
            EvolutionRow row;
            row.id = event.data.at("id").get<std::string>();
            row.timestep = event.data.at("timestep").get<int>();
            row.prompt = event.data.at("prompt").get<std::string>();
            row.dev_score = event.data.at("dev_score").get<double>();
            if (event.data.contains("parent"))
                row.parent_id = event.data.at("parent").get<std::string>();
            if (event.data.contains("tagged_parent"))
                row.tagged_parent = event.data.at("tagged_parent").get<std::string>();
            record.evolution.push_back(std::move(row));
        } else if (event.type == "run_summary") {
            record.best_prompt = event.data.at("best_prompt").get<std::string>();
            record.best_dev_score = event.data.at("best_dev_score").get<double>();
            record.optimal_timestep = event.data.at("optimal_timestep").get<int>();
            record.task_calls = event.data.at("llm_calls").at("task").get<std::int64_t>();
            record.proposal_calls =
                event.data.at("llm_calls").at("proposal").get<std::int64_t>();
            if (!event.data.at("test_score").is_null())
                record.test_score = event.data.at("test_score").get<double>();
            saw_summary = true;
        }
    }
    if (!saw_start || !saw_summary)
        throw MissingEventsError(
            "event stream lacks run_start/run_summary records");
    return record;
}

RunRecord load_run_record(const std::filesystem::path& run_dir) {
    auto path = run_dir / "events.jsonl";
    if (!std::filesystem::exists(path))
        throw MissingEventsError("no event log in run directory: " +
                                 run_dir.string());
    return parse_run_events(read_events(path));
}

Report build_report(const std::vector<RunRecord>& runs) {
    Report report;
    report.runs = runs;

    std::map<std::tuple<std::string, std::string, std::string>,
             std::vector<const RunRecord*>>
        groups;
    for (const auto& run : report.runs)
        groups[{run.task, run.strategy, run.mode}].push_back(&run);

    for (const auto& [key, members] : groups) {
        ReportRow row;
        row.task = std::get<0>(key);
        row.strategy = std::get<1>(key);
        row.mode = std::get<2>(key);
        row.n_runs = static_cast<int>(members.size());
        double dev_sum = 0.0;
        double steps_sum = 0.0;
        double test_sum = 0.0;
        int test_n = 0;
        for (const auto* run : members) {
            dev_sum += run->best_dev_score;
            steps_sum += run->optimal_timestep;
            if (run->test_score) {
                test_sum += *run->test_score;
                ++test_n;
            }
        }
        row.mean_dev = dev_sum / static_cast<double>(members.size());
        row.mean_steps = steps_sum / static_cast<double>(members.size());
        if (test_n > 0) row.mean_test = test_sum / test_n;
        report.rows.push_back(std::move(row));
    }

    for (const auto& run : report.runs)
        report.timesteps.push_back(
            {run.task, run.strategy, run.mode, run.seed, run.optimal_timestep});
    std::stable_sort(report.timesteps.begin(), report.timesteps.end(),
                     [](const TimestepRow& a, const TimestepRow& b) {
                         return std::tie(a.task, a.strategy, a.mode, a.seed) <
                                std::tie(b.task, b.strategy, b.mode, b.seed);
                     });
    return report;
}

std::string format_percent(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", value * 100.0);
    return buf;
}

std::string format_steps(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", value);
    std::string s = buf;
    if (s.size() >= 2 && s.substr(s.size() - 2) == ".0") s.resize(s.size() - 2);
    return s;
}

std::string report_csv(const Report& report) {
    std::ostringstream out;
    out << "task,strategy,mode,n_runs,dev_accuracy,test_accuracy,mean_steps\n";
    for (const auto& row : report.rows) {
        out << row.task << ',' << row.strategy << ',' << row.mode << ','
            << row.n_runs << ',' << format_percent(row.mean_dev) << ','
            << (row.mean_test ? format_percent(*row.mean_test) : "") << ','
            << format_steps(row.mean_steps) << '\n';
    }
    return out.str();
}

std::string report_text_table(const Report& report) {
    std::vector<std::array<std::string, 7>> cells;
    cells.push_back({"task", "strategy", "mode", "runs", "dev", "test", "steps"});
    for (const auto& row : report.rows) {
        cells.push_back({row.task, row.strategy, row.mode,
                         std::to_string(row.n_runs), format_percent(row.mean_dev),
                         row.mean_test ? format_percent(*row.mean_test) : "-",
                         format_steps(row.mean_steps)});
    }
    std::array<std::size_t, 7> widths{};
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c)
            widths[c] = std::max(widths[c], row[c].size());

    std::ostringstream out;
    for (std::size_t r = 0; r < cells.size(); ++r) {
        for (std::size_t c = 0; c < cells[r].size(); ++c) {
            out << cells[r][c]
                << std::string(widths[c] - cells[r][c].size() + (c + 1 < 7 ? 2 : 0),
                               ' ');
        }
        out << '\n';
        if (r == 0) out << std::string(
            std::accumulate(widths.begin(), widths.end(), std::size_t{0}) + 12, '-')
                        << '\n';
    }
    return out.str();
}

std::string timesteps_csv(const Report& report) {
    std::ostringstream out;
    out << "task,strategy,mode,seed,optimal_timestep\n";
    for (const auto& row : report.timesteps)
        out << row.task << ',' << row.strategy << ',' << row.mode << ','
            << row.seed << ',' << row.optimal_timestep << '\n';
    return out.str();
}

std::string evolution_text(const Report& report) {
    std::ostringstream out;
    for (const auto& run : report.runs) {
        out << "# " << run.task << " | " << run.strategy << " | " << run.mode
            << " | seed " << run.seed << "\n";
        for (const auto& row : run.evolution) {
            out << "t=" << row.timestep << " score=" << format_percent(row.dev_score)
                << " id=" << row.id;
            if (row.parent_id) out << " parent=" << *row.parent_id;
            out << "\n  prompt: " << row.prompt << "\n";
            if (row.tagged_parent)
                out << "  tagged: " << *row.tagged_parent << "\n";
        }
        out << "best: " << run.best_prompt << "\n"
            << "optimal timestep: " << run.optimal_timestep << "\n\n";
    }
    return out.str();
}

}  // namespace lpo
