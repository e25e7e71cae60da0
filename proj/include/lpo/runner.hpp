#pragma once

#include <filesystem>
#include <iosfwd>

#include "lpo/report.hpp"
#include "lpo/run_config.hpp"
#include "lpo/search.hpp"

namespace lpo {

// Task examples plus spec, built from the configured source (synthetic task
// file or JSONL dataset).
SearchTask build_task(const RunConfig& cfg);

// Builds the gateway for a run. With replay_override the run is served
// entirely from the given store file regardless of the configured provider.
Gateway build_gateway(const RunConfig& cfg,
                      const std::filesystem::path& record_store,
                      std::optional<std::filesystem::path> replay_override =
                          std::nullopt);

// Serializes a resolved config; paths are written relative to `anchor` so the
// run directory stays relocatable.
std::string config_to_text(const RunConfig& cfg,
                           const std::filesystem::path& anchor);

struct OptimizeOutcome {
    RunResult result;
    std::filesystem::path out_dir;
};

// Executes a full optimization run and persists run.toml, events.jsonl,
// run_result.json, best_prompt.txt (and replay.jsonl when recording) into the
// output directory.
OptimizeOutcome cmd_optimize(const RunConfig& cfg);

struct EvaluateOutcome {
    double accuracy = 0.0;
    std::size_t n = 0;
    std::size_t failures = 0;
    bool partial = false;
};

EvaluateOutcome cmd_evaluate(const RunConfig& cfg, const std::string& prompt_text,
                             Split split);

// Builds report.csv, report.txt, timesteps.csv and evolution.txt from run
// event logs; returns the report.
Report cmd_report(const std::vector<std::filesystem::path>& run_dirs,
                  const std::filesystem::path& out_dir);

struct ReplayVerifyOutcome {
    bool pass = false;
    std::string detail;  // divergence description or "ok"
};

// Re-executes the run recorded in run_dir purely from its replay store and
// byte-compares the run result and event stream against the stored ones.
ReplayVerifyOutcome cmd_replay_verify(const std::filesystem::path& run_dir);

}  // namespace lpo
