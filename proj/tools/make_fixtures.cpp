// Regenerates the replay fixtures under fixtures/: a PE2 global/local run
// pair on the hidden-keyword task, recorded end to end so replay-verify and
// the report suite can work from committed data. Usage: make_fixtures [root]
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "lpo/runner.hpp"

namespace fs = std::filesystem;

namespace {

lpo::SyntheticTask fixture_task(std::size_t reachable_test,
                                std::size_t unreachable_test) {
    lpo::SyntheticTask task;
    task.name = "gsm8k-fixture";
    task.required_keywords = {"alpha", "omega"};
    task.distractor_keywords = {"think", "step"};
    task.filler_words = {"plan", "check"};
    task.n_train = 6;
    task.n_dev = 4;
    task.n_test = reachable_test + unreachable_test;
    task.train_keyword_counts = {6, 0};
    task.dev_keyword_counts = {4, 0};
    task.test_keyword_counts = {reachable_test, unreachable_test};
    task.seed = 7;
    return task;
}

int make_run(const fs::path& root, const std::string& mode,
             std::size_t reachable_test, std::size_t unreachable_test,
             double expected_test) {
    fs::path out_dir = root / "fixtures" / ("pe2_" + mode);
    fs::remove_all(out_dir);
    fs::create_directories(out_dir);

    lpo::SyntheticTask task = fixture_task(reachable_test, unreachable_test);
    task.save(out_dir / "task.json");

    lpo::RunConfig cfg;
    cfg.strategy = lpo::Strategy::Pe2;
    cfg.mode = lpo::mode_from_string(mode);
    cfg.seed = 2026;
    cfg.search.seed = cfg.seed;
    cfg.search.minibatch_size = 6;
    cfg.proposal.mode = cfg.mode;
    cfg.templates_dir = root / "templates";
    cfg.out_dir = out_dir;
    cfg.provider.kind = "synthetic";
    cfg.provider.record = true;
    cfg.synthetic.file = out_dir / "task.json";
    cfg.synthetic.edit_budget = 2;
    cfg.synthetic.honor_tags = true;
    cfg.synthetic.flaky_identification = mode == "local";
    cfg.synthetic.vocabulary = {"alpha", "plan", "check", "steady"};

    auto outcome = lpo::cmd_optimize(cfg);
    std::printf("%s: best=\"%s\" dev=%.3f test=%.4f steps=%d\n", mode.c_str(),
                outcome.result.best.prompt.text().c_str(),
                outcome.result.best.dev_score,
                outcome.result.test_score.value_or(-1.0),
                outcome.result.optimal_timestep);
    if (!outcome.result.test_score ||
        *outcome.result.test_score != expected_test) {
        std::fprintf(stderr,
                     "fixture %s missed the expected test accuracy %.4f\n",
                     mode.c_str(), expected_test);
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path(".");
    int rc = 0;
    rc |= make_run(root, "global", 787, 213, 787.0 / 1000.0);
    rc |= make_run(root, "local", 806, 194, 806.0 / 1000.0);
    if (rc == 0) std::cout << "fixtures written under " << (root / "fixtures") << "\n";
    return rc;
}
