#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "lpo/errors.hpp"
#include "lpo/runner.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string strategy;
    std::string mode;
    std::string out;
    long long seed = -1;
    int steps = -1;
    int beam = -1;
    int proposals = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "run config file")->required();
    cmd->add_option("--strategy", flags.strategy, "ape | apo | pe2");
    cmd->add_option("--mode", flags.mode, "global | local");
    cmd->add_option("--seed", flags.seed, "run seed");
    cmd->add_option("--steps", flags.steps, "optimization steps");
    cmd->add_option("--beam", flags.beam, "beam size");
    cmd->add_option("--proposals", flags.proposals, "proposals per step");
    cmd->add_option("--out", flags.out, "output directory");
}

lpo::RunConfig load_config(const CommonFlags& flags) {
    std::map<std::string, std::string> overrides;
    if (!flags.strategy.empty()) overrides["strategy"] = flags.strategy;
    if (!flags.mode.empty()) overrides["mode"] = flags.mode;
    if (flags.seed >= 0) overrides["seed"] = std::to_string(flags.seed);
    if (flags.steps >= 0) overrides["search.n_steps"] = std::to_string(flags.steps);
    if (flags.beam >= 0) overrides["search.beam_size"] = std::to_string(flags.beam);
    if (flags.proposals >= 0)
        overrides["search.n_proposals"] = std::to_string(flags.proposals);
    lpo::RunConfig cfg = lpo::RunConfig::load(flags.config_path, overrides);
    if (!flags.out.empty()) cfg.out_dir = flags.out;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lpo - prompt optimization over chat models, with "
                 "edit-scoped (local) proposal as a mode on every strategy"};
    app.require_subcommand(1);

    CommonFlags optimize_flags;
    auto* optimize = app.add_subcommand("optimize", "run the optimization loop");
    add_common(optimize, optimize_flags);

    CommonFlags eval_flags;
    std::string eval_prompt;
    std::string eval_prompt_file;
    std::string eval_split = "test";
    auto* evaluate = app.add_subcommand("evaluate", "score one prompt on a split");
    add_common(evaluate, eval_flags);
    evaluate->add_option("--prompt", eval_prompt, "prompt text");
    evaluate->add_option("--prompt-file", eval_prompt_file,
                         "file containing the prompt text");
    evaluate->add_option("--split", eval_split, "train | dev | test");

    std::vector<std::string> report_dirs;
    std::string report_out = "report";
    auto* report = app.add_subcommand("report", "build reports from run dirs");
    report->add_option("run_dirs", report_dirs, "run directories")->required();
    report->add_option("--out", report_out, "report output directory");

    std::string verify_dir;
    auto* verify = app.add_subcommand(
        "replay-verify", "re-execute a recorded run and compare byte for byte");
    verify->add_option("run_dir", verify_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (optimize->parsed()) {
            lpo::RunConfig cfg = load_config(optimize_flags);
            auto outcome = lpo::cmd_optimize(cfg);
            std::cout << "best prompt: " << outcome.result.best.prompt.text()
                      << "\n"
                      << "dev score: " << outcome.result.best.dev_score << "\n"
                      << "optimal timestep: " << outcome.result.optimal_timestep
                      << "\n";
            if (outcome.result.test_score)
                std::cout << "test score: " << *outcome.result.test_score << "\n";
            std::cout << "run dir: " << outcome.out_dir.string() << "\n";
            return 0;
        }
        if (evaluate->parsed()) {
            lpo::RunConfig cfg = load_config(eval_flags);
            std::string prompt_text = eval_prompt;
            if (prompt_text.empty() && !eval_prompt_file.empty()) {
                std::ifstream in(eval_prompt_file);
                if (!in)
                    throw lpo::ConfigError("cannot read prompt file: " +
                                           eval_prompt_file);
                std::ostringstream buf;
                buf << in.rdbuf();
                prompt_text = buf.str();
                while (!prompt_text.empty() &&
                       (prompt_text.back() == '\n' || prompt_text.back() == '\r'))
                    prompt_text.pop_back();
            }
            if (prompt_text.empty())
                prompt_text = cfg.search.init_prompt;
            auto outcome = lpo::cmd_evaluate(
                cfg, prompt_text, lpo::split_from_string(eval_split));
            std::cout << "accuracy: " << outcome.accuracy << " over " << outcome.n
                      << " examples (" << outcome.failures << " failures)"
                      << (outcome.partial ? " [partial]" : "") << "\n";
            return 0;
        }
        if (report->parsed()) {
            std::vector<std::filesystem::path> dirs(report_dirs.begin(),
                                                    report_dirs.end());
            lpo::Report rep = lpo::cmd_report(dirs, report_out);
            std::cout << lpo::report_text_table(rep);
            std::cout << "report files written to " << report_out << "\n";
            return 0;
        }
        if (verify->parsed()) {
            auto outcome = lpo::cmd_replay_verify(verify_dir);
            std::cout << (outcome.pass ? "PASS" : "FAIL") << ": " << outcome.detail
                      << "\n";
            return outcome.pass ? 0 : 1;
        }
    } catch (const lpo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const lpo::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
