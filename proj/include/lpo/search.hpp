#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lpo/events.hpp"
#include "lpo/evaluate.hpp"
#include "lpo/gradient.hpp"
#include "lpo/proposal.hpp"

namespace lpo {

// A scored prompt with its provenance in the search tree.
struct Candidate {
    std::string id;
    Prompt prompt;
    int timestep = 0;  // 0 = initialization
    std::optional<std::string> parent_id;
    double dev_score = 0.0;
    Strategy strategy = Strategy::Ape;
    Mode mode = Mode::Global;
    bool degraded_to_global = false;
    // the tagged form of the parent this proposal was derived from
    std::optional<std::string> tagged_parent_raw;
};

struct SearchConfig {
    int n_steps = 3;
    int beam_size = 4;
    int n_proposals = 4;
    std::string init_prompt = "Let's think step by step";
    std::uint64_t seed = 0;
    std::size_t dev_size = 0;        // 0 = use the whole dev split
    std::size_t minibatch_size = 8;  // train examples per gradient
    int eval_workers = 1;
    bool run_final_test = true;

    void validate() const;
};

struct RunResult {
    Candidate best;                           // p*
    std::vector<Candidate> pool;              // p^0 ∪ p^1 ∪ ... in creation order
    int optimal_timestep = 0;                 // n_steps + 1 when p* is the init prompt
    std::vector<double> per_step_best_scores; // best over pool after each step
    CallCounts llm_calls;
    std::optional<double> test_score;
};

nlohmann::json to_json(const Candidate& c);
nlohmann::json to_json(const RunResult& r);
Candidate candidate_from_json(const nlohmann::json& j);
RunResult run_result_from_json(const nlohmann::json& j);

struct SearchTask {
    TaskSpec spec;
    std::vector<Example> train;
    std::vector<Example> dev;
    std::vector<Example> test;
};

SearchTask split_task(const TaskSpec& spec, const std::vector<Example>& examples);

// Deterministic beam selection: dev score descending, then earlier timestep,
// then fewer words, then lexicographic prompt text.
std::vector<Candidate> select_beam(const std::vector<Candidate>& pool,
                                   std::size_t beam_size);

// Evaluates the winning prompt once on the held-out test split. Never
// influences search.
double final_test(const Candidate& best, const std::vector<Example>& test_split,
                  const TaskSpec& spec, Gateway& gateway,
                  const EvalOptions& options = {});

// The optimize loop: score the init prompt, then for each step expand every
// beam candidate (gradient -> optional edit-scope identification -> proposals)
// and score the new prompts on dev. p* is the argmax over the whole pool.
RunResult run(const SearchConfig& config, Strategy strategy, Mode mode,
              const SearchTask& task, Gateway& gateway,
              const TemplateCatalog& catalog, const ProposalConfig& proposal_cfg,
              EventSink& events);

}  // namespace lpo
