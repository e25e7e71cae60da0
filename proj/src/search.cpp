#include "lpo/search.hpp"

#include <algorithm>

#include "lpo/detail/rng.hpp"
#include "lpo/detail/sha256.hpp"
#include "lpo/errors.hpp"

namespace lpo {

void SearchConfig::validate() const {
    if (n_steps < 1) throw ConfigError("n_steps must be >= 1");
    if (beam_size < 1) throw ConfigError("beam_size must be >= 1");
    if (n_proposals < 1) throw ConfigError("n_proposals must be >= 1");
    if (init_prompt.empty()) throw ConfigError("init_prompt must be non-empty");
}

nlohmann::json to_json(const Candidate& c) {
    nlohmann::json j{{"id", c.id},
                     {"prompt", c.prompt.text()},
                     {"timestep", c.timestep},
                     {"dev_score", c.dev_score},
                     {"strategy", to_string(c.strategy)},
                     {"mode", to_string(c.mode)},
                     {"degraded_to_global", c.degraded_to_global}};
    if (c.parent_id) j["parent"] = *c.parent_id;
    if (c.tagged_parent_raw) j["tagged_parent"] = *c.tagged_parent_raw;
    return j;
}

Candidate candidate_from_json(const nlohmann::json& j) {
    Candidate c{j.at("id").get<std::string>(),
                Prompt(j.at("prompt").get<std::string>()),
                j.at("timestep").get<int>(),
                std::nullopt,
                j.at("dev_score").get<double>(),
                strategy_from_string(j.at("strategy").get<std::string>()),
                mode_from_string(j.at("mode").get<std::string>()),
                j.value("degraded_to_global", false),
                std::nullopt};
    if (j.contains("parent")) c.parent_id = j.at("parent").get<std::string>();
    if (j.contains("tagged_parent"))
        c.tagged_parent_raw = j.at("tagged_parent").get<std::string>();
    return c;
}

nlohmann::json to_json(const RunResult& r) {
    nlohmann::json pool = nlohmann::json::array();
    for (const auto& c : r.pool) pool.push_back(to_json(c));
    nlohmann::json j{{"best", to_json(r.best)},
                     {"pool", pool},
                     {"optimal_timestep", r.optimal_timestep},
                     {"per_step_best_scores", r.per_step_best_scores},
                     {"llm_calls",
                      {{"task", r.llm_calls.task}, {"proposal", r.llm_calls.proposal}}}};
    if (r.test_score) j["test_score"] = *r.test_score;
    return j;
}

RunResult run_result_from_json(const nlohmann::json& j) {
    RunResult r{candidate_from_json(j.at("best")),
                {},
                j.at("optimal_timestep").get<int>(),
                j.at("per_step_best_scores").get<std::vector<double>>(),
                CallCounts{j.at("llm_calls").at("task").get<std::int64_t>(),
                           j.at("llm_calls").at("proposal").get<std::int64_t>()},
                std::nullopt};
    for (const auto& c : j.at("pool")) r.pool.push_back(candidate_from_json(c));
    if (j.contains("test_score")) r.test_score = j.at("test_score").get<double>();
    return r;
}

SearchTask split_task(const TaskSpec& spec, const std::vector<Example>& examples) {
    return SearchTask{spec, filter_split(examples, Split::Train),
                      filter_split(examples, Split::Dev),
                      filter_split(examples, Split::Test)};
}

namespace {

// score desc, timestep asc, fewer words, lexicographic text
bool candidate_before(const Candidate& a, const Candidate& b) {
    if (a.dev_score != b.dev_score) return a.dev_score > b.dev_score;
    if (a.timestep != b.timestep) return a.timestep < b.timestep;
    std::size_t wa = a.prompt.word_count();
    std::size_t wb = b.prompt.word_count();
    if (wa != wb) return wa < wb;
    return a.prompt.text() < b.prompt.text();
}

std::string make_candidate_id(const std::string& text, int timestep,
                              const std::optional<std::string>& parent,
                              std::size_t ordinal) {
    std::string material = std::to_string(timestep) + "|" +
                           (parent ? *parent : "-") + "|" +
                           std::to_string(ordinal) + "|" + text;
    return "c" + std::to_string(timestep) + "-" +
           detail::sha256_hex(material).substr(0, 12);
}

nlohmann::json eval_event(int step, const std::string& candidate_id,
                          const char* split, const EvalResult& result) {
    nlohmann::json j{{"step", step},
                     {"candidate", candidate_id},
                     {"split", split},
                     {"accuracy", result.accuracy},
                     {"n", result.n},
                     {"partial", result.partial}};
    if (result.partial) j["error"] = result.error;
    return j;
}

std::vector<HistoryEntry> ancestor_history(
    const std::vector<Candidate>& pool, const Candidate& candidate) {
    std::vector<HistoryEntry> chain;
    std::optional<std::string> cursor = candidate.parent_id;
    while (cursor) {
        auto it = std::find_if(pool.begin(), pool.end(),
                               [&](const Candidate& c) { return c.id == *cursor; });
        if (it == pool.end()) break;
        chain.push_back({it->prompt.text(), it->dev_score});
        cursor = it->parent_id;
    }
    std::reverse(chain.begin(), chain.end());  // oldest first
    return chain;
}

}  // namespace

std::vector<Candidate> select_beam(const std::vector<Candidate>& pool,
                                   std::size_t beam_size) {
    std::vector<Candidate> sorted = pool;
    std::stable_sort(sorted.begin(), sorted.end(), candidate_before);
    if (sorted.size() > beam_size)
        sorted.erase(sorted.begin() + static_cast<std::ptrdiff_t>(beam_size),
                     sorted.end());
    return sorted;
}

double final_test(const Candidate& best, const std::vector<Example>& test_split,
                  const TaskSpec& spec, Gateway& gateway,
                  const EvalOptions& options) {
    if (test_split.empty()) throw SizeError("final_test: test split is empty");
    return evaluate(best.prompt, test_split, spec, gateway, options).accuracy;
}

RunResult run(const SearchConfig& config, Strategy strategy, Mode mode,
              const SearchTask& task, Gateway& gateway,
              const TemplateCatalog& catalog, const ProposalConfig& proposal_cfg,
              EventSink& events) {
    config.validate();
    task.spec.validate();
    if (task.dev.empty()) throw SizeError("run: dev split is empty");
    if (task.train.empty()) throw SizeError("run: train split is empty");

    ProposalConfig pcfg = proposal_cfg;
    pcfg.mode = mode;
    pcfg.n_proposals = config.n_proposals;
    pcfg.validate();

    const EvalOptions eval_opts{config.eval_workers};
    const CallCounts counts_at_start = gateway.counts();

    std::vector<Example> dev = task.dev;
    if (config.dev_size > 0 && config.dev_size < dev.size())
        dev = sample_minibatch(dev, config.dev_size,
                               detail::derive_seed(config.seed, "dev-subset"));

    events.emit("run_start",
                {{"strategy", to_string(strategy)},
                 {"mode", to_string(mode)},
                 {"task", task.spec.task_id},
                 {"n_steps", config.n_steps},
                 {"beam_size", config.beam_size},
                 {"n_proposals", config.n_proposals},
                 {"seed", config.seed},
                 {"init_prompt", config.init_prompt},
                 {"max_tag_retries", pcfg.max_tag_retries},
                 {"dev_n", dev.size()}});

    std::vector<Candidate> pool;
    std::vector<double> per_step_best_scores;

    Candidate init{make_candidate_id(config.init_prompt, 0, std::nullopt, 0),
                   Prompt(config.init_prompt),
                   0,
                   std::nullopt,
                   0.0,
                   strategy,
                   mode,
                   false,
                   std::nullopt};
    {
        EvalResult dev_eval = evaluate(init.prompt, dev, task.spec, gateway, eval_opts);
        init.dev_score = dev_eval.accuracy;
        events.emit("evaluation", eval_event(0, init.id, "dev", dev_eval));
    }
    events.emit("candidate", to_json(init));
    pool.push_back(init);
    per_step_best_scores.push_back(init.dev_score);

    std::size_t ordinal = 1;
    for (int step = 1; step <= config.n_steps; ++step) {
        std::vector<Candidate> beam =
            select_beam(pool, static_cast<std::size_t>(config.beam_size));
        {
            nlohmann::json ids = nlohmann::json::array();
            for (const auto& c : beam) ids.push_back(c.id);
            events.emit("beam_selection", {{"step", step}, {"selected", ids}});
        }

        for (const Candidate& parent : beam) {
            CallBudget budget = CallBudget::per_candidate_step(pcfg);
            const std::uint64_t expand_seed = detail::derive_seed(
                detail::derive_seed(config.seed, static_cast<std::uint64_t>(step)),
                parent.id);

            std::size_t mb_size = std::min(config.minibatch_size, task.train.size());
            if (mb_size == 0) mb_size = task.train.size();
            std::vector<Example> minibatch = sample_minibatch(
                task.train, mb_size, detail::derive_seed(expand_seed, "minibatch"));

            EvalResult mb_eval =
                evaluate(parent.prompt, minibatch, task.spec, gateway, eval_opts);
            events.emit("evaluation",
                        eval_event(step, parent.id, "train_minibatch", mb_eval));

            std::vector<HistoryEntry> history;
            if (strategy == Strategy::Pe2) history = ancestor_history(pool, parent);

            TextualGradient gradient = generate_gradient(
                strategy, parent.prompt, minibatch, mb_eval, history, gateway,
                catalog, pcfg, detail::derive_seed(expand_seed, "gradient"), budget);
            events.emit("gradient", {{"step", step},
                                     {"candidate", parent.id},
                                     {"strategy", to_string(strategy)},
                                     {"feedback", gradient.feedback_text},
                                     {"n_error_cases", gradient.error_cases.size()}});

            std::optional<TaggedPrompt> tagged;
            bool degraded = false;
            ProposalConfig step_cfg = pcfg;
            if (mode == Mode::Local) {
                try {
                    IdentifyResult identified = identify_edit_scope(
                        parent.prompt, gradient, gateway, catalog, pcfg,
                        detail::derive_seed(expand_seed, "identify"), budget);
                    tagged = std::move(identified.tagged);
                    events.emit("identification",
                                {{"step", step},
                                 {"candidate", parent.id},
                                 {"attempts", identified.attempts},
                                 {"tagged", tagged->raw},
                                 {"failed", false}});
                } catch (const TagIdentificationFailed& e) {
                    if (!pcfg.fallback_to_global) throw;
                    degraded = true;
                    step_cfg.mode = Mode::Global;
                    events.emit("identification", {{"step", step},
                                                   {"candidate", parent.id},
                                                   {"failed", true},
                                                   {"degraded_to_global", true},
                                                   {"error", e.what()}});
                }
            }

            ProposeResult proposals;
            try {
                proposals = propose(strategy, parent.prompt, gradient, tagged,
                                    gateway, catalog, step_cfg,
                                    detail::derive_seed(expand_seed, "propose"),
                                    budget);
            } catch (const EmptyProposalSet&) {
                // the parent stays in the pool; record the empty expansion
            }
            {
                nlohmann::json texts = nlohmann::json::array();
                for (const auto& p : proposals.prompts) texts.push_back(p.text());
                events.emit("proposal",
                            {{"step", step},
                             {"parent", parent.id},
                             {"accepted", texts},
                             {"rejected_malformed", proposals.rejected_malformed},
                             {"rejected_containment", proposals.rejected_containment},
                             {"deduplicated", proposals.deduplicated},
                             {"proposal_calls_spent", budget.spent()}});
            }

            for (const auto& proposal : proposals.prompts) {
                Candidate child{make_candidate_id(proposal.text(), step, parent.id,
                                                  ordinal++),
                                proposal,
                                step,
                                parent.id,
                                0.0,
                                strategy,
                                mode,
                                degraded,
                                std::nullopt};
                if (tagged && !degraded) child.tagged_parent_raw = tagged->raw;

                EvalResult dev_eval =
                    evaluate(child.prompt, dev, task.spec, gateway, eval_opts);
                child.dev_score = dev_eval.accuracy;
                events.emit("evaluation", eval_event(step, child.id, "dev", dev_eval));
                events.emit("candidate", to_json(child));
                pool.push_back(std::move(child));
            }
        }

        double best_so_far = 0.0;
        for (const auto& c : pool) best_so_far = std::max(best_so_far, c.dev_score);
        per_step_best_scores.push_back(best_so_far);
    }

    Candidate best = select_beam(pool, 1).front();
    RunResult result{best,
                     std::move(pool),
                     best.timestep == 0 ? config.n_steps + 1 : best.timestep,
                     std::move(per_step_best_scores),
                     CallCounts{},
                     std::nullopt};

    if (config.run_final_test && !task.test.empty()) {
        result.test_score =
            final_test(result.best, task.test, task.spec, gateway, eval_opts);
        EvalResult test_eval{*result.test_score, task.test.size(), {}, {}, {}, false, ""};
        events.emit("evaluation",
                    eval_event(config.n_steps, result.best.id, "test", test_eval));
    }

    const CallCounts counts_now = gateway.counts();
    result.llm_calls = CallCounts{counts_now.task - counts_at_start.task,
                                  counts_now.proposal - counts_at_start.proposal};
    events.emit("run_summary",
                {{"best", result.best.id},
                 {"best_prompt", result.best.prompt.text()},
                 {"best_dev_score", result.best.dev_score},
                 {"optimal_timestep", result.optimal_timestep},
                 {"per_step_best_scores", result.per_step_best_scores},
                 {"llm_calls",
                  {{"task", result.llm_calls.task},
                   {"proposal", result.llm_calls.proposal}}},
                 {"test_score", result.test_score ? nlohmann::json(*result.test_score)
                                                  : nlohmann::json()}});
    return result;
}

}  // namespace lpo
