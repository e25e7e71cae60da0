// Acceptance suite: one check per release criterion, each printed as a
// [PASS]/[FAIL] line with its runtime. Exits nonzero if any check fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lpo/containment.hpp"
#include "lpo/errors.hpp"
#include "lpo/evaluate.hpp"
#include "lpo/runner.hpp"
#include "lpo/search.hpp"
#include "lpo/synthetic.hpp"
#include "lpo/tagged.hpp"
#include "lpo/words.hpp"

#include "support/alignment_oracle.hpp"
#include "support/brute_search.hpp"
#include "support/tagging_generator.hpp"
#include "support/test_util.hpp"

using namespace lpo;

namespace {

struct AcceptanceFailure : std::runtime_error {
    explicit AcceptanceFailure(const std::string& msg)
        : std::runtime_error(msg) {}
};

struct Criterion {
    std::string name;
    std::function<void()> check;  // throws AcceptanceFailure on failure
};

void require(bool ok, const std::string& msg) {
    if (!ok) throw AcceptanceFailure(msg);
}

const std::string kFig2FirstLine =
    "First, identify the scope of tokens within the prompt where edits should "
    "take place.";
const std::string kReplyInstruction =
    "Reply with the new instruction without the <edit>, </edit> tags.";
const std::string kProposeMarker = "Reply with the new instruction";

// ---------------------------------------------------------------------------
// 1. Edit-tag protocol: 1,000 generated taggings round-trip exactly; spans
//    obey the word limit; malformed inputs raise the specified errors.

void check_edit_tag_protocol() {
    detail::Rng rng(20240817);
    for (int iter = 0; iter < 1000; ++iter) {
        auto gen = lpo::testing::generate_tagging(rng, 5);
        TaggedPrompt tagged = parse_tagged(gen.raw, 5);
        require(strip_tags(tagged).text() == gen.expected_base,
                "round-trip mismatch for: " + gen.raw);
        require(tagged.spans.size() == gen.expected_spans.size(),
                "span count mismatch for: " + gen.raw);
        for (std::size_t s = 0; s < tagged.spans.size(); ++s) {
            require(tagged.spans[s].start_word == gen.expected_spans[s].first &&
                        tagged.spans[s].end_word == gen.expected_spans[s].second,
                    "span range mismatch for: " + gen.raw);
            require(tagged.spans[s].word_count() >= 1 &&
                        tagged.spans[s].word_count() <= 5,
                    "span width out of bounds for: " + gen.raw);
        }
    }

    auto expect_kind = [](const std::string& raw, TagParseError::Kind kind) {
        try {
            parse_tagged(raw, 5);
        } catch (const TagParseError& e) {
            require(e.kind() == kind, "wrong error kind for: " + raw);
            return;
        }
        throw AcceptanceFailure("no error raised for: " + raw);
    };
    expect_kind("open <edit> without close", TagParseError::Kind::UnbalancedTags);
    expect_kind("close </edit> without open", TagParseError::Kind::UnbalancedTags);
    expect_kind("<edit> a <edit> b </edit> c </edit>",
                TagParseError::Kind::UnbalancedTags);
    expect_kind("no tags here at all", TagParseError::Kind::NoSpans);
    expect_kind("<edit> one two three four five six </edit>",
                TagParseError::Kind::SpanTooLong);
}

// ---------------------------------------------------------------------------
// 2. Containment oracle equivalence: exhaustive over prompts of <= 8 words
//    and every distinct proposal reachable within 3 operations.

void enumerate_reachable(const std::vector<std::string>& original,
                         const std::vector<std::string>& vocab,
                         std::size_t max_ops,
                         std::set<std::vector<std::string>>& out) {
    std::set<std::vector<std::string>> frontier{original};
    out.insert(original);
    for (std::size_t depth = 0; depth < max_ops; ++depth) {
        std::set<std::vector<std::string>> next;
        for (const auto& seq : frontier) {
            for (std::size_t i = 0; i < seq.size(); ++i) {
                if (seq.size() > 1) {  // delete
                    auto copy = seq;
                    copy.erase(copy.begin() + static_cast<std::ptrdiff_t>(i));
                    if (out.insert(copy).second) next.insert(copy);
                }
                for (const auto& w : vocab) {  // substitute
                    if (seq[i] == w) continue;
                    auto copy = seq;
                    copy[i] = w;
                    if (out.insert(copy).second) next.insert(copy);
                }
            }
            for (std::size_t g = 0; g <= seq.size(); ++g) {  // insert
                for (const auto& w : vocab) {
                    auto copy = seq;
                    copy.insert(copy.begin() + static_cast<std::ptrdiff_t>(g), w);
                    if (out.insert(copy).second) next.insert(copy);
                }
            }
        }
        frontier = std::move(next);
    }
}

void check_containment_oracle_equivalence() {
    const std::vector<std::string> vocab{"a", "b", "c"};
    std::size_t checked = 0;

    for (std::size_t n = 1; n <= 8; ++n) {
        // repeated-word patterns stress alignment ties
        std::vector<std::vector<std::string>> originals;
        std::vector<std::string> alternating;
        std::vector<std::string> cycle3;
        std::vector<std::string> constant;
        for (std::size_t i = 0; i < n; ++i) {
            alternating.push_back(i % 2 == 0 ? "a" : "b");
            cycle3.push_back(i % 3 == 0 ? "a" : (i % 3 == 1 ? "b" : "c"));
            constant.push_back("a");
        }
        originals.push_back(alternating);
        if (n >= 3 && cycle3 != alternating) originals.push_back(cycle3);
        if (n >= 2 && n <= 5) originals.push_back(constant);

        for (const auto& original : originals) {
            std::vector<std::vector<EditSpan>> span_sets;
            for (std::size_t start = 0; start < n; ++start) {
                for (std::size_t len = 1; len <= 2 && start + len <= n; ++len) {
                    EditSpan s;
                    s.start_word = start;
                    s.end_word = start + len;
                    span_sets.push_back({s});
                }
            }
            if (n >= 4) {
                EditSpan first;
                first.start_word = 0;
                first.end_word = 1;
                EditSpan last;
                last.start_word = n - 2;
                last.end_word = n;
                span_sets.push_back({first, last});
            }

            std::set<std::vector<std::string>> proposals;
            enumerate_reachable(original, vocab, 3, proposals);

            std::string original_text;
            for (const auto& w : original) {
                if (!original_text.empty()) original_text += ' ';
                original_text += w;
            }
            Prompt original_prompt(original_text);

            for (const auto& spans : span_sets) {
                for (const auto& proposed : proposals) {
                    if (proposed.empty()) continue;
                    std::string proposed_text;
                    for (const auto& w : proposed) {
                        if (!proposed_text.empty()) proposed_text += ' ';
                        proposed_text += w;
                    }
                    auto report = containment_check(original_prompt, spans,
                                                    Prompt(proposed_text));
                    auto verdict = lpo::testing::alignment_oracle(
                        original, proposed, spans, 3);
                    require(verdict.feasible,
                            "oracle found no alignment within 3 ops: " +
                                original_text + " -> " + proposed_text);
                    require(report.distance == verdict.distance,
                            "distance mismatch: " + original_text + " -> " +
                                proposed_text);
                    require(report.contained == verdict.contained,
                            "containment mismatch: " + original_text + " -> " +
                                proposed_text);
                    ++checked;
                }
            }
        }
    }
    require(checked > 100000,
            "exhaustive sweep unexpectedly small: " + std::to_string(checked));
    std::printf("        (containment pairs checked: %zu)\n", checked);
}

// ---------------------------------------------------------------------------
// 3. Evaluator fidelity: accuracy equals the brute-force mean of
//    score_example; serial and concurrent evaluation agree exactly.

void check_evaluator_fidelity() {
    TaskSpec spec;
    spec.task_id = "fixture20";
    spec.answer_kind = AnswerKind::Integer;

    std::vector<Example> examples;
    for (int i = 0; i < 20; ++i)
        examples.push_back({"item " + std::to_string(i), std::to_string(i),
                            "fixture20", Split::Dev});

    auto handler = [](const ChatRequest& request) {
        const std::string& content = request.messages.back().content;
        std::size_t pos = content.rfind("item ");
        int i = std::stoi(content.substr(pos + 5));
        // wrong on indices divisible by 3 -> 13 correct out of 20
        return i % 3 == 0 ? std::string("The answer is 999999")
                          : "The answer is " + std::to_string(i);
    };
    auto provider = std::make_shared<ScriptedProvider>(handler);
    Gateway gateway(provider, provider, default_task_settings(),
                    default_proposal_settings());

    Prompt prompt("count carefully");
    EvalResult serial = evaluate(prompt, examples, spec, gateway, {1});
    EvalResult parallel = evaluate(prompt, examples, spec, gateway, {8});

    double sum = 0.0;
    for (const auto& ex : examples) {
        std::string output = handler(gateway.make_request(
            Role::Task, {{Speaker::User, spec.render(prompt.text(), ex.input)}}));
        sum += score_example(extract_answer(output, spec.answer_kind), ex.gold,
                             spec.answer_kind);
    }
    double brute = sum / static_cast<double>(examples.size());

    require(serial.accuracy == brute, "serial accuracy differs from brute mean");
    require(parallel.accuracy == brute,
            "parallel accuracy differs from brute mean");
    require(serial.per_example == parallel.per_example,
            "per-example bits differ between serial and concurrent runs");
    require(serial.accuracy == 13.0 / 20.0, "fixture accuracy is off");
}

// ---------------------------------------------------------------------------
// 4. Search oracle equivalence over all tiny configurations.

std::uint64_t fnv(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::size_t hits_of(const std::string& prompt) { return fnv(prompt) % 9; }

std::string propose_text(const std::string& parent, std::size_t k) {
    std::uint64_t v = fnv(parent) + 0x9e3779b9ull * (k + 1);
    if (v % 5 == 0) return parent;
    return parent + " w" + std::to_string(v % 3);
}

struct ScenarioState {
    std::mutex mutex;
    std::map<std::string, std::size_t> counters;
};

Gateway scenario_gateway(std::shared_ptr<ScenarioState> state) {
    auto task = std::make_shared<ScriptedProvider>([](const ChatRequest& r) {
        const std::string& content = r.messages.back().content;
        std::size_t q = content.rfind("\n\nQ: case ");
        std::size_t a = content.rfind("\nA:");
        std::string prompt = content.substr(0, q);
        std::size_t idx = std::stoull(content.substr(q + 10, a - q - 10));
        return idx < hits_of(prompt) ? "The answer is k" + std::to_string(idx)
                                     : std::string("The answer is wrong");
    });
    auto proposal = std::make_shared<ScriptedProvider>(
        [state](const ChatRequest& r) {
            const std::string& content = r.messages.back().content;
            std::size_t pos = content.find("Instruction:\n");
            std::size_t begin = pos + std::string("Instruction:\n").size();
            std::size_t end = content.find("\n\n", begin);
            std::string parent = content.substr(begin, end - begin);
            std::lock_guard lock(state->mutex);
            return propose_text(parent, state->counters[parent]++);
        });
    return Gateway(task, proposal, default_task_settings(),
                   default_proposal_settings());
}

SearchTask scenario_task() {
    TaskSpec spec;
    spec.task_id = "scenario";
    spec.answer_kind = AnswerKind::ExactString;
    SearchTask task;
    task.spec = spec;
    for (int i = 0; i < 4; ++i)
        task.train.push_back({"case " + std::to_string(100 + i),
                              "k" + std::to_string(100 + i), "scenario",
                              Split::Train});
    for (int i = 0; i < 8; ++i)
        task.dev.push_back({"case " + std::to_string(i), "k" + std::to_string(i),
                            "scenario", Split::Dev});
    return task;
}

void check_search_oracle_equivalence() {
    TemplateCatalog catalog = lpo::testing::load_catalog();
    lpo::testing::SearchScenario scenario{
        [](const std::string& p) {
            return static_cast<double>(hits_of(p)) / 8.0;
        },
        propose_text};

    for (int steps : {1, 2}) {
        for (int beam : {1, 2}) {
            for (int proposals : {1, 2}) {
                for (const std::string init :
                     {"begin the work", "review all sums carefully",
                      "check twice"}) {
                    auto state = std::make_shared<ScenarioState>();
                    Gateway gateway = scenario_gateway(state);
                    NullEventSink sink;
                    SearchConfig cfg;
                    cfg.n_steps = steps;
                    cfg.beam_size = beam;
                    cfg.n_proposals = proposals;
                    cfg.init_prompt = init;
                    cfg.seed = 3;
                    cfg.minibatch_size = 4;
                    cfg.run_final_test = false;
                    RunResult result =
                        run(cfg, Strategy::Ape, Mode::Global, scenario_task(),
                            gateway, catalog, ProposalConfig{}, sink);

                    auto brute = lpo::testing::brute_force_search(
                        init, steps, beam, proposals, scenario);

                    std::string label =
                        " [steps=" + std::to_string(steps) +
                        " beam=" + std::to_string(beam) +
                        " proposals=" + std::to_string(proposals) + " init=\"" +
                        init + "\"]";
                    require(result.best.prompt.text() == brute.best.text,
                            "best prompt differs" + label);
                    require(result.best.dev_score == brute.best.score,
                            "best score differs" + label);
                    require(result.optimal_timestep == brute.optimal_timestep,
                            "optimal timestep differs" + label);
                    require(result.pool.size() == brute.pool.size(),
                            "pool size differs" + label);
                    for (std::size_t i = 0; i < result.pool.size(); ++i) {
                        require(result.pool[i].prompt.text() ==
                                        brute.pool[i].text &&
                                    result.pool[i].dev_score ==
                                        brute.pool[i].score &&
                                    result.pool[i].timestep ==
                                        brute.pool[i].timestep,
                                "pool entry " + std::to_string(i) + " differs" +
                                    label);
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 5. Init-best rule at stock defaults: when nothing beats the init prompt the
//    reported optimal timestep is n_steps + 1 = 4.

void check_init_best_rule() {
    std::string init = "the one good prompt";
    auto task_provider = std::make_shared<ScriptedProvider>(
        [init](const ChatRequest& r) {
            const std::string& content = r.messages.back().content;
            bool is_init = content.rfind(init + "\n\nQ:", 0) == 0;
            std::size_t q = content.rfind("\n\nQ: case ");
            std::size_t a = content.rfind("\nA:");
            std::size_t idx = std::stoull(content.substr(q + 10, a - q - 10));
            return is_init ? "The answer is k" + std::to_string(idx)
                           : std::string("The answer is wrong");
        });
    std::atomic<int> n{0};
    auto proposal_provider = std::make_shared<ScriptedProvider>(
        [&n](const ChatRequest&) { return "noise " + std::to_string(n++); });
    Gateway gateway(task_provider, proposal_provider, default_task_settings(),
                    default_proposal_settings());
    TemplateCatalog catalog = lpo::testing::load_catalog();
    NullEventSink sink;

    SearchConfig cfg;  // stock defaults: 3 steps, beam 4, 4 proposals
    cfg.init_prompt = init;
    cfg.seed = 5;
    cfg.minibatch_size = 4;
    cfg.run_final_test = false;
    RunResult result = run(cfg, Strategy::Ape, Mode::Global, scenario_task(),
                           gateway, catalog, ProposalConfig{}, sink);

    require(result.best.prompt.text() == init, "init prompt should have won");
    require(result.optimal_timestep == 4,
            "expected optimal timestep 4, got " +
                std::to_string(result.optimal_timestep));
    require((result.best.prompt.text() == init) ==
                (result.optimal_timestep == cfg.n_steps + 1),
            "init-best biconditional violated");
}

// ---------------------------------------------------------------------------
// 6. Convergence phenomenology over 50 seeded synthetic tasks at stock
//    defaults: local converges no later than global in the median and loses
//    at most 0.02 mean final oracle score.

SyntheticTask convergence_task(std::uint64_t seed) {
    static const std::vector<std::string> keyword_pool{
        "verify", "carefully", "recheck", "justify", "itemize", "confirm"};
    static const std::vector<std::string> filler_pool{
        "gently", "broadly", "loosely", "quickly", "roughly", "plainly"};
    detail::Rng rng(detail::derive_seed(seed, "task"));
    SyntheticTask task;
    task.name = "synth" + std::to_string(seed);
    std::vector<std::string> keywords = keyword_pool;
    rng.shuffle(keywords);
    task.required_keywords.assign(keywords.begin(), keywords.begin() + 3);
    task.distractor_keywords = {"think", "step"};
    std::vector<std::string> filler = filler_pool;
    rng.shuffle(filler);
    task.filler_words.assign(filler.begin(), filler.begin() + 3);
    task.n_train = 8;
    task.n_dev = 8;
    task.n_test = 0;
    task.seed = seed;
    return task;
}

struct ConvergenceOutcome {
    int optimal_timestep = 0;
    double final_oracle = 0.0;
};

ConvergenceOutcome convergence_run(const SyntheticTask& task, Mode mode,
                                   std::uint64_t seed,
                                   const TemplateCatalog& catalog) {
    ScriptedProposalPolicy policy;
    policy.edit_budget = 3;
    policy.honor_tags = true;
    policy.seed = seed;
    Gateway gateway(std::make_shared<SyntheticTaskProvider>(task),
                    std::make_shared<SyntheticProposalProvider>(task, policy,
                                                                catalog),
                    default_task_settings(), default_proposal_settings());
    SearchConfig cfg;  // stock defaults: 3 steps, beam 4, 4 proposals
    cfg.seed = seed;
    cfg.minibatch_size = 8;
    cfg.run_final_test = false;
    NullEventSink sink;
    ProposalConfig pcfg;
    pcfg.mode = mode;
    RunResult result = run(cfg, Strategy::Apo, mode,
                           split_task(task.spec(), task.examples()), gateway,
                           catalog, pcfg, sink);
    return {result.optimal_timestep, oracle_score(result.best.prompt, task)};
}

double median_of(std::vector<int> values) {
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2]
                      : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

void check_convergence_phenomenology() {
    TemplateCatalog catalog = lpo::testing::load_catalog();
    std::vector<int> local_steps;
    std::vector<int> global_steps;
    double local_score_sum = 0.0;
    double global_score_sum = 0.0;
    const int n_tasks = 50;

    for (int s = 0; s < n_tasks; ++s) {
        SyntheticTask task = convergence_task(1000 + s);
        auto local = convergence_run(task, Mode::Local, 1000 + s, catalog);
        auto global = convergence_run(task, Mode::Global, 1000 + s, catalog);
        local_steps.push_back(local.optimal_timestep);
        global_steps.push_back(global.optimal_timestep);
        local_score_sum += local.final_oracle;
        global_score_sum += global.final_oracle;
    }

    double local_median = median_of(local_steps);
    double global_median = median_of(global_steps);
    double local_mean = local_score_sum / n_tasks;
    double global_mean = global_score_sum / n_tasks;
    std::printf(
        "        (median timestep local %.1f vs global %.1f; mean oracle "
        "local %.4f vs global %.4f)\n",
        local_median, global_median, local_mean, global_mean);

    require(local_median <= global_median,
            "local median timestep exceeds global");
    require(local_mean >= global_mean - 0.02,
            "local mean oracle score trails global by more than 0.02");
}

// ---------------------------------------------------------------------------
// 7. Mode soundness audit over recorded runs.

void audit_store(const std::filesystem::path& store_path, Mode mode) {
    auto store = ReplayStore::load(store_path);
    std::size_t proposal_requests = 0;
    for (const auto& request : store->requests()) {
        for (const auto& message : request.messages) {
            if (mode == Mode::Global) {
                require(message.content.find(kFig2FirstLine) == std::string::npos,
                        "global-mode request contains the edit-scope "
                        "instruction: " +
                            store_path.string());
                require(message.content.find("<edit>") == std::string::npos,
                        "global-mode request contains edit tags: " +
                            store_path.string());
            }
        }
        if (mode == Mode::Local && request.role_tag == Role::Proposal) {
            const std::string& content = request.messages.front().content;
            if (content.find(kProposeMarker) != std::string::npos &&
                content.find(kFig2FirstLine) == std::string::npos) {
                ++proposal_requests;
                require(content.find(kReplyInstruction) != std::string::npos,
                        "local-mode proposal request lacks the tag-free reply "
                        "instruction");
                require(content.find("<edit>") != std::string::npos,
                        "local-mode proposal request lacks the tagged prompt");
            }
        }
    }
    if (mode == Mode::Local)
        require(proposal_requests > 0,
                "no proposal requests found in the local store");
}

void check_mode_soundness_audit() {
    audit_store(lpo::testing::repo_root() / "fixtures/pe2_global/replay.jsonl",
                Mode::Global);
    audit_store(lpo::testing::repo_root() / "fixtures/pe2_local/replay.jsonl",
                Mode::Local);

    // also record a fresh pair and audit it
    lpo::testing::TempDir tmp("audit");
    SyntheticTask task = convergence_task(42);
    task.save(tmp.path() / "task.json");
    for (Mode mode : {Mode::Global, Mode::Local}) {
        RunConfig cfg;
        cfg.strategy = Strategy::Apo;
        cfg.mode = mode;
        cfg.seed = 42;
        cfg.search.seed = 42;
        cfg.search.n_steps = 2;
        cfg.search.beam_size = 2;
        cfg.search.n_proposals = 2;
        cfg.search.minibatch_size = 8;
        cfg.proposal.mode = mode;
        cfg.templates_dir = lpo::testing::repo_root() / "templates";
        cfg.out_dir = tmp.path() / (mode == Mode::Global ? "g" : "l");
        cfg.provider.kind = "synthetic";
        cfg.provider.record = true;
        cfg.synthetic.file = tmp.path() / "task.json";
        cmd_optimize(cfg);
        audit_store(cfg.out_dir / "replay.jsonl", mode);
    }
}

// ---------------------------------------------------------------------------
// 8. Replay determinism: fixture runs verify byte for byte, two replays agree
//    byte for byte, and the report reproduces the recorded accuracy pair.

void check_replay_determinism() {
    auto root = lpo::testing::repo_root();
    for (const char* dir : {"fixtures/pe2_global", "fixtures/pe2_local"}) {
        auto verdict = cmd_replay_verify(root / dir);
        require(verdict.pass, std::string(dir) + ": " + verdict.detail);
    }

    // two replay executions from the same store are byte-identical
    auto replay_once = [&](const std::filesystem::path& dir) {
        RunConfig cfg = RunConfig::load(dir / "run.toml");
        Gateway gateway = build_gateway(cfg, {}, dir / "replay.jsonl");
        SearchTask task = build_task(cfg);
        TemplateCatalog catalog = TemplateCatalog::load(cfg.templates_dir);
        NullEventSink sink;
        RunResult result = run(cfg.search, cfg.strategy, cfg.mode, task, gateway,
                               catalog, cfg.proposal, sink);
        return to_json(result).dump();
    };
    auto fixture = root / "fixtures/pe2_local";
    require(replay_once(fixture) == replay_once(fixture),
            "two replays of the same store differ");

    lpo::testing::TempDir tmp("acc_report");
    Report report = cmd_report(
        {root / "fixtures/pe2_global", root / "fixtures/pe2_local"}, tmp.path());
    require(report.rows.size() == 2, "expected two report rows");
    std::string csv = report_csv(report);
    require(csv.find("gsm8k-fixture,pe2,global,1,100.0,78.7,") !=
                std::string::npos,
            "global fixture row does not show 78.7:\n" + csv);
    require(csv.find("gsm8k-fixture,pe2,local,1,100.0,80.6,") !=
                std::string::npos,
            "local fixture row does not show 80.6:\n" + csv);
}

// ---------------------------------------------------------------------------
// 9. Budget accounting on recorded fixture runs.

void check_budget_accounting() {
    for (const char* dir : {"fixtures/pe2_global", "fixtures/pe2_local"}) {
        auto events =
            read_events(lpo::testing::repo_root() / dir / "events.jsonl");
        int n_proposals = 0;
        int max_tag_retries = 0;
        std::size_t expansions = 0;
        for (const auto& event : events) {
            if (event.type == "run_start") {
                n_proposals = event.data.at("n_proposals").get<int>();
                max_tag_retries = event.data.at("max_tag_retries").get<int>();
            }
            if (event.type == "proposal") {
                ++expansions;
                int spent = event.data.at("proposal_calls_spent").get<int>();
                int bound = n_proposals * (1 + max_tag_retries) + 2;
                require(spent <= bound,
                        std::string(dir) + ": candidate-step spent " +
                            std::to_string(spent) + " proposal calls, bound " +
                            std::to_string(bound));
            }
        }
        require(expansions > 0,
                std::string(dir) + ": no expansion events recorded");
    }
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {"edit-tag-protocol", check_edit_tag_protocol},
        {"containment-oracle-equivalence", check_containment_oracle_equivalence},
        {"evaluator-fidelity", check_evaluator_fidelity},
        {"search-oracle-equivalence", check_search_oracle_equivalence},
        {"init-best-rule", check_init_best_rule},
        {"convergence-phenomenology", check_convergence_phenomenology},
        {"mode-soundness-audit", check_mode_soundness_audit},
        {"replay-determinism", check_replay_determinism},
        {"budget-accounting", check_budget_accounting},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            criterion.check();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        if (error.empty()) {
            std::printf("[PASS] %s (%.2fs)\n", criterion.name.c_str(), seconds);
        } else {
            ++failures;
            std::printf("[FAIL] %s (%.2fs): %s\n", criterion.name.c_str(),
                        seconds, error.c_str());
        }
        std::fflush(stdout);
    }
    if (failures > 0)
        std::printf("%d criterion(s) failed\n", failures);
    else
        std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
