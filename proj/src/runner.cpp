#include "lpo/runner.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lpo/errors.hpp"

namespace lpo {
namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            default: out.push_back(c);
        }
    }
    out += '"';
    return out;
}

std::string relative_to(const std::filesystem::path& path,
                        const std::filesystem::path& anchor) {
    if (path.empty()) return "";
    std::error_code ec;
    auto abs_path = std::filesystem::absolute(path);
    auto abs_anchor = std::filesystem::absolute(anchor);
    auto rel = std::filesystem::relative(abs_path, abs_anchor, ec);
    if (ec || rel.empty()) return abs_path.string();
    return rel.string();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string api_key_from_env() {
    const char* key = std::getenv("LPO_API_KEY");
    return key ? key : "";
}

RunResult execute(const RunConfig& cfg, Gateway& gateway, EventSink& events) {
    SearchTask task = build_task(cfg);
    TemplateCatalog catalog = TemplateCatalog::load(cfg.templates_dir);
    return run(cfg.search, cfg.strategy, cfg.mode, task, gateway, catalog,
               cfg.proposal, events);
}

}  // namespace

SearchTask build_task(const RunConfig& cfg) {
    if (!cfg.synthetic.file.empty()) {
        SyntheticTask synth = SyntheticTask::load(cfg.synthetic.file);
        return split_task(synth.spec(), synth.examples());
    }
    auto examples = load_dataset(cfg.task_data, cfg.task_spec, cfg.seed);
    return split_task(cfg.task_spec, examples);
}

Gateway build_gateway(const RunConfig& cfg,
                      const std::filesystem::path& record_store,
                      std::optional<std::filesystem::path> replay_override) {
    RoleSettings task_settings{cfg.provider.task_model,
                               cfg.provider.task_temperature,
                               cfg.provider.max_tokens};
    RoleSettings proposal_settings{cfg.provider.proposal_model,
                                   cfg.provider.proposal_temperature,
                                   cfg.provider.max_tokens};

    if (replay_override) {
        return Gateway::replay_only(ReplayStore::load(*replay_override),
                                    task_settings, proposal_settings);
    }

    if (cfg.provider.kind == "replay") {
        return Gateway::replay_only(ReplayStore::load(cfg.provider.replay_store),
                                    task_settings, proposal_settings);
    }

    std::shared_ptr<ChatProvider> task_provider;
    std::shared_ptr<ChatProvider> proposal_provider;
    if (cfg.provider.kind == "synthetic") {
        SyntheticTask synth = SyntheticTask::load(cfg.synthetic.file);
        ScriptedProposalPolicy policy{cfg.synthetic.edit_budget,
                                      cfg.synthetic.honor_tags,
                                      cfg.synthetic.flaky_identification,
                                      cfg.seed,
                                      cfg.synthetic.vocabulary};
        TemplateCatalog catalog = TemplateCatalog::load(cfg.templates_dir);
        task_provider = std::make_shared<SyntheticTaskProvider>(synth);
        proposal_provider =
            std::make_shared<SyntheticProposalProvider>(synth, policy, catalog);
    } else {
        HttpProviderConfig http;
        http.base_url = cfg.provider.api_base;
        http.api_key = api_key_from_env();
        task_provider = std::make_shared<HttpProvider>(http);
        proposal_provider = std::make_shared<HttpProvider>(http);
    }

    Gateway gateway(std::move(task_provider), std::move(proposal_provider),
                    task_settings, proposal_settings);
    if (cfg.provider.record) {
        std::filesystem::path store_path = cfg.provider.replay_store.empty()
                                               ? record_store
                                               : cfg.provider.replay_store;
        gateway.set_store(ReplayStore::open_for_record(store_path),
                          Gateway::CacheMode::Record);
    }
    return gateway;
}

std::string config_to_text(const RunConfig& cfg,
                           const std::filesystem::path& anchor) {
    std::ostringstream out;
    out << "strategy = " << quote(to_string(cfg.strategy)) << "\n";
    out << "mode = " << quote(to_string(cfg.mode)) << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "templates_dir = " << quote(relative_to(cfg.templates_dir, anchor))
        << "\n";
    out << "out_dir = " << quote(".") << "\n";
    out << "\n[search]\n";
    out << "n_steps = " << cfg.search.n_steps << "\n";
    out << "beam_size = " << cfg.search.beam_size << "\n";
    out << "n_proposals = " << cfg.search.n_proposals << "\n";
    out << "init_prompt = " << quote(cfg.search.init_prompt) << "\n";
    out << "dev_size = " << cfg.search.dev_size << "\n";
    out << "minibatch = " << cfg.search.minibatch_size << "\n";
    out << "workers = " << cfg.search.eval_workers << "\n";
    out << "final_test = " << (cfg.search.run_final_test ? "true" : "false")
        << "\n";
    out << "\n[proposal]\n";
    out << "strict_containment = "
        << (cfg.proposal.strict_containment ? "true" : "false") << "\n";
    out << "max_span_words = " << cfg.proposal.max_span_words << "\n";
    out << "max_tag_retries = " << cfg.proposal.max_tag_retries << "\n";
    out << "pe2_max_edits = " << cfg.proposal.pe2_max_edits << "\n";
    out << "errors_per_gradient = " << cfg.proposal.errors_per_gradient << "\n";
    out << "identify_with_gradient = "
        << (cfg.proposal.identify_with_gradient ? "true" : "false") << "\n";
    out << "fallback_to_global = "
        << (cfg.proposal.fallback_to_global ? "true" : "false") << "\n";
    out << "\n[provider]\n";
    out << "kind = " << quote(cfg.provider.kind) << "\n";
    out << "record = " << (cfg.provider.record ? "true" : "false") << "\n";
    if (!cfg.provider.replay_store.empty())
        out << "replay_store = "
            << quote(relative_to(cfg.provider.replay_store, anchor)) << "\n";
    out << "task_model = " << quote(cfg.provider.task_model) << "\n";
    out << "proposal_model = " << quote(cfg.provider.proposal_model) << "\n";
    out << "task_temperature = " << cfg.provider.task_temperature << "\n";
    out << "proposal_temperature = " << cfg.provider.proposal_temperature << "\n";
    out << "max_tokens = " << cfg.provider.max_tokens << "\n";
    if (!cfg.provider.api_base.empty())
        out << "api_base = " << quote(cfg.provider.api_base) << "\n";
    if (!cfg.synthetic.file.empty()) {
        out << "\n[synthetic]\n";
        out << "file = " << quote(relative_to(cfg.synthetic.file, anchor)) << "\n";
        out << "edit_budget = " << cfg.synthetic.edit_budget << "\n";
        out << "honor_tags = " << (cfg.synthetic.honor_tags ? "true" : "false")
            << "\n";
        out << "flaky_identification = "
            << (cfg.synthetic.flaky_identification ? "true" : "false") << "\n";
        if (!cfg.synthetic.vocabulary.empty()) {
            std::string joined;
            for (const auto& w : cfg.synthetic.vocabulary) {
                if (!joined.empty()) joined += ' ';
                joined += w;
            }
            out << "vocabulary = " << quote(joined) << "\n";
        }
    }
    if (!cfg.task_data.empty()) {
        out << "\n[task]\n";
        out << "id = " << quote(cfg.task_spec.task_id) << "\n";
        out << "kind = " << quote(to_string(cfg.task_spec.answer_kind)) << "\n";
        out << "template = " << quote(cfg.task_spec.template_text) << "\n";
        if (!cfg.task_spec.gold_marker.empty())
            out << "gold_marker = " << quote(cfg.task_spec.gold_marker) << "\n";
        out << "data = " << quote(relative_to(cfg.task_data, anchor)) << "\n";
    }
    return out.str();
}

OptimizeOutcome cmd_optimize(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);

    Gateway gateway = build_gateway(cfg, cfg.out_dir / "replay.jsonl");
    JsonlEventSink events(cfg.out_dir / "events.jsonl");
    RunResult result = execute(cfg, gateway, events);

    write_file(cfg.out_dir / "run.toml", config_to_text(cfg, cfg.out_dir));
    write_file(cfg.out_dir / "run_result.json", to_json(result).dump(2) + "\n");
    write_file(cfg.out_dir / "best_prompt.txt", result.best.prompt.text() + "\n");
    return OptimizeOutcome{std::move(result), cfg.out_dir};
}

EvaluateOutcome cmd_evaluate(const RunConfig& cfg, const std::string& prompt_text,
                             Split split) {
    Gateway gateway = build_gateway(cfg, cfg.out_dir / "replay.jsonl");
    SearchTask task = build_task(cfg);
    const std::vector<Example>& examples = split == Split::Train  ? task.train
                                           : split == Split::Dev ? task.dev
                                                                 : task.test;
    if (examples.empty())
        throw SizeError(std::string("no examples in split ") + to_string(split));
    EvalResult eval = evaluate(Prompt(prompt_text), examples, task.spec, gateway,
                               EvalOptions{cfg.search.eval_workers});
    return EvaluateOutcome{eval.accuracy, eval.n, eval.failures.size(),
                           eval.partial};
}

Report cmd_report(const std::vector<std::filesystem::path>& run_dirs,
                  const std::filesystem::path& out_dir) {
    std::vector<RunRecord> records;
    records.reserve(run_dirs.size());
    for (const auto& dir : run_dirs) records.push_back(load_run_record(dir));
    Report report = build_report(records);

    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "report.csv", report_csv(report));
    write_file(out_dir / "report.txt", report_text_table(report));
    write_file(out_dir / "timesteps.csv", timesteps_csv(report));
    write_file(out_dir / "evolution.txt", evolution_text(report));
    return report;
}

ReplayVerifyOutcome cmd_replay_verify(const std::filesystem::path& run_dir) {
    auto config_path = run_dir / "run.toml";
    auto result_path = run_dir / "run_result.json";
    auto events_path = run_dir / "events.jsonl";
    auto store_path = run_dir / "replay.jsonl";
    for (const auto& p : {config_path, result_path, events_path, store_path})
        if (!std::filesystem::exists(p))
            return {false, "missing " + p.string()};

    RunConfig cfg = RunConfig::load(config_path);
    Gateway gateway = build_gateway(cfg, {}, store_path);
    MemoryEventSink events;
    std::optional<RunResult> result;
    try {
        result = execute(cfg, gateway, events);
    } catch (const CacheMissError& e) {
        return {false, "replay store is missing request digest " + e.digest()};
    }

    std::string replayed_result = to_json(*result).dump(2) + "\n";
    std::string stored_result = read_file(result_path);
    if (replayed_result != stored_result)
        return {false, "run_result.json diverges from the replayed run"};

    std::istringstream stored_events(read_file(events_path));
    std::string stored_line;
    std::size_t line_no = 0;
    for (const auto& event : events.events()) {
        ++line_no;
        if (!std::getline(stored_events, stored_line))
            return {false, "event log is shorter than the replayed run at line " +
                               std::to_string(line_no)};
        if (event.to_json().dump() != stored_line)
            return {false,
                    "event log diverges at line " + std::to_string(line_no) +
                        " (" + event.type + ", step " +
                        (event.data.contains("step")
                             ? std::to_string(event.data["step"].get<int>())
                             : std::string("-")) +
                        ")"};
    }
    if (std::getline(stored_events, stored_line) && !stored_line.empty())
        return {false, "event log has extra lines beyond the replayed run"};
    return {true, "ok"};
}

}  // namespace lpo
