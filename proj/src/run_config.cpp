#include "lpo/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lpo/errors.hpp"
#include "lpo/words.hpp"

namespace lpo {
namespace {

std::string unescape(const std::string& s, const std::string& where) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out.push_back(s[i]);
            continue;
        }
        if (i + 1 >= s.size())
            throw ConfigError(where + ": dangling escape in string");
        char c = s[++i];
        switch (c) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            default:
                throw ConfigError(where + ": unknown escape \\" + std::string(1, c));
        }
    }
    return out;
}

}  // namespace

KvConfig KvConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path.string());
}

KvConfig KvConfig::parse_string(const std::string& text,
                                const std::string& origin) {
    KvConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string where = origin + " line " + std::to_string(line_no);
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(where + ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty()) throw ConfigError(where + ": empty section name");
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string raw = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (!section.empty()) key = section + "." + key;

        std::string value;
        if (!raw.empty() && raw.front() == '"') {
            // quoted string; scan for the unescaped closing quote
            std::size_t end = std::string::npos;
            for (std::size_t i = 1; i < raw.size(); ++i) {
                if (raw[i] == '\\') {
                    ++i;
                    continue;
                }
                if (raw[i] == '"') {
                    end = i;
                    break;
                }
            }
            if (end == std::string::npos)
                throw ConfigError(where + ": unterminated string");
            value = unescape(raw.substr(1, end - 1), where);
        } else {
            std::size_t hash = raw.find('#');
            if (hash != std::string::npos) raw = trim(raw.substr(0, hash));
            value = raw;
            if (value.empty()) throw ConfigError(where + ": empty value");
        }
        cfg.values_[key] = value;
    }
    return cfg;
}

void KvConfig::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

bool KvConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KvConfig::get_string(const std::string& key,
                                 const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string KvConfig::require_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError(origin_ + ": missing required key \"" + key + "\"");
    return it->second;
}

long long KvConfig::get_int(const std::string& key, long long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        long long v = std::stoll(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key \"" + key + "\" is not an integer: " +
                          it->second);
    }
}

double KvConfig::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key \"" + key + "\" is not a number: " +
                          it->second);
    }
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true") return true;
    if (it->second == "false") return false;
    throw ConfigError(origin_ + ": key \"" + key + "\" is not true/false: " +
                      it->second);
}

RunConfig RunConfig::load(const std::filesystem::path& path,
                          const std::map<std::string, std::string>& overrides) {
    KvConfig kv = KvConfig::parse_file(path);
    for (const auto& [key, value] : overrides) kv.set(key, value);
    return from_kv(std::move(kv), path.parent_path());
}

RunConfig RunConfig::from_kv(KvConfig kv, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    cfg.strategy = strategy_from_string(kv.get_string("strategy", "ape"));
    cfg.mode = mode_from_string(kv.get_string("mode", "global"));
    cfg.seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));

    auto resolve = [&](const std::string& p) -> std::filesystem::path {
        std::filesystem::path path(p);
        if (p.empty() || path.is_absolute() || base_dir.empty()) return path;
        return base_dir / path;
    };

    cfg.templates_dir = resolve(kv.get_string("templates_dir", "templates"));
    cfg.out_dir = resolve(kv.get_string("out_dir", "runs/out"));

    cfg.search.n_steps = static_cast<int>(kv.get_int("search.n_steps", 3));
    cfg.search.beam_size = static_cast<int>(kv.get_int("search.beam_size", 4));
    cfg.search.n_proposals = static_cast<int>(kv.get_int("search.n_proposals", 4));
    cfg.search.init_prompt =
        kv.get_string("search.init_prompt", "Let's think step by step");
    cfg.search.seed = cfg.seed;
    cfg.search.dev_size =
        static_cast<std::size_t>(kv.get_int("search.dev_size", 0));
    cfg.search.minibatch_size =
        static_cast<std::size_t>(kv.get_int("search.minibatch", 8));
    cfg.search.eval_workers = static_cast<int>(kv.get_int("search.workers", 1));
    cfg.search.run_final_test = kv.get_bool("search.final_test", true);

    cfg.proposal.mode = cfg.mode;
    cfg.proposal.n_proposals = cfg.search.n_proposals;
    cfg.proposal.strict_containment =
        kv.get_bool("proposal.strict_containment", false);
    cfg.proposal.max_span_words =
        static_cast<std::size_t>(kv.get_int("proposal.max_span_words", 5));
    cfg.proposal.max_tag_retries =
        static_cast<int>(kv.get_int("proposal.max_tag_retries", 2));
    cfg.proposal.pe2_max_edits =
        static_cast<int>(kv.get_int("proposal.pe2_max_edits", 3));
    cfg.proposal.errors_per_gradient =
        static_cast<int>(kv.get_int("proposal.errors_per_gradient", 4));
    cfg.proposal.identify_with_gradient =
        kv.get_bool("proposal.identify_with_gradient", true);
    cfg.proposal.fallback_to_global =
        kv.get_bool("proposal.fallback_to_global", true);

    cfg.provider.kind = kv.get_string("provider.kind", "synthetic");
    cfg.provider.record = kv.get_bool("provider.record", true);
    cfg.provider.replay_store =
        resolve(kv.get_string("provider.replay_store", ""));
    cfg.provider.task_model =
        kv.get_string("provider.task_model", "gpt-3.5-turbo");
    cfg.provider.proposal_model =
        kv.get_string("provider.proposal_model", "gpt-4o");
    cfg.provider.task_temperature =
        kv.get_double("provider.task_temperature", 0.0);
    cfg.provider.proposal_temperature =
        kv.get_double("provider.proposal_temperature", 1.0);
    cfg.provider.max_tokens =
        static_cast<int>(kv.get_int("provider.max_tokens", 1024));
    cfg.provider.api_base = kv.get_string("provider.api_base", "");
    if (const char* env_base = std::getenv("LPO_API_BASE"))
        cfg.provider.api_base = env_base;

    // the task source: a synthetic task file, or a JSONL dataset
    if (cfg.provider.kind == "synthetic" || kv.has("synthetic.file")) {
        cfg.synthetic.file = resolve(kv.require_string("synthetic.file"));
        cfg.synthetic.edit_budget =
            static_cast<std::size_t>(kv.get_int("synthetic.edit_budget", 2));
        cfg.synthetic.honor_tags = kv.get_bool("synthetic.honor_tags", true);
        cfg.synthetic.flaky_identification =
            kv.get_bool("synthetic.flaky_identification", false);
        std::string vocab = kv.get_string("synthetic.vocabulary", "");
        if (!vocab.empty()) cfg.synthetic.vocabulary = word_texts(vocab);
    } else {
        cfg.task_spec.task_id = kv.require_string("task.id");
        cfg.task_spec.answer_kind =
            answer_kind_from_string(kv.get_string("task.kind", "integer"));
        cfg.task_spec.template_text =
            kv.get_string("task.template", "{prompt}\n\nQ: {input}\nA:");
        cfg.task_spec.gold_marker = kv.get_string("task.gold_marker", "");
        cfg.task_data = resolve(kv.require_string("task.data"));
    }

    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    search.validate();
    proposal.validate();
    if (provider.kind != "http" && provider.kind != "synthetic" &&
        provider.kind != "replay")
        throw ConfigError("provider.kind must be http, synthetic or replay, got " +
                          provider.kind);
    if (!std::filesystem::is_directory(templates_dir))
        throw ConfigError("templates directory not found: " +
                          templates_dir.string());
    if (!synthetic.file.empty()) {
        if (!std::filesystem::exists(synthetic.file))
            throw ConfigError("synthetic task file not found: " +
                              synthetic.file.string());
    } else {
        if (!std::filesystem::exists(task_data))
            throw ConfigError("task data file not found: " + task_data.string());
        task_spec.validate();
    }
    if (provider.kind == "replay") {
        std::filesystem::path store = provider.replay_store;
        if (store.empty())
            throw ConfigError("replay provider requires provider.replay_store");
        if (!std::filesystem::exists(store))
            throw ConfigError("replay store not found: " + store.string());
    }
}

}  // namespace lpo
