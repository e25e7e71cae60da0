#include "lpo/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "lpo/detail/rng.hpp"
#include "lpo/errors.hpp"
#include "lpo/tagged.hpp"
#include "lpo/words.hpp"

namespace lpo {
namespace {

constexpr const char* kSyntheticTemplate = "{prompt}\n\nQ: {input}\nA:";
constexpr const char* kSentinel = "The answer is unknown";

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

// The rendered synthetic template is "<prompt>\n\nQ: <input>\nA:".
struct ParsedTaskRequest {
    std::string prompt;
    std::string input;
};

ParsedTaskRequest parse_task_request(const std::string& content) {
    std::size_t q = content.rfind("\n\nQ: ");
    std::size_t a = content.rfind("\nA:");
    if (q == std::string::npos || a == std::string::npos || a <= q)
        throw ProviderError("synthetic task provider got an unexpected request: " +
                                content,
                            /*recoverable=*/false);
    std::size_t input_begin = q + 5;
    return {content.substr(0, q), content.substr(input_begin, a - input_begin)};
}

bool prompt_has_word(const std::string& prompt, const std::string& keyword) {
    for (const auto& w : word_texts(prompt))
        if (w == keyword) return true;
    return false;
}

// first line following "marker\n"
std::string line_after(const std::string& content, const std::string& marker) {
    std::size_t pos = content.find(marker);
    if (pos == std::string::npos) return "";
    std::size_t begin = pos + marker.size();
    std::size_t end = content.find('\n', begin);
    return content.substr(begin, end == std::string::npos ? std::string::npos
                                                          : end - begin);
}

std::string first_line(const std::string& text) {
    std::size_t nl = text.find('\n');
    return nl == std::string::npos ? text : text.substr(0, nl);
}

// Classification marker for a template: its first line up to any slot, so it
// matches the rendered request text.
std::string marker_of(const std::string& template_text) {
    std::string line = first_line(template_text);
    std::size_t brace = line.find('{');
    if (brace != std::string::npos) line = line.substr(0, brace);
    return trim(line);
}

std::uint64_t digest_seed(const ChatRequest& request, std::uint64_t seed) {
    return detail::derive_seed(seed, cache_key(request).digest);
}

}  // namespace

void SyntheticTask::validate() const {
    if (required_keywords.empty())
        throw ConfigError("synthetic task needs at least one required keyword");
    std::set<std::string> req(required_keywords.begin(), required_keywords.end());
    for (const auto& d : distractor_keywords)
        if (req.count(d))
            throw ConfigError("keyword \"" + d +
                              "\" is both required and a distractor");
    if (n_dev == 0 || n_train == 0)
        throw ConfigError("synthetic task needs train and dev examples");
    for (const auto* counts :
         {&train_keyword_counts, &dev_keyword_counts, &test_keyword_counts})
        if (!counts->empty() && counts->size() != required_keywords.size())
            throw ConfigError(
                "keyword count vectors must have one entry per required keyword");

    // every keyword must be required by at least one example
    std::vector<std::size_t> referenced(required_keywords.size(), 0);
    auto tally = [&](const std::vector<std::size_t>& counts, std::size_t n) {
        if (counts.empty()) {
            for (std::size_t i = 0; i < std::min(n, required_keywords.size()); ++i)
                referenced[i] += 1;
        } else {
            for (std::size_t j = 0; j < counts.size(); ++j) referenced[j] += counts[j];
        }
    };
    tally(train_keyword_counts, n_train);
    tally(dev_keyword_counts, n_dev);
    tally(test_keyword_counts, n_test);
    for (std::size_t j = 0; j < referenced.size(); ++j)
        if (referenced[j] == 0)
            throw ConfigError("required keyword \"" + required_keywords[j] +
                              "\" is never required by any example");
}

TaskSpec SyntheticTask::spec() const {
    TaskSpec s;
    s.task_id = name;
    s.answer_kind = AnswerKind::ExactString;
    s.prompt_position = PromptPosition::Prefix;
    s.template_text = kSyntheticTemplate;
    return s;
}

std::vector<Example> SyntheticTask::examples() const {
    validate();
    std::vector<Example> out;
    std::size_t index = 0;
    auto keyword_for = [&](const std::vector<std::size_t>& counts,
                           std::size_t i) -> std::size_t {
        if (counts.empty()) return i % required_keywords.size();
        std::size_t seen = 0;
        for (std::size_t j = 0; j < counts.size(); ++j) {
            seen += counts[j];
            if (i < seen) return j;
        }
        return required_keywords.size() - 1;
    };
    auto make_split = [&](Split split, std::size_t count,
                          const std::vector<std::size_t>& counts) {
        std::size_t total = count;
        if (!counts.empty()) {
            total = 0;
            for (auto c : counts) total += c;
        }
        for (std::size_t i = 0; i < total; ++i, ++index) {
            Example ex;
            ex.input = "case " + std::to_string(index) + " keyword " +
                       std::to_string(keyword_for(counts, i));
            ex.gold = "k" + std::to_string(index);
            ex.task_id = name;
            ex.split = split;
            out.push_back(std::move(ex));
        }
    };
    make_split(Split::Train, n_train, train_keyword_counts);
    make_split(Split::Dev, n_dev, dev_keyword_counts);
    make_split(Split::Test, n_test, test_keyword_counts);
    return out;
}

std::size_t SyntheticTask::keyword_index_of(const std::string& input) {
    std::size_t pos = input.rfind("keyword ");
    if (pos == std::string::npos)
        throw ProviderError("synthetic input lacks a keyword marker: " + input,
                            /*recoverable=*/false);
    return static_cast<std::size_t>(
        std::stoull(input.substr(pos + std::string("keyword ").size())));
}

nlohmann::json SyntheticTask::to_json() const {
    nlohmann::json j{{"name", name},
                     {"required_keywords", required_keywords},
                     {"distractor_keywords", distractor_keywords},
                     {"filler_words", filler_words},
                     {"n_train", n_train},
                     {"n_dev", n_dev},
                     {"n_test", n_test},
                     {"seed", seed}};
    if (!train_keyword_counts.empty()) j["train_keyword_counts"] = train_keyword_counts;
    if (!dev_keyword_counts.empty()) j["dev_keyword_counts"] = dev_keyword_counts;
    if (!test_keyword_counts.empty()) j["test_keyword_counts"] = test_keyword_counts;
    return j;
}

SyntheticTask SyntheticTask::from_json(const nlohmann::json& j) {
    SyntheticTask t;
    t.name = j.at("name").get<std::string>();
    t.required_keywords = j.at("required_keywords").get<std::vector<std::string>>();
    t.distractor_keywords =
        j.value("distractor_keywords", std::vector<std::string>{});
    t.filler_words = j.value("filler_words", std::vector<std::string>{});
    t.n_train = j.value("n_train", std::size_t{8});
    t.n_dev = j.value("n_dev", std::size_t{8});
    t.n_test = j.value("n_test", std::size_t{8});
    t.train_keyword_counts =
        j.value("train_keyword_counts", std::vector<std::size_t>{});
    t.dev_keyword_counts = j.value("dev_keyword_counts", std::vector<std::size_t>{});
    t.test_keyword_counts =
        j.value("test_keyword_counts", std::vector<std::size_t>{});
    t.seed = j.value("seed", std::uint64_t{0});
    t.validate();
    return t;
}

SyntheticTask SyntheticTask::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open synthetic task file: " + path.string());
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

void SyntheticTask::save(const std::filesystem::path& path) const {
    if (!path.parent_path().empty())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write synthetic task file: " + path.string());
    out << to_json().dump(2) << '\n';
}

double oracle_score(const Prompt& prompt, const SyntheticTask& task) {
    auto exs = task.examples();
    if (exs.empty()) return 0.0;
    std::size_t hit = 0;
    for (const auto& ex : exs) {
        std::size_t k = SyntheticTask::keyword_index_of(ex.input);
        if (prompt_has_word(prompt.text(), task.required_keywords[k])) ++hit;
    }
    return static_cast<double>(hit) / static_cast<double>(exs.size());
}

SyntheticTaskProvider::SyntheticTaskProvider(SyntheticTask task)
    : task_(std::move(task)) {
    task_.validate();
}

ChatResponse SyntheticTaskProvider::complete(const ChatRequest& request) {
    request.validate();
    if (request.role_tag != Role::Task)
        throw ProviderError("synthetic task provider got a proposal request",
                            /*recoverable=*/false);
    auto parsed = parse_task_request(request.messages.back().content);
    std::size_t k = SyntheticTask::keyword_index_of(parsed.input);
    if (k >= task_.required_keywords.size())
        throw ProviderError("synthetic example references keyword " +
                                std::to_string(k) + " outside the task",
                            /*recoverable=*/false);

    std::size_t case_pos = parsed.input.rfind("case ");
    std::string case_id =
        parsed.input.substr(case_pos + 5,
                            parsed.input.find(' ', case_pos + 5) - case_pos - 5);

    ChatResponse r;
    bool solvable = prompt_has_word(parsed.prompt, task_.required_keywords[k]);
    r.content = solvable ? "The answer is k" + case_id : kSentinel;
    r.finish_reason = FinishReason::Normal;
    r.provider = ProviderKind::Scripted;
    return r;
}

SyntheticProposalProvider::SyntheticProposalProvider(
    SyntheticTask task, ScriptedProposalPolicy policy,
    const TemplateCatalog& catalog)
    : task_(std::move(task)), policy_(policy) {
    identify_marker_ =
        marker_of(catalog.get(template_names::kIdentifyEditScope).text);
    for (const char* name :
         {template_names::kApePropose, template_names::kApoPropose,
          template_names::kPe2Propose})
        propose_markers_.push_back(marker_of(catalog.get(name).text));
    for (const char* name :
         {template_names::kApoGradient, template_names::kPe2Gradient})
        gradient_markers_.push_back(marker_of(catalog.get(name).text));

    if (!policy_.vocabulary.empty()) {
        pool_ = policy_.vocabulary;
    } else {
        pool_ = task_.required_keywords;
        pool_.insert(pool_.end(), task_.distractor_keywords.begin(),
                     task_.distractor_keywords.end());
        pool_.insert(pool_.end(), task_.filler_words.begin(),
                     task_.filler_words.end());
    }
    if (pool_.empty())
        throw ConfigError("synthetic proposal policy has an empty vocabulary pool");
}

ChatResponse SyntheticProposalProvider::complete(const ChatRequest& request) {
    request.validate();
    if (request.role_tag != Role::Proposal)
        throw ProviderError("synthetic proposal provider got a task request",
                            /*recoverable=*/false);
    const std::string& content = request.messages.front().content;

    ChatResponse r;
    r.finish_reason = FinishReason::Normal;
    r.provider = ProviderKind::Scripted;

    if (content.find(identify_marker_) != std::string::npos) {
        r.content = identify_reply(request);
        return r;
    }
    for (const auto& marker : propose_markers_) {
        if (content.find(marker) != std::string::npos) {
            r.content = propose_reply(request);
            return r;
        }
    }
    for (const auto& marker : gradient_markers_) {
        if (content.find(marker) != std::string::npos) {
            r.content =
                "The instruction is missing the task's code words; swap "
                "unhelpful words for the required code words.";
            return r;
        }
    }
    throw ProviderError("synthetic proposal provider cannot classify request: " +
                            first_line(content),
                        /*recoverable=*/false);
}

std::string SyntheticProposalProvider::identify_reply(
    const ChatRequest& request) const {
    const std::string& content = request.messages.front().content;
    std::string prompt = line_after(content, "Prompt:\n");
    auto words = word_texts(prompt);
    if (words.empty())
        throw ProviderError("identify request carries an empty prompt",
                            /*recoverable=*/false);

    // deliberately imperfect on occasion so retry paths get exercised
    bool first_attempt = request.messages.size() == 1;
    if (policy_.flaky_identification && first_attempt &&
        digest_seed(request, policy_.seed) % 4 == 0) {
        return "<edit> " + prompt;  // missing close tag
    }

    std::set<std::string> required(task_.required_keywords.begin(),
                                   task_.required_keywords.end());
    std::set<std::string> distractors(task_.distractor_keywords.begin(),
                                      task_.distractor_keywords.end());

    // span positions nearest to distractor words, padded with other
    // non-required words scanning from the end; at most 3 single-word spans
    constexpr std::size_t kMaxTargets = 3;
    std::vector<std::size_t> targets;
    for (std::size_t i = 0; i < words.size(); ++i)
        if (distractors.count(words[i])) targets.push_back(i);
    if (targets.size() > kMaxTargets) targets.resize(kMaxTargets);
    for (std::size_t i = words.size(); i-- > 0 && targets.size() < kMaxTargets;) {
        if (required.count(words[i]) || distractors.count(words[i])) continue;
        if (std::find(targets.begin(), targets.end(), i) == targets.end())
            targets.push_back(i);
    }
    std::sort(targets.begin(), targets.end());
    if (targets.empty()) targets.push_back(words.size() - 1);

    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (!out.empty()) out += ' ';
        bool tagged = std::find(targets.begin(), targets.end(), i) != targets.end();
        if (tagged)
            out += "<edit> " + words[i] + " </edit>";
        else
            out += words[i];
    }
    return out;
}

std::string SyntheticProposalProvider::propose_reply(
    const ChatRequest& request) const {
    const std::string& content = request.messages.front().content;
    std::string prompt = line_after(content, "Instruction:\n");
    if (prompt.empty())
        throw ProviderError("proposal request carries an empty instruction",
                            /*recoverable=*/false);

    detail::Rng rng(digest_seed(request, policy_.seed));

    std::vector<std::string> words;
    std::vector<std::size_t> editable;

    if (contains_edit_tag(prompt)) {
        TaggedPrompt tagged = parse_tagged(prompt, /*max_span_words=*/1000);
        words = word_texts(tagged.base.text());
        if (policy_.honor_tags) {
            for (const auto& span : tagged.spans)
                for (std::size_t i = span.start_word; i < span.end_word; ++i)
                    editable.push_back(i);
        }
    } else {
        words = word_texts(prompt);
    }
    if (editable.empty())
        for (std::size_t i = 0; i < words.size(); ++i) editable.push_back(i);

    std::size_t edits = std::min(policy_.edit_budget, editable.size());
    for (std::size_t e = 0; e < edits; ++e) {
        std::size_t pos = editable[rng.below(editable.size())];
        words[pos] = pool_[rng.below(pool_.size())];
    }
    return join_words(words);
}

}  // namespace lpo
