#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lpo/prompt.hpp"
#include "lpo/providers.hpp"
#include "lpo/task.hpp"
#include "lpo/templates.hpp"

namespace lpo {

// A parametric hidden-keyword task. Example i is solvable iff the prompt
// contains required_keywords[i % k] as a word, so prompt quality has a
// closed form and local-vs-global search behavior is observable offline.
struct SyntheticTask {
    std::string name = "synthetic";
    std::vector<std::string> required_keywords;
    std::vector<std::string> distractor_keywords;
    std::vector<std::string> filler_words;
    std::size_t n_train = 8;
    std::size_t n_dev = 8;
    std::size_t n_test = 8;
    // optional explicit split composition: entry j = number of examples in
    // the split requiring keyword j. Empty means round-robin over keywords.
    std::vector<std::size_t> train_keyword_counts;
    std::vector<std::size_t> dev_keyword_counts;
    std::vector<std::size_t> test_keyword_counts;
    std::uint64_t seed = 0;

    void validate() const;  // keywords non-empty, disjoint from distractors

    TaskSpec spec() const;
    std::vector<Example> examples() const;

    // index of the keyword example `input` requires, parsed back out
    static std::size_t keyword_index_of(const std::string& input);

    nlohmann::json to_json() const;
    static SyntheticTask from_json(const nlohmann::json& j);
    static SyntheticTask load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

// Closed-form stand-in for the evaluator sum: the fraction of the task's
// examples whose required keyword appears as a word of the prompt.
double oracle_score(const Prompt& prompt, const SyntheticTask& task);

// Task-model stand-in: answers an example correctly iff the embedded prompt
// contains the example's required keyword; wrong answers are a fixed
// sentinel. Pure function of the request.
class SyntheticTaskProvider : public ChatProvider {
public:
    explicit SyntheticTaskProvider(SyntheticTask task);

    ChatResponse complete(const ChatRequest& request) override;

private:
    SyntheticTask task_;
};

// Deterministic proposal-model stand-in.
struct ScriptedProposalPolicy {
    std::size_t edit_budget = 2;   // word replacements per proposal
    bool honor_tags = true;        // restrict edits to tagged spans when present
    bool flaky_identification = false;  // first identify attempt may be malformed
    std::uint64_t seed = 0;
    // replacement words; empty means required ∪ distractors ∪ filler
    std::vector<std::string> vocabulary;
};

// Routes identification / gradient / proposal requests by the template text
// they embed and answers each deterministically from (request digest, seed).
// Identification tags the spans nearest to distractor words; proposals
// replace words drawn from the vocabulary pool, restricted to tagged spans
// when honor_tags is set and the request carries tags.
class SyntheticProposalProvider : public ChatProvider {
public:
    SyntheticProposalProvider(SyntheticTask task, ScriptedProposalPolicy policy,
                              const TemplateCatalog& catalog);

    ChatResponse complete(const ChatRequest& request) override;

private:
    std::string identify_reply(const ChatRequest& request) const;
    std::string propose_reply(const ChatRequest& request) const;

    SyntheticTask task_;
    ScriptedProposalPolicy policy_;
    std::string identify_marker_;
    std::vector<std::string> propose_markers_;
    std::vector<std::string> gradient_markers_;
    std::vector<std::string> pool_;  // required ∪ distractors ∪ filler
};

}  // namespace lpo
