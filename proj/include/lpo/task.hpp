#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lpo {

enum class AnswerKind { Integer, MultipleChoice, ExactString };
enum class Split { Train, Dev, Test };
enum class PromptPosition { Prefix, Suffix };

const char* to_string(AnswerKind k);
const char* to_string(Split s);
AnswerKind answer_kind_from_string(const std::string& s);
Split split_from_string(const std::string& s);

struct Example {
    std::string input;    // x
    std::string gold;     // y, normalized at load time
    std::string task_id;
    Split split = Split::Train;
};

// How a task renders requests and reads answers.
struct TaskSpec {
    std::string task_id;
    AnswerKind answer_kind = AnswerKind::Integer;
    PromptPosition prompt_position = PromptPosition::Prefix;
    // must contain {prompt} and {input} exactly once
    std::string template_text = "{prompt}\n\nQ: {input}\nA:";
    // when set, gold is the text after the final occurrence of this marker
    // (the "#### n" convention)
    std::string gold_marker;

    void validate() const;
    std::string render(const std::string& prompt_text,
                       const std::string& input) const;
};

// Split ratios used when a dataset file carries no split column.
struct SplitRatios {
    double train = 0.4;
    double dev = 0.2;
    double test = 0.4;
};

// Canonicalizes a raw gold string per the task's answer kind (and optional
// marker). Applied once at load time.
std::string normalize_gold(const std::string& raw, const TaskSpec& spec);

// Reads a JSONL dataset with fields `input`, `target` and optional `split`.
// Missing splits are assigned by a seeded shuffle with the given ratios.
std::vector<Example> load_dataset(const std::filesystem::path& path,
                                  const TaskSpec& spec,
                                  std::uint64_t seed = 0,
                                  SplitRatios ratios = {});

std::vector<Example> filter_split(const std::vector<Example>& examples,
                                  Split split);

// Pulls the answer out of a model's free-form output. Total: returns nullopt
// when no pattern matches, and nullopt never equals any gold.
std::optional<std::string> extract_answer(const std::string& model_output,
                                          AnswerKind kind);

// Exact-match evaluator: 1 iff the extracted answer equals gold under the
// kind's normalization.
int score_example(const std::optional<std::string>& extracted,
                  const std::string& gold, AnswerKind kind);

// Canonical form of an integer literal: sign, commas and leading zeros
// removed. Returns nullopt when the text is not an integer.
std::optional<std::string> canonical_integer(const std::string& text);

std::string fold_case(std::string s);

}  // namespace lpo
