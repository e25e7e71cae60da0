#include "lpo/task.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "lpo/detail/rng.hpp"
#include "lpo/errors.hpp"
#include "lpo/words.hpp"

namespace lpo {

const char* to_string(AnswerKind k) {
    switch (k) {
        case AnswerKind::Integer: return "integer";
        case AnswerKind::MultipleChoice: return "multiple_choice";
        case AnswerKind::ExactString: return "exact_string";
    }
    return "integer";
}

const char* to_string(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Dev: return "dev";
        case Split::Test: return "test";
    }
    return "train";
}

AnswerKind answer_kind_from_string(const std::string& s) {
    if (s == "integer") return AnswerKind::Integer;
    if (s == "multiple_choice") return AnswerKind::MultipleChoice;
    if (s == "exact_string") return AnswerKind::ExactString;
    throw ConfigError("unknown answer kind: " + s +
                      " (expected integer, multiple_choice or exact_string)");
}

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "dev") return Split::Dev;
    if (s == "test") return Split::Test;
    throw FormatError("unknown split: " + s);
}

void TaskSpec::validate() const {
    auto count_slot = [&](std::string_view slot) {
        std::size_t n = 0;
        std::size_t pos = 0;
        while ((pos = template_text.find(slot, pos)) != std::string::npos) {
            ++n;
            pos += slot.size();
        }
        return n;
    };
    if (task_id.empty()) throw ConfigError("task_id is empty");
    if (count_slot("{prompt}") != 1 || count_slot("{input}") != 1)
        throw ConfigError("task template must contain {prompt} and {input} "
                          "exactly once: " + template_text);
}

std::string TaskSpec::render(const std::string& prompt_text,
                             const std::string& input) const {
    std::string out = template_text;
    auto replace_one = [&](std::string_view slot, const std::string& value) {
        std::size_t pos = out.find(slot);
        out.replace(pos, slot.size(), value);
    };
    replace_one("{prompt}", prompt_text);
    replace_one("{input}", input);
    return out;
}

std::string fold_case(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

std::optional<std::string> canonical_integer(const std::string& text) {
    std::string digits;
    bool negative = false;
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    if (i >= text.size()) return std::nullopt;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == ',') continue;  // digit grouping
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        digits.push_back(c);
    }
    if (digits.empty()) return std::nullopt;
    std::size_t nz = digits.find_first_not_of('0');
    if (nz == std::string::npos) return "0";
    digits.erase(0, nz);
    return negative ? "-" + digits : digits;
}

std::string normalize_gold(const std::string& raw, const TaskSpec& spec) {
    std::string text = raw;
    if (!spec.gold_marker.empty()) {
        std::size_t pos = text.rfind(spec.gold_marker);
        if (pos != std::string::npos) text = text.substr(pos + spec.gold_marker.size());
    }
    text = trim(text);
    switch (spec.answer_kind) {
        case AnswerKind::Integer: {
            if (auto canon = canonical_integer(text)) return *canon;
            // fall back to the extractor so golds like "The answer is 4" load
            if (auto extracted = extract_answer(text, AnswerKind::Integer))
                return *extracted;
            throw FormatError("gold is not an integer: \"" + raw + "\"");
        }
        case AnswerKind::MultipleChoice: {
            if (text.size() == 1 && std::isalpha(static_cast<unsigned char>(text[0])))
                return std::string(1, static_cast<char>(
                                          std::toupper(static_cast<unsigned char>(text[0]))));
            if (auto extracted = extract_answer(text, AnswerKind::MultipleChoice))
                return *extracted;
            throw FormatError("gold is not an option letter: \"" + raw + "\"");
        }
        case AnswerKind::ExactString:
            return fold_case(text);
    }
    return text;
}

std::vector<Example> load_dataset(const std::filesystem::path& path,
                                  const TaskSpec& spec, std::uint64_t seed,
                                  SplitRatios ratios) {
    spec.validate();
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open dataset file: " + path.string());

    std::vector<Example> examples;
    std::vector<std::size_t> unassigned;  // indices lacking an explicit split
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(path.string() + " line " + std::to_string(line_no) +
                                  ": bad JSON: " + e.what(),
                              line_no);
        }
        if (!j.contains("input") || !j.contains("target"))
            throw FormatError(path.string() + " line " + std::to_string(line_no) +
                                  ": missing `input` or `target` field",
                              line_no);
        Example ex;
        try {
            ex.input = j.at("input").get<std::string>();
            std::string target = j.at("target").is_string()
                                     ? j.at("target").get<std::string>()
                                     : j.at("target").dump();
            ex.gold = normalize_gold(target, spec);
        } catch (const FormatError&) {
            throw;
        } catch (const std::exception& e) {
            throw FormatError(path.string() + " line " + std::to_string(line_no) +
                                  ": " + e.what(),
                              line_no);
        }
        ex.task_id = spec.task_id;
        if (j.contains("split")) {
            ex.split = split_from_string(j.at("split").get<std::string>());
        } else {
            unassigned.push_back(examples.size());
        }
        if (ex.gold.empty())
            throw FormatError(path.string() + " line " + std::to_string(line_no) +
                                  ": empty gold after normalization",
                              line_no);
        examples.push_back(std::move(ex));
    }

    if (!unassigned.empty()) {
        detail::Rng rng(detail::derive_seed(seed, "dataset-split"));
        rng.shuffle(unassigned);
        std::size_t n = unassigned.size();
        auto n_train = static_cast<std::size_t>(ratios.train * static_cast<double>(n));
        auto n_dev = static_cast<std::size_t>(ratios.dev * static_cast<double>(n));
        for (std::size_t k = 0; k < n; ++k) {
            Split s = k < n_train            ? Split::Train
                      : k < n_train + n_dev  ? Split::Dev
                                             : Split::Test;
            examples[unassigned[k]].split = s;
        }
    }
    return examples;
}

std::vector<Example> filter_split(const std::vector<Example>& examples,
                                  Split split) {
    std::vector<Example> out;
    for (const auto& ex : examples)
        if (ex.split == split) out.push_back(ex);
    return out;
}

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Last standalone signed integer, commas allowed as digit grouping. A digit
// run preceded by `<digit>.` is a decimal fraction, not an integer.
std::optional<std::string> last_integer(const std::string& s) {
    std::optional<std::string> found;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_digit(s[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        std::string token;
        while (i < s.size() && (is_digit(s[i]) || (s[i] == ',' && i + 1 < s.size() &&
                                                   is_digit(s[i + 1])))) {
            if (s[i] != ',') token.push_back(s[i]);
            ++i;
        }
        bool fractional = start >= 2 && s[start - 1] == '.' && is_digit(s[start - 2]);
        if (fractional) continue;
        bool negative = false;
        if (start >= 1 && (s[start - 1] == '-' || s[start - 1] == '+')) {
            char before = start >= 2 ? s[start - 2] : ' ';
            bool signed_ok = !is_digit(before) &&
                             !std::isalpha(static_cast<unsigned char>(before));
            if (signed_ok) negative = s[start - 1] == '-';
        }
        std::size_t nz = token.find_first_not_of('0');
        if (nz == std::string::npos)
            token = "0";
        else
            token.erase(0, nz);
        found = negative ? "-" + token : token;
    }
    return found;
}

// Last parenthesized option letter like "(B)".
std::optional<std::string> last_option(const std::string& s) {
    std::optional<std::string> found;
    for (std::size_t i = 0; i + 2 < s.size(); ++i) {
        if (s[i] == '(' && std::isalpha(static_cast<unsigned char>(s[i + 1])) &&
            s[i + 2] == ')') {
            found = std::string(
                1, static_cast<char>(std::toupper(static_cast<unsigned char>(s[i + 1]))));
        }
    }
    return found;
}

// Text after the final "answer is" marker, else the final non-empty line.
std::optional<std::string> final_answer_text(const std::string& s) {
    const std::string folded = fold_case(s);
    const std::string marker = "answer is";
    std::size_t pos = folded.rfind(marker);
    std::string candidate;
    if (pos != std::string::npos) {
        candidate = s.substr(pos + marker.size());
        std::size_t nl = candidate.find('\n');
        if (nl != std::string::npos) candidate = candidate.substr(0, nl);
    } else {
        std::size_t end = s.size();
        while (end > 0) {
            std::size_t nl = s.rfind('\n', end - 1);
            std::size_t begin = nl == std::string::npos ? 0 : nl + 1;
            candidate = s.substr(begin, end - begin);
            if (!trim(candidate).empty() || begin == 0) break;
            end = begin - 1;
        }
    }
    std::string trimmed = trim(candidate);
    if (trimmed.empty()) return std::nullopt;
    return fold_case(trimmed);
}

}  // namespace

std::optional<std::string> extract_answer(const std::string& model_output,
                                          AnswerKind kind) {
    switch (kind) {
        case AnswerKind::Integer:
            return last_integer(model_output);
        case AnswerKind::MultipleChoice:
            return last_option(model_output);
        case AnswerKind::ExactString:
            return final_answer_text(model_output);
    }
    return std::nullopt;
}

int score_example(const std::optional<std::string>& extracted,
                  const std::string& gold, AnswerKind kind) {
    if (!extracted) return 0;
    switch (kind) {
        case AnswerKind::Integer: {
            auto lhs = canonical_integer(*extracted);
            auto rhs = canonical_integer(gold);
            return lhs && rhs && *lhs == *rhs ? 1 : 0;
        }
        case AnswerKind::MultipleChoice:
            return fold_case(trim(*extracted)) == fold_case(trim(gold)) ? 1 : 0;
        case AnswerKind::ExactString:
            return fold_case(trim(*extracted)) == fold_case(trim(gold)) ? 1 : 0;
    }
    return 0;
}

}  // namespace lpo
