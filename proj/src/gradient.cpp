#include "lpo/gradient.hpp"

#include <algorithm>
#include <cstdio>

#include "lpo/detail/rng.hpp"
#include "lpo/errors.hpp"
#include "lpo/words.hpp"

namespace lpo {

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Ape: return "ape";
        case Strategy::Apo: return "apo";
        case Strategy::Pe2: return "pe2";
    }
    return "ape";
}

const char* to_string(Mode m) { return m == Mode::Global ? "global" : "local"; }

Strategy strategy_from_string(const std::string& s) {
    if (s == "ape") return Strategy::Ape;
    if (s == "apo") return Strategy::Apo;
    if (s == "pe2") return Strategy::Pe2;
    throw ConfigError("unknown strategy: " + s + " (expected ape, apo or pe2)");
}

Mode mode_from_string(const std::string& s) {
    if (s == "global") return Mode::Global;
    if (s == "local") return Mode::Local;
    throw ConfigError("unknown mode: " + s + " (expected global or local)");
}

void ProposalConfig::validate() const {
    if (n_proposals < 1) throw ConfigError("n_proposals must be >= 1");
    if (max_span_words < 1) throw ConfigError("max_span_words must be >= 1");
    if (max_tag_retries < 0) throw ConfigError("max_tag_retries must be >= 0");
    if (pe2_max_edits < 1) throw ConfigError("pe2_max_edits must be >= 1");
    if (errors_per_gradient < 1)
        throw ConfigError("errors_per_gradient must be >= 1");
}

std::string format_error_cases(const std::vector<ErrorCase>& cases,
                               bool include_model_output) {
    if (cases.empty()) return "(none)";
    std::string out;
    for (const auto& c : cases) {
        if (!out.empty()) out += "\n\n";
        out += "Input: " + c.example.input;
        out += "\nExpected: " + c.example.gold;
        if (include_model_output) out += "\nModel answered: " + c.wrong_output;
    }
    return out;
}

std::string format_history(const std::vector<HistoryEntry>& history) {
    if (history.empty()) return "(none)";
    std::string out;
    char score[32];
    for (const auto& h : history) {
        if (!out.empty()) out += "\n";
        std::snprintf(score, sizeof score, "%.4f", h.dev_score);
        out += "- \"" + h.prompt_text + "\" scored " + score;
    }
    return out;
}

namespace {

// Seeded sample without replacement, preserving the source order.
template <typename T>
std::vector<T> sample_preserving_order(const std::vector<T>& items,
                                       std::size_t count, std::uint64_t seed) {
    if (items.size() <= count) return items;
    std::vector<std::size_t> indices(items.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    detail::Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(indices.size() - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(count);
    std::sort(indices.begin(), indices.end());
    std::vector<T> out;
    out.reserve(count);
    for (auto i : indices) out.push_back(items[i]);
    return out;
}

}  // namespace

TextualGradient generate_gradient(Strategy strategy, const Prompt& prompt,
                                  const std::vector<Example>& minibatch,
                                  const EvalResult& eval_result,
                                  const std::vector<HistoryEntry>& history,
                                  Gateway& gateway, const TemplateCatalog& catalog,
                                  const ProposalConfig& cfg, std::uint64_t seed,
                                  CallBudget& budget) {
    cfg.validate();
    TextualGradient gradient;
    gradient.strategy = strategy;

    const auto n_cases = static_cast<std::size_t>(cfg.errors_per_gradient);
    const std::uint64_t case_seed = detail::derive_seed(seed, "error-cases");

    if (strategy == Strategy::Ape) {
        // no model feedback: the gradient is sampled demonstrations
        auto demos = sample_preserving_order(minibatch, n_cases, case_seed);
        for (const auto& ex : demos) gradient.error_cases.push_back({ex, ""});
        return gradient;
    }

    std::vector<ErrorCase> all_errors;
    for (const auto& f : eval_result.failures)
        all_errors.push_back({f.example, f.model_output});
    gradient.error_cases = sample_preserving_order(all_errors, n_cases, case_seed);

    SlotMap slots{{"current_prompt", prompt.text()},
                  {"errors", format_error_cases(gradient.error_cases, true)}};
    const char* template_name = template_names::kApoGradient;
    if (strategy == Strategy::Pe2) {
        template_name = template_names::kPe2Gradient;
        gradient.history = history;
        slots["history"] = format_history(history);
    }

    if (!budget.try_spend())
        throw ProviderError("call budget exhausted before gradient call",
                            /*recoverable=*/false);
    ChatRequest request = gateway.make_request(
        Role::Proposal, {{Speaker::User, catalog.render(template_name, slots)}},
        static_cast<std::int64_t>(detail::derive_seed(seed, "gradient")));
    gradient.feedback_text = trim(gateway.complete(request).content);
    return gradient;
}

}  // namespace lpo
