#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpo/evaluate.hpp"
#include "lpo/gateway.hpp"
#include "lpo/prompt.hpp"
#include "lpo/task.hpp"
#include "lpo/templates.hpp"

namespace lpo {

enum class Strategy { Ape, Apo, Pe2 };
enum class Mode { Global, Local };

const char* to_string(Strategy s);
const char* to_string(Mode m);
Strategy strategy_from_string(const std::string& s);
Mode mode_from_string(const std::string& s);

struct ErrorCase {
    Example example;
    std::string wrong_output;  // empty for APE demo cases
};

struct HistoryEntry {
    std::string prompt_text;
    double dev_score = 0.0;
};

// Natural-language feedback grounding the next proposal. APE carries sampled
// examples only; APO adds model feedback on errors; PE2 adds prompt history.
struct TextualGradient {
    Strategy strategy = Strategy::Ape;
    std::string feedback_text;
    std::vector<ErrorCase> error_cases;
    std::vector<HistoryEntry> history;
};

struct ProposalConfig {
    Mode mode = Mode::Global;
    int n_proposals = 4;
    bool strict_containment = false;
    std::size_t max_span_words = 5;
    int max_tag_retries = 2;
    int pe2_max_edits = 3;
    int errors_per_gradient = 4;
    bool identify_with_gradient = true;
    bool fallback_to_global = true;

    void validate() const;
};

// Proposal-model call allowance for one candidate in one step. Every call
// spends one unit; retries stop when the budget runs dry, which keeps the
// per-candidate call count within n_proposals * (1 + max_tag_retries) + 2.
class CallBudget {
public:
    explicit CallBudget(int limit) : remaining_(limit) {}

    static CallBudget per_candidate_step(const ProposalConfig& cfg) {
        return CallBudget(cfg.n_proposals * (1 + cfg.max_tag_retries) + 2);
    }

    bool try_spend() {
        if (remaining_ <= 0) return false;
        --remaining_;
        ++spent_;
        return true;
    }

    int remaining() const { return remaining_; }
    int spent() const { return spent_; }

private:
    int remaining_;
    int spent_ = 0;
};

std::string format_error_cases(const std::vector<ErrorCase>& cases,
                               bool include_model_output);
std::string format_history(const std::vector<HistoryEntry>& history);

// Builds the textual gradient for a candidate from its minibatch evaluation.
// APE makes no model call; APO and PE2 issue one proposal-model call.
TextualGradient generate_gradient(Strategy strategy, const Prompt& prompt,
                                  const std::vector<Example>& minibatch,
                                  const EvalResult& eval_result,
                                  const std::vector<HistoryEntry>& history,
                                  Gateway& gateway, const TemplateCatalog& catalog,
                                  const ProposalConfig& cfg, std::uint64_t seed,
                                  CallBudget& budget);

}  // namespace lpo
