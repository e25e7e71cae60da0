#include "lpo/proposal.hpp"

#include "lpo/detail/rng.hpp"
#include "lpo/errors.hpp"
#include "lpo/words.hpp"

namespace lpo {
namespace {

// Context block appended to the edit-identification request. Prefers the
// model-written feedback; falls back to the raw error cases.
std::string gradient_context(const TextualGradient& gradient) {
    if (!gradient.feedback_text.empty())
        return "\nFeedback:\n" + gradient.feedback_text;
    if (!gradient.error_cases.empty())
        return "\nIncorrect cases:\n" +
               format_error_cases(gradient.error_cases, true);
    return "";
}

bool same_words(const Prompt& a, const Prompt& b) {
    return word_texts(a.text()) == word_texts(b.text());
}

}  // namespace

IdentifyResult identify_edit_scope(const Prompt& prompt,
                                   const TextualGradient& gradient,
                                   Gateway& gateway,
                                   const TemplateCatalog& catalog,
                                   const ProposalConfig& cfg, std::uint64_t seed,
                                   CallBudget& budget) {
    cfg.validate();
    if (cfg.mode != Mode::Local)
        throw ConfigError("identify_edit_scope requires local mode");

    SlotMap slots{{"current_prompt", prompt.text()},
                  {"gradient",
                   cfg.identify_with_gradient ? gradient_context(gradient) : ""}};
    std::string body =
        catalog.render(template_names::kIdentifyEditScope, slots);
    if (cfg.max_span_words != kDefaultMaxSpanWords) {
        // the shipped instruction says "5 words"; keep it in sync with the knob
        std::size_t pos = body.find("more than 5 words");
        if (pos != std::string::npos)
            body.replace(pos, std::string("more than 5 words").size(),
                         "more than " + std::to_string(cfg.max_span_words) +
                             " words");
    }

    std::vector<ChatMessage> messages{{Speaker::User, body}};
    const auto request_seed =
        static_cast<std::int64_t>(detail::derive_seed(seed, "identify"));

    std::string last_error = "call budget exhausted";
    for (int attempt = 0; attempt <= cfg.max_tag_retries; ++attempt) {
        if (!budget.try_spend()) break;
        ChatRequest request =
            gateway.make_request(Role::Proposal, messages, request_seed);
        std::string reply = gateway.complete(request).content;
        try {
            TaggedPrompt tagged = parse_tagged(reply, cfg.max_span_words);
            if (!same_words(tagged.base, prompt))
                throw TagParseError(TagParseError::Kind::UnbalancedTags,
                                    "the tagged text must repeat the prompt "
                                    "exactly, with tags inserted");
            return IdentifyResult{std::move(tagged), attempt + 1};
        } catch (const TagParseError& e) {
            last_error = e.what();
            messages.push_back({Speaker::Assistant, reply});
            messages.push_back(
                {Speaker::User, std::string("Your previous reply was invalid: ") +
                                    e.what() +
                                    ". Reply again following the required "
                                    "format."});
        }
    }
    throw TagIdentificationFailed("edit-scope identification failed: " +
                                  last_error);
}

ProposeResult propose(Strategy strategy, const Prompt& prompt,
                      const TextualGradient& gradient,
                      const std::optional<TaggedPrompt>& tagged, Gateway& gateway,
                      const TemplateCatalog& catalog, const ProposalConfig& cfg,
                      std::uint64_t seed, CallBudget& budget) {
    cfg.validate();
    if (cfg.mode == Mode::Local && !tagged)
        throw ConfigError("local-mode propose requires a tagged prompt");

    const std::string prompt_slot =
        cfg.mode == Mode::Local ? tagged->raw : prompt.text();
    SlotMap slots{{"current_prompt", prompt_slot},
                  {"tagged_prompt", cfg.mode == Mode::Local ? tagged->raw : ""},
                  {"gradient", gradient.feedback_text},
                  {"errors", format_error_cases(
                                 gradient.error_cases,
                                 /*include_model_output=*/strategy != Strategy::Ape)},
                  {"history", format_history(gradient.history)},
                  {"max_edits", std::to_string(cfg.pe2_max_edits)}};

    const char* template_name = template_names::kApePropose;
    if (strategy == Strategy::Apo) template_name = template_names::kApoPropose;
    if (strategy == Strategy::Pe2) template_name = template_names::kPe2Propose;

    std::string body = catalog.render(template_name, slots);
    if (cfg.mode == Mode::Local) {
        body += "\n\n";
        body += catalog.get(template_names::kLocalReplyInstruction).text;
    }

    ProposeResult result;
    auto already_have = [&](const std::string& text) {
        if (text == prompt.text()) return true;
        for (const auto& p : result.prompts)
            if (p.text() == text) return true;
        return false;
    };

    for (int slot = 0; slot < cfg.n_proposals; ++slot) {
        for (int attempt = 0; attempt <= cfg.max_tag_retries; ++attempt) {
            if (!budget.try_spend()) break;
            const auto request_seed = static_cast<std::int64_t>(detail::derive_seed(
                detail::derive_seed(seed, static_cast<std::uint64_t>(slot)),
                static_cast<std::uint64_t>(attempt)));
            ChatRequest request = gateway.make_request(
                Role::Proposal, {{Speaker::User, body}}, request_seed);
            std::string cleaned =
                remove_edit_tags(gateway.complete(request).content);
            if (cleaned.empty()) {
                ++result.rejected_malformed;
                continue;  // retry: the reply had no usable text
            }
            if (already_have(cleaned)) {
                ++result.deduplicated;
                break;  // a duplicate is a valid reply, just not a new one
            }
            Prompt candidate(cleaned);
            if (cfg.strict_containment && cfg.mode == Mode::Local) {
                auto report =
                    containment_check(prompt, tagged->spans, candidate);
                if (!report.contained) {
                    ++result.rejected_containment;
                    continue;  // retry with a fresh request seed
                }
            }
            result.prompts.push_back(std::move(candidate));
            break;
        }
        if (budget.remaining() == 0) break;  // nothing left for further slots
    }

    if (result.prompts.empty())
        throw EmptyProposalSet("every proposal reply was rejected for prompt \"" +
                               prompt.text() + "\"");
    return result;
}

}  // namespace lpo
