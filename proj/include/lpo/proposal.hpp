#pragma once

#include <optional>

#include "lpo/containment.hpp"
#include "lpo/gradient.hpp"
#include "lpo/tagged.hpp"

namespace lpo {

struct IdentifyResult {
    TaggedPrompt tagged;
    int attempts = 1;  // 1 = first try succeeded
};

// Asks the proposal model to mark edit regions of the prompt with <edit>
// tags, retrying malformed replies up to cfg.max_tag_retries with the parse
// error appended. Throws TagIdentificationFailed when every attempt fails;
// the caller decides whether that degrades the candidate to global mode.
IdentifyResult identify_edit_scope(const Prompt& prompt,
                                   const TextualGradient& gradient,
                                   Gateway& gateway,
                                   const TemplateCatalog& catalog,
                                   const ProposalConfig& cfg, std::uint64_t seed,
                                   CallBudget& budget);

struct ProposeResult {
    std::vector<Prompt> prompts;
    int rejected_malformed = 0;
    int rejected_containment = 0;
    int deduplicated = 0;
};

// Generates up to cfg.n_proposals new prompts from the strategy's meta-prompt
// template. Local mode embeds the tagged prompt and appends the tag-free
// reply instruction. Replies are cleaned of stray tags; duplicates of the
// parent or of each other are dropped; with strict containment on, replies
// editing outside the spans are re-requested and finally dropped. Throws
// EmptyProposalSet when nothing survives.
ProposeResult propose(Strategy strategy, const Prompt& prompt,
                      const TextualGradient& gradient,
                      const std::optional<TaggedPrompt>& tagged, Gateway& gateway,
                      const TemplateCatalog& catalog, const ProposalConfig& cfg,
                      std::uint64_t seed, CallBudget& budget);

}  // namespace lpo
