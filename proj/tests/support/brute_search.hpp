#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lpo::testing {

// Abstract scripted scenario: a pure dev-score function and a pure proposal
// function of (parent text, per-parent call counter). The production run is
// driven by a gateway whose handlers implement the same two functions; the
// enumerator below recomputes the whole search tree from them directly.
struct SearchScenario {
    std::function<double(const std::string&)> score;
    std::function<std::string(const std::string&, std::size_t)> propose;
};

struct BruteCandidate {
    std::string text;
    double score = 0.0;
    int timestep = 0;
    std::optional<std::string> parent_text;
};

struct BruteResult {
    std::vector<BruteCandidate> pool;  // creation order
    BruteCandidate best;
    int optimal_timestep = 0;
};

// Independent enumeration of the beam-search tree: top-k selection by
// (score desc, timestep asc, word count asc, text asc), per-step expansion of
// every beam member, duplicate-of-parent and duplicate-within-batch drops,
// argmax over the whole pool, and the init-prompt timestep rule.
BruteResult brute_force_search(const std::string& init_prompt, int n_steps,
                               int beam_size, int n_proposals,
                               const SearchScenario& scenario);

}  // namespace lpo::testing
