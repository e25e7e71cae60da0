#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lpo/detail/rng.hpp"

namespace lpo::testing {

// A random well-formed tagging: spans of 1..max_span_words inserted around
// the words of a random prompt, in padded ("<edit> w </edit>") or tight
// ("<edit>w</edit>") style, together with the expected untagged text and
// span word ranges.
struct GeneratedTagging {
    std::string raw;
    std::string expected_base;
    std::vector<std::pair<std::size_t, std::size_t>> expected_spans;
};

inline GeneratedTagging generate_tagging(lpo::detail::Rng& rng,
                                         std::size_t max_span_words) {
    static const std::vector<std::string> vocab{
        "solve",  "the",  "problem",  "carefully", "and", "verify",
        "each",   "step", "before",   "moving",    "on",  "answer",
        "clearly"};
    std::size_t n_words = 2 + rng.below(9);
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n_words; ++i)
        words.push_back(vocab[rng.below(vocab.size())]);

    // non-overlapping spans chosen left to right
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t cursor = 0;
    while (cursor < n_words) {
        if (rng.below(3) == 0) {
            std::size_t len =
                1 + rng.below(std::min(max_span_words, n_words - cursor));
            spans.emplace_back(cursor, cursor + len);
            cursor += len;
        } else {
            ++cursor;
        }
    }
    if (spans.empty()) spans.emplace_back(0, 1);

    bool padded = rng.below(2) == 0;
    std::string raw;
    std::size_t span_i = 0;
    for (std::size_t i = 0; i < n_words; ++i) {
        if (span_i < spans.size() && spans[span_i].first == i) {
            if (!raw.empty()) raw += ' ';
            raw += padded ? "<edit> " : "<edit>";
        } else if (!raw.empty()) {
            raw += ' ';
        }
        raw += words[i];
        if (span_i < spans.size() && spans[span_i].second == i + 1) {
            raw += padded ? " </edit>" : "</edit>";
            ++span_i;
        }
    }

    std::string base;
    for (const auto& w : words) {
        if (!base.empty()) base += ' ';
        base += w;
    }
    return {raw, base, spans};
}

}  // namespace lpo::testing
