#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lpo {

// One word of a prompt. A word is a maximal run of non-whitespace characters,
// so trailing punctuation stays attached ("step.").
struct WordToken {
    std::string text;
    std::size_t index = 0;  // position in the word sequence
    std::size_t begin = 0;  // character offset of the first byte in the source
    std::size_t end = 0;    // one past the last byte
};

// Deterministic segmentation of a string into words plus the separators needed
// to reconstruct it byte for byte.
struct WordSequence {
    std::string leading;                    // whitespace before the first word
    std::vector<WordToken> words;
    std::vector<std::string> separators;    // separators[i] follows words[i]

    std::string reconstruct() const;
    std::size_t size() const { return words.size(); }
};

bool is_space(char c);

WordSequence segment_words(std::string_view text);

// The word texts alone, in order.
std::vector<std::string> word_texts(std::string_view text);

std::string trim(std::string_view s);

}  // namespace lpo
