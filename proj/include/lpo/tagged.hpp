#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lpo/errors.hpp"
#include "lpo/prompt.hpp"

namespace lpo {

inline constexpr std::size_t kDefaultMaxSpanWords = 5;

// A tagged region of the base prompt, in word coordinates.
struct EditSpan {
    std::size_t start_word = 0;  // inclusive
    std::size_t end_word = 0;    // exclusive
    std::vector<std::string> words;

    std::size_t word_count() const { return end_word - start_word; }
};

// A prompt annotated with edit spans, as returned by the proposal model.
struct TaggedPrompt {
    Prompt base;
    std::vector<EditSpan> spans;  // non-overlapping, ascending
    std::string raw;              // the original tagged string
};

// Parses a proposal-model reply carrying <edit>...</edit> regions.
//
// Tag seams are normalized when building the base text: whitespace just
// inside a tag is markup padding and is dropped; exterior whitespace at a
// seam collapses to a single space; when neither side of a seam had any
// whitespace, a single space is inserted so words cannot merge.
//
// Throws TagParseError on unbalanced or nested tags, zero spans, or a span
// wider than max_span_words.
TaggedPrompt parse_tagged(std::string_view raw,
                          std::size_t max_span_words = kDefaultMaxSpanWords);

// Returns the untagged prompt.
Prompt strip_tags(const TaggedPrompt& tagged);

// Lenient tag removal for cleaning proposal replies that should not have
// carried tags at all. Never throws; result is trimmed and tag-free.
std::string remove_edit_tags(std::string_view raw);

}  // namespace lpo
