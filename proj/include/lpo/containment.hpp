#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lpo/prompt.hpp"
#include "lpo/tagged.hpp"

namespace lpo {

// One operation of a word-level edit script over the original word sequence.
// For Insert, orig_index is the gap position: the new word goes before the
// original word at that index (n = append at the end).
struct EditOp {
    enum class Kind { Insert, Erase, Substitute };

    Kind kind = Kind::Substitute;
    std::size_t orig_index = 0;
    std::string original;     // empty for Insert
    std::string replacement;  // empty for Erase
    bool in_span = false;
};

// Result of checking whether a proposed prompt only edits inside the spans.
// contained is true iff some minimal edit script touches only words inside a
// span, counting insertions at a span boundary as inside.
struct ContainmentReport {
    bool contained = false;
    std::size_t distance = 0;      // minimal word-level edit distance
    std::vector<EditOp> edits;     // a witness minimal script
    std::vector<EditOp> out_of_span;  // the out-of-span subset of edits
};

ContainmentReport containment_check(const Prompt& original,
                                    const std::vector<EditSpan>& spans,
                                    const Prompt& proposed);

}  // namespace lpo
