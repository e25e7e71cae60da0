#pragma once

#include <string>
#include <vector>

#include "lpo/tagged.hpp"

namespace lpo::testing {

struct OracleVerdict {
    std::size_t distance = 0;
    bool feasible = false;   // an alignment within the cost bound exists
    bool contained = false;  // some min-cost script touches only the spans
};

// Independent containment oracle: enumerates every alignment between the two
// word sequences up to max_cost edit operations, with no memoization and no
// code shared with the production DP. An operation is in-span when it
// substitutes or deletes a word inside a span, or inserts at a gap position g
// with span.start <= g <= span.end.
OracleVerdict alignment_oracle(const std::vector<std::string>& original,
                               const std::vector<std::string>& proposed,
                               const std::vector<EditSpan>& spans,
                               std::size_t max_cost);

}  // namespace lpo::testing
