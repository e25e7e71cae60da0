#include "lpo/containment.hpp"

#include <limits>

#include "lpo/words.hpp"

namespace lpo {
namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

struct Cell {
    std::size_t cost = kInf;
    std::size_t out = kInf;  // min out-of-span ops among min-cost paths

    bool better_than(const Cell& o) const {
        return cost < o.cost || (cost == o.cost && out < o.out);
    }
};

Cell step(const Cell& from, std::size_t cost_inc, std::size_t out_inc) {
    return Cell{from.cost + cost_inc, from.out + out_inc};
}

}  // namespace

ContainmentReport containment_check(const Prompt& original,
                                    const std::vector<EditSpan>& spans,
                                    const Prompt& proposed) {
    const auto a = word_texts(original.text());
    const auto b = word_texts(proposed.text());
    const std::size_t n = a.size();
    const std::size_t m = b.size();

    auto word_in_span = [&](std::size_t i) {
        for (const auto& s : spans)
            if (i >= s.start_word && i < s.end_word) return true;
        return false;
    };
    // insertions count as inside when adjacent to a span boundary
    auto gap_in_span = [&](std::size_t g) {
        for (const auto& s : spans)
            if (g >= s.start_word && g <= s.end_word) return true;
        return false;
    };

    std::vector<std::vector<Cell>> dp(n + 1, std::vector<Cell>(m + 1));
    dp[0][0] = Cell{0, 0};
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= m; ++j) {
            if (i == 0 && j == 0) continue;
            Cell best;
            if (i > 0 && j > 0) {
                if (a[i - 1] == b[j - 1]) {
                    Cell c = step(dp[i - 1][j - 1], 0, 0);
                    if (c.better_than(best)) best = c;
                } else {
                    Cell c = step(dp[i - 1][j - 1], 1, word_in_span(i - 1) ? 0 : 1);
                    if (c.better_than(best)) best = c;
                }
            }
            if (i > 0) {
                Cell c = step(dp[i - 1][j], 1, word_in_span(i - 1) ? 0 : 1);
                if (c.better_than(best)) best = c;
            }
            if (j > 0) {
                Cell c = step(dp[i][j - 1], 1, gap_in_span(i) ? 0 : 1);
                if (c.better_than(best)) best = c;
            }
            dp[i][j] = best;
        }
    }

    ContainmentReport report;
    report.distance = dp[n][m].cost;
    report.contained = dp[n][m].out == 0;

    // walk back a witness path; prefer match, then substitute, delete, insert
    std::size_t i = n;
    std::size_t j = m;
    std::vector<EditOp> rev;
    while (i > 0 || j > 0) {
        const Cell& cur = dp[i][j];
        if (i > 0 && j > 0 && a[i - 1] == b[j - 1]) {
            Cell c = step(dp[i - 1][j - 1], 0, 0);
            if (c.cost == cur.cost && c.out == cur.out) {
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && j > 0 && a[i - 1] != b[j - 1]) {
            bool in = word_in_span(i - 1);
            Cell c = step(dp[i - 1][j - 1], 1, in ? 0 : 1);
            if (c.cost == cur.cost && c.out == cur.out) {
                rev.push_back({EditOp::Kind::Substitute, i - 1, a[i - 1], b[j - 1], in});
                --i;
                --j;
                continue;
            }
        }
        if (i > 0) {
            bool in = word_in_span(i - 1);
            Cell c = step(dp[i - 1][j], 1, in ? 0 : 1);
            if (c.cost == cur.cost && c.out == cur.out) {
                rev.push_back({EditOp::Kind::Erase, i - 1, a[i - 1], "", in});
                --i;
                continue;
            }
        }
        if (j > 0) {
            bool in = gap_in_span(i);
            rev.push_back({EditOp::Kind::Insert, i, "", b[j - 1], in});
            --j;
        }
    }

    report.edits.assign(rev.rbegin(), rev.rend());
    for (const auto& op : report.edits)
        if (!op.in_span) report.out_of_span.push_back(op);
    return report;
}

}  // namespace lpo
