#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpo/containment.hpp"
#include "lpo/detail/rng.hpp"
#include "lpo/words.hpp"

#include "support/alignment_oracle.hpp"

using namespace lpo;

namespace {

std::vector<EditSpan> spans_over(const std::string& text,
                                 std::vector<std::pair<std::size_t, std::size_t>>
                                     ranges) {
    auto words = word_texts(text);
    std::vector<EditSpan> spans;
    for (auto [start, end] : ranges) {
        EditSpan s;
        s.start_word = start;
        s.end_word = end;
        for (std::size_t i = start; i < end; ++i) s.words.push_back(words[i]);
        spans.push_back(std::move(s));
    }
    return spans;
}

}  // namespace

TEST_CASE("insertion adjacent to a span boundary is contained") {
    // hand-computed minimal script: one insertion of "carefully" at gap 1,
    // which touches the boundary of the span over "think"
    Prompt original("Let's think step by step.");
    Prompt proposed("Let's carefully think step by step.");
    auto spans = spans_over(original.text(), {{1, 2}});

    auto report = containment_check(original, spans, proposed);
    CHECK(report.contained);
    CHECK(report.distance == 1);
    REQUIRE(report.edits.size() == 1);
    CHECK(report.edits[0].kind == EditOp::Kind::Insert);
    CHECK(report.edits[0].replacement == "carefully");
    CHECK(report.out_of_span.empty());

    auto verdict = lpo::testing::alignment_oracle(
        word_texts(original.text()), word_texts(proposed.text()), spans, 3);
    CHECK(verdict.contained == report.contained);
    CHECK(verdict.distance == report.distance);
}

TEST_CASE("identical prompts yield an empty edit script") {
    Prompt p("Let's think step by step.");
    auto spans = spans_over(p.text(), {{1, 2}});
    auto report = containment_check(p, spans, p);
    CHECK(report.contained);
    CHECK(report.distance == 0);
    CHECK(report.edits.empty());
    CHECK(report.out_of_span.empty());
}

TEST_CASE("out-of-span substitution is reported") {
    // hand-computed minimal script: substitute word 0 ("Let's" -> "You"),
    // outside the span over "think"
    Prompt original("Let's think step by step.");
    Prompt proposed("You think step by step.");
    auto spans = spans_over(original.text(), {{1, 2}});

    auto report = containment_check(original, spans, proposed);
    CHECK_FALSE(report.contained);
    CHECK(report.distance == 1);
    REQUIRE(report.out_of_span.size() == 1);
    CHECK(report.out_of_span[0].kind == EditOp::Kind::Substitute);
    CHECK(report.out_of_span[0].orig_index == 0);
    CHECK(report.out_of_span[0].original == "Let's");
    CHECK(report.out_of_span[0].replacement == "You");

    auto verdict = lpo::testing::alignment_oracle(
        word_texts(original.text()), word_texts(proposed.text()), spans, 3);
    CHECK(verdict.contained == report.contained);
    CHECK(verdict.distance == report.distance);
}

TEST_CASE("substitution inside a span is contained") {
    Prompt original("Let's think step by step.");
    Prompt proposed("Let's reason step by step.");
    auto spans = spans_over(original.text(), {{1, 2}});
    auto report = containment_check(original, spans, proposed);
    CHECK(report.contained);
    CHECK(report.distance == 1);
}

TEST_CASE("deletion outside every span is not contained") {
    Prompt original("please think step by step now");
    Prompt proposed("please think step by step");
    auto spans = spans_over(original.text(), {{1, 2}});
    auto report = containment_check(original, spans, proposed);
    CHECK_FALSE(report.contained);
    REQUIRE(report.out_of_span.size() == 1);
    CHECK(report.out_of_span[0].kind == EditOp::Kind::Erase);
    CHECK(report.out_of_span[0].original == "now");
}

TEST_CASE("containment prefers an in-span witness among tied scripts") {
    // "go go" -> "go stop go": the insertion can align before or after the
    // middle boundary; the span over word 1 makes one of them in-span
    Prompt original("go go");
    Prompt proposed("go stop go");
    auto spans = spans_over(original.text(), {{1, 2}});
    auto report = containment_check(original, spans, proposed);
    CHECK(report.contained);
    auto verdict = lpo::testing::alignment_oracle(
        word_texts(original.text()), word_texts(proposed.text()), spans, 3);
    CHECK(verdict.contained);
}

TEST_CASE("random small instances agree with the alignment oracle") {
    detail::Rng rng(77);
    static const std::vector<std::string> vocab{"a", "b", "c", "d"};
    int checked = 0;
    for (int iter = 0; iter < 400; ++iter) {
        std::size_t n = 1 + rng.below(6);
        std::vector<std::string> original;
        for (std::size_t i = 0; i < n; ++i)
            original.push_back(vocab[rng.below(vocab.size())]);

        // random spans
        std::vector<EditSpan> spans;
        std::size_t cursor = 0;
        while (cursor < n) {
            if (rng.below(3) == 0) {
                std::size_t len = 1 + rng.below(std::min<std::size_t>(3, n - cursor));
                EditSpan s;
                s.start_word = cursor;
                s.end_word = cursor + len;
                for (std::size_t i = cursor; i < cursor + len; ++i)
                    s.words.push_back(original[i]);
                spans.push_back(std::move(s));
                cursor += len;
            } else {
                ++cursor;
            }
        }

        // random proposed: apply up to 3 random operations
        std::vector<std::string> proposed = original;
        std::size_t ops = rng.below(4);
        for (std::size_t o = 0; o < ops; ++o) {
            std::size_t kind = rng.below(3);
            if (kind == 0 && !proposed.empty()) {
                proposed[rng.below(proposed.size())] = vocab[rng.below(vocab.size())];
            } else if (kind == 1 && !proposed.empty()) {
                proposed.erase(proposed.begin() +
                               static_cast<std::ptrdiff_t>(rng.below(proposed.size())));
            } else {
                proposed.insert(
                    proposed.begin() +
                        static_cast<std::ptrdiff_t>(rng.below(proposed.size() + 1)),
                    vocab[rng.below(vocab.size())]);
            }
        }
        if (proposed.empty()) continue;

        std::string proposed_text;
        for (const auto& w : proposed) {
            if (!proposed_text.empty()) proposed_text += ' ';
            proposed_text += w;
        }
        std::string original_text;
        for (const auto& w : original) {
            if (!original_text.empty()) original_text += ' ';
            original_text += w;
        }

        auto report = containment_check(Prompt(original_text), spans,
                                        Prompt(proposed_text));
        auto verdict = lpo::testing::alignment_oracle(original, proposed, spans,
                                                      original.size() +
                                                          proposed.size());
        REQUIRE(verdict.feasible);
        CAPTURE(original_text);
        CAPTURE(proposed_text);
        CHECK(report.distance == verdict.distance);
        CHECK(report.contained == verdict.contained);
        ++checked;
    }
    CHECK(checked > 300);
}

TEST_CASE("containment_check is deterministic") {
    Prompt original("alpha beta gamma delta");
    Prompt proposed("alpha epsilon gamma");
    auto spans = spans_over(original.text(), {{1, 3}});
    auto a = containment_check(original, spans, proposed);
    auto b = containment_check(original, spans, proposed);
    CHECK(a.contained == b.contained);
    CHECK(a.distance == b.distance);
    REQUIRE(a.edits.size() == b.edits.size());
    for (std::size_t i = 0; i < a.edits.size(); ++i) {
        CHECK(a.edits[i].kind == b.edits[i].kind);
        CHECK(a.edits[i].orig_index == b.edits[i].orig_index);
        CHECK(a.edits[i].original == b.edits[i].original);
        CHECK(a.edits[i].replacement == b.edits[i].replacement);
    }
}
