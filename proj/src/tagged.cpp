#include "lpo/tagged.hpp"

#include <optional>

#include "lpo/errors.hpp"
#include "lpo/words.hpp"

namespace lpo {
namespace {

struct Segment {
    bool inside = false;  // true when between <edit> and </edit>
    std::string text;
};

// Splits raw into alternating outside/inside segments. Returns nullopt on
// unbalanced or nested tags.
std::optional<std::vector<Segment>> lex_segments(std::string_view raw) {
    std::vector<Segment> segs;
    bool inside = false;
    std::size_t pos = 0;
    std::string current;
    while (pos < raw.size()) {
        if (raw.compare(pos, kOpenTag.size(), kOpenTag) == 0) {
            if (inside) return std::nullopt;  // nested open
            segs.push_back({false, current});
            current.clear();
            inside = true;
            pos += kOpenTag.size();
        } else if (raw.compare(pos, kCloseTag.size(), kCloseTag) == 0) {
            if (!inside) return std::nullopt;  // close without open
            segs.push_back({true, current});
            current.clear();
            inside = false;
            pos += kCloseTag.size();
        } else {
            current.push_back(raw[pos]);
            ++pos;
        }
    }
    if (inside) return std::nullopt;  // open without close
    segs.push_back({false, current});
    return segs;
}

struct AssembledSpan {
    std::size_t char_begin = 0;
    std::size_t char_end = 0;
};

struct Assembled {
    std::string base;
    std::vector<AssembledSpan> spans;
};

// Builds the untagged base text from lexed segments, applying the seam rule,
// and records the character range each span's content occupies in it.
Assembled assemble(const std::vector<Segment>& segs) {
    Assembled out;
    // gap state accumulated since the last emitted core
    bool gap_exterior_ws = false;
    bool gap_interior_ws = false;
    bool emitted_any = false;

    auto emit_core = [&](std::string_view core, bool inside) {
        if (emitted_any) {
            if (gap_exterior_ws)
                out.base += ' ';
            else if (!gap_interior_ws)
                out.base += ' ';  // nothing separated the words in the raw
            // interior-only whitespace was markup padding: glue
        }
        gap_exterior_ws = false;
        gap_interior_ws = false;
        std::size_t begin = out.base.size();
        out.base += core;
        emitted_any = true;
        if (inside) out.spans.push_back({begin, out.base.size()});
    };

    for (const auto& seg : segs) {
        std::size_t b = 0;
        std::size_t e = seg.text.size();
        while (b < e && is_space(seg.text[b])) ++b;
        while (e > b && is_space(seg.text[e - 1])) --e;
        bool lead_ws = b > 0;
        bool trail_ws = e < seg.text.size();
        std::string_view core = std::string_view(seg.text).substr(b, e - b);

        if (lead_ws) (seg.inside ? gap_interior_ws : gap_exterior_ws) = true;
        if (!core.empty()) {
            emit_core(core, seg.inside);
        } else if (seg.inside) {
            // an empty span contributes nothing; its padding stays gap material
            continue;
        }
        if (trail_ws) (seg.inside ? gap_interior_ws : gap_exterior_ws) = true;
    }
    return out;
}

TaggedPrompt parse_impl(std::string_view raw, std::size_t max_span_words,
                        bool enforce_span_rules) {
    auto segs = lex_segments(raw);
    if (!segs)
        throw TagParseError(TagParseError::Kind::UnbalancedTags,
                            "unbalanced or nested <edit> tags");
    bool any_tag = false;
    for (auto& s : *segs)
        if (s.inside) any_tag = true;
    if (!any_tag)
        throw TagParseError(TagParseError::Kind::NoSpans,
                            "reply contains no <edit> regions");

    Assembled assembled = assemble(*segs);
    if (trim(assembled.base).empty())
        throw TagParseError(TagParseError::Kind::NoSpans,
                            "reply contains no words outside or inside tags");

    auto seq = segment_words(assembled.base);

    std::vector<EditSpan> spans;
    for (const auto& raw_span : assembled.spans) {
        EditSpan span;
        bool found = false;
        for (const auto& w : seq.words) {
            if (w.begin < raw_span.char_end && w.end > raw_span.char_begin) {
                if (!found) span.start_word = w.index;
                span.end_word = w.index + 1;
                found = true;
            }
        }
        if (!found) continue;  // span collapsed to nothing after seam handling
        if (!spans.empty() && span.start_word < spans.back().end_word) {
            // seam gluing merged this span into the previous one
            spans.back().end_word = std::max(spans.back().end_word, span.end_word);
        } else {
            spans.push_back(span);
        }
    }
    if (spans.empty())
        throw TagParseError(TagParseError::Kind::NoSpans,
                            "reply contains no non-empty <edit> regions");

    for (auto& span : spans) {
        span.words.clear();
        for (std::size_t i = span.start_word; i < span.end_word; ++i)
            span.words.push_back(seq.words[i].text);
        if (enforce_span_rules && span.word_count() > max_span_words) {
            std::string joined;
            for (auto& w : span.words) {
                if (!joined.empty()) joined += ' ';
                joined += w;
            }
            throw TagParseError(
                TagParseError::Kind::SpanTooLong,
                "edit span \"" + joined + "\" covers " +
                    std::to_string(span.word_count()) + " words; limit is " +
                    std::to_string(max_span_words));
        }
    }

    return TaggedPrompt{Prompt(assembled.base), std::move(spans),
                        std::string(raw)};
}

}  // namespace

TaggedPrompt parse_tagged(std::string_view raw, std::size_t max_span_words) {
    return parse_impl(raw, max_span_words, /*enforce_span_rules=*/true);
}

Prompt strip_tags(const TaggedPrompt& tagged) { return tagged.base; }

std::string remove_edit_tags(std::string_view raw) {
    if (!contains_edit_tag(raw)) return trim(raw);
    try {
        // balanced tags: strip through the parser so seams normalize the
        // same way they do for well-formed replies
        return parse_impl(raw, 0, /*enforce_span_rules=*/false).base.text();
    } catch (const TagParseError&) {
        // salvage: drop markers, single-space the splice points
        std::string out;
        std::size_t pos = 0;
        auto at_marker = [&](std::string_view m) {
            return raw.compare(pos, m.size(), m) == 0;
        };
        while (pos < raw.size()) {
            if (at_marker(kOpenTag) || at_marker(kCloseTag)) {
                pos += at_marker(kOpenTag) ? kOpenTag.size() : kCloseTag.size();
                while (!out.empty() && is_space(out.back())) out.pop_back();
                while (pos < raw.size() && is_space(raw[pos])) ++pos;
                if (!out.empty()) out += ' ';
            } else {
                out.push_back(raw[pos]);
                ++pos;
            }
        }
        return trim(out);
    }
}

}  // namespace lpo
