#include "lpo/words.hpp"

namespace lpo {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string WordSequence::reconstruct() const {
    std::string out = leading;
    for (std::size_t i = 0; i < words.size(); ++i) {
        out += words[i].text;
        out += separators[i];
    }
    return out;
}

WordSequence segment_words(std::string_view text) {
    WordSequence seq;
    std::size_t i = 0;
    while (i < text.size() && is_space(text[i])) ++i;
    seq.leading = std::string(text.substr(0, i));
    while (i < text.size()) {
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        WordToken tok;
        tok.text = std::string(text.substr(start, i - start));
        tok.index = seq.words.size();
        tok.begin = start;
        tok.end = i;
        seq.words.push_back(std::move(tok));
        std::size_t ws_start = i;
        while (i < text.size() && is_space(text[i])) ++i;
        seq.separators.push_back(std::string(text.substr(ws_start, i - ws_start)));
    }
    return seq;
}

std::vector<std::string> word_texts(std::string_view text) {
    auto seq = segment_words(text);
    std::vector<std::string> out;
    out.reserve(seq.words.size());
    for (auto& w : seq.words) out.push_back(w.text);
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace lpo
