#include "lpo/prompt.hpp"

#include "lpo/detail/sha256.hpp"
#include "lpo/errors.hpp"
#include "lpo/words.hpp"

namespace lpo {

bool contains_edit_tag(std::string_view text) {
    return text.find(kOpenTag) != std::string_view::npos ||
           text.find(kCloseTag) != std::string_view::npos;
}

Prompt::Prompt(std::string text) : text_(std::move(text)) {
    if (trim(text_).empty())
        throw Error("prompt text is empty after trimming whitespace");
    if (contains_edit_tag(text_))
        throw Error("prompt text must not contain <edit> or </edit> tags");
    id_ = detail::sha256_hex(text_).substr(0, 16);
}

std::size_t Prompt::word_count() const { return segment_words(text_).size(); }

}  // namespace lpo
