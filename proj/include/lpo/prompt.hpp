#pragma once

#include <string>
#include <string_view>

namespace lpo {

// Immutable instruction text, the optimization variable. Construction
// validates the text: non-empty after trimming and free of edit tags.
class Prompt {
public:
    explicit Prompt(std::string text);

    const std::string& text() const { return text_; }
    const std::string& id() const { return id_; }

    std::size_t word_count() const;

    friend bool operator==(const Prompt& a, const Prompt& b) {
        return a.text_ == b.text_;
    }
    friend bool operator!=(const Prompt& a, const Prompt& b) { return !(a == b); }

private:
    std::string text_;
    std::string id_;
};

inline constexpr std::string_view kOpenTag = "<edit>";
inline constexpr std::string_view kCloseTag = "</edit>";

bool contains_edit_tag(std::string_view text);

}  // namespace lpo
