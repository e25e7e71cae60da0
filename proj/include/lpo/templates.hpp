#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace lpo {

// A meta-prompt template with {slot} placeholders.
struct MetaPromptTemplate {
    std::string name;
    std::string text;

    // Slot names referenced by the text, in order of first appearance.
    std::vector<std::string> slots() const;
};

using SlotMap = std::map<std::string, std::string>;

// Named meta-prompt templates loaded from a directory of .txt files. The
// catalog is a versioned artifact: the texts sent to the proposal model are
// inspectable files, not code constants.
class TemplateCatalog {
public:
    static TemplateCatalog load(const std::filesystem::path& dir);

    bool has(const std::string& name) const { return templates_.count(name) > 0; }
    const MetaPromptTemplate& get(const std::string& name) const;

    // Replaces every referenced slot; a slot missing from the map is a
    // ConfigError naming the template and slot.
    std::string render(const std::string& name, const SlotMap& slots) const;

    std::vector<std::string> names() const;

private:
    std::map<std::string, MetaPromptTemplate> templates_;
};

std::string render_template(const MetaPromptTemplate& tmpl, const SlotMap& slots);

// Template names the engine expects in a catalog.
namespace template_names {
inline constexpr const char* kIdentifyEditScope = "identify_edit_scope";
inline constexpr const char* kLocalReplyInstruction = "local_reply_instruction";
inline constexpr const char* kApePropose = "ape_propose";
inline constexpr const char* kApoGradient = "apo_gradient";
inline constexpr const char* kApoPropose = "apo_propose";
inline constexpr const char* kPe2Gradient = "pe2_gradient";
inline constexpr const char* kPe2Propose = "pe2_propose";
}  // namespace template_names

}  // namespace lpo
