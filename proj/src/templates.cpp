#include "lpo/templates.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "lpo/errors.hpp"

namespace lpo {
namespace {

bool slot_char(char c) {
    return std::islower(static_cast<unsigned char>(c)) || c == '_';
}

// Finds {name} placeholders where name is a lowercase identifier. Other
// braced text passes through untouched.
std::vector<std::pair<std::size_t, std::string>> find_slots(
    const std::string& text) {
    std::vector<std::pair<std::size_t, std::string>> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '{') {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < text.size() && slot_char(text[j])) ++j;
        if (j > i + 1 && j < text.size() && text[j] == '}') {
            out.emplace_back(i, text.substr(i + 1, j - i - 1));
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> MetaPromptTemplate::slots() const {
    std::vector<std::string> out;
    for (auto& [pos, name] : find_slots(text)) {
        (void)pos;
        bool seen = false;
        for (auto& s : out)
            if (s == name) seen = true;
        if (!seen) out.push_back(name);
    }
    return out;
}

TemplateCatalog TemplateCatalog::load(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("templates directory not found: " + dir.string());
    TemplateCatalog catalog;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt")
            continue;
        std::ifstream in(entry.path());
        if (!in)
            throw ConfigError("cannot read template file: " + entry.path().string());
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
            text.pop_back();
        MetaPromptTemplate tmpl{entry.path().stem().string(), std::move(text)};
        catalog.templates_.emplace(tmpl.name, std::move(tmpl));
    }
    if (catalog.templates_.empty())
        throw ConfigError("templates directory has no .txt files: " + dir.string());
    return catalog;
}

const MetaPromptTemplate& TemplateCatalog::get(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end())
        throw ConfigError("unknown template: " + name);
    return it->second;
}

std::string TemplateCatalog::render(const std::string& name,
                                    const SlotMap& slots) const {
    return render_template(get(name), slots);
}

std::vector<std::string> TemplateCatalog::names() const {
    std::vector<std::string> out;
    for (auto& [name, tmpl] : templates_) out.push_back(name);
    return out;
}

std::string render_template(const MetaPromptTemplate& tmpl, const SlotMap& slots) {
    auto found = find_slots(tmpl.text);
    std::string out;
    out.reserve(tmpl.text.size());
    std::size_t cursor = 0;
    for (auto& [pos, name] : found) {
        auto it = slots.find(name);
        if (it == slots.end())
            throw ConfigError("template \"" + tmpl.name + "\" references slot {" +
                              name + "} which was not provided");
        out.append(tmpl.text, cursor, pos - cursor);
        out.append(it->second);
        cursor = pos + name.size() + 2;
    }
    out.append(tmpl.text, cursor, std::string::npos);
    return out;
}

}  // namespace lpo
