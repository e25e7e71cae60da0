#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpo/errors.hpp"
#include "lpo/templates.hpp"

#include "support/test_util.hpp"

using namespace lpo;

TEST_CASE("the shipped catalog loads with every expected template") {
    TemplateCatalog catalog = lpo::testing::load_catalog();
    for (const char* name :
         {template_names::kIdentifyEditScope, template_names::kLocalReplyInstruction,
          template_names::kApePropose, template_names::kApoGradient,
          template_names::kApoPropose, template_names::kPe2Gradient,
          template_names::kPe2Propose}) {
        CAPTURE(name);
        CHECK(catalog.has(name));
    }
}

TEST_CASE("the edit-scope template carries the full tagging instruction") {
    TemplateCatalog catalog = lpo::testing::load_catalog();
    const auto& tmpl = catalog.get(template_names::kIdentifyEditScope);
    CHECK(tmpl.text.find("First, identify the scope of tokens within the prompt "
                         "where edits should take place.") != std::string::npos);
    CHECK(tmpl.text.find("not entail more than 5 words") != std::string::npos);
    CHECK(tmpl.text.find("{current_prompt}") != std::string::npos);
}

TEST_CASE("the local reply instruction is the exact tag-free line") {
    TemplateCatalog catalog = lpo::testing::load_catalog();
    CHECK(catalog.get(template_names::kLocalReplyInstruction).text ==
          "Reply with the new instruction without the <edit>, </edit> tags.");
}

TEST_CASE("render replaces every referenced slot") {
    MetaPromptTemplate tmpl{"demo", "a {x} b {y} c {x}"};
    CHECK(render_template(tmpl, {{"x", "1"}, {"y", "2"}}) == "a 1 b 2 c 1");
    CHECK(tmpl.slots() == std::vector<std::string>{"x", "y"});
}

TEST_CASE("a missing slot is a ConfigError naming template and slot") {
    MetaPromptTemplate tmpl{"demo", "needs {gradient} here"};
    try {
        render_template(tmpl, {});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("demo") != std::string::npos);
        CHECK(msg.find("gradient") != std::string::npos);
    }
}

TEST_CASE("non-slot braces pass through") {
    MetaPromptTemplate tmpl{"demo", "keep {NOT_A_SLOT} and { spaced } and {x}"};
    CHECK(render_template(tmpl, {{"x", "v"}}) ==
          "keep {NOT_A_SLOT} and { spaced } and v");
}

TEST_CASE("missing directory and empty directory are ConfigErrors") {
    CHECK_THROWS_AS(TemplateCatalog::load("/nonexistent/templates"), ConfigError);
    lpo::testing::TempDir tmp("empty_templates");
    CHECK_THROWS_AS(TemplateCatalog::load(tmp.path()), ConfigError);
}

TEST_CASE("unknown template name is a ConfigError") {
    TemplateCatalog catalog = lpo::testing::load_catalog();
    CHECK_THROWS_AS(catalog.get("no_such_template"), ConfigError);
}
