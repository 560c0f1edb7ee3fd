#include "doctest.h"

#include "esl/formula.hpp"
#include "support/random_instances.hpp"

using namespace esl;
using namespace testsupport;

TEST_CASE("parsing the documented grammar") {
    Environment env;
    env.addAgent("1");
    env.addAgent("2");
    env.addAction(0, "a");
    env.addAction(1, "a");
    StateId s = env.addState("s");
    env.setObservation(0, s, "0");
    env.setObservation(1, s, "0");
    env.addLabel(s, "p");
    env.addLabel(s, "q");
    env.initial.push_back(s);
    env.seal();
    env.addTransition(s, 0, s);

    FormulaPtr f = parse_formula("D[1,sig(2)] X p", &env);
    CHECK(*f == *Formula::distKnow({AgentTag::base("1"), AgentTag::strategic("2")},
                                   Formula::next(Formula::atom("p"))));

    FormulaPtr g = parse_formula("exists x . C[1,2] (loc(sig(1),x) -> p)", &env);
    CHECK(*g == *Formula::exists(
                    "x", Formula::commonKnow(
                             {AgentTag::base("1"), AgentTag::base("2")},
                             Formula::implies(Formula::localEq(AgentTag::strategic("1"), "x"),
                                              Formula::atom("p")))));

    CHECK_THROWS_AS(parse_formula("p U q", &env), ParseError);
    CHECK_THROWS_AS(parse_formula("K[3] p", &env), ParseError);   // unknown agent
    CHECK_THROWS_AS(parse_formula("missing", &env), ParseError);  // unknown proposition

    // Braced tag lists are accepted on input.
    CHECK(*parse_formula("D[{1,2}] p", &env) ==
          *parse_formula("D[1,2] p", &env));
}

TEST_CASE("desugaring to the core kinds") {
    FormulaPtr fp = desugar(Formula::finally_(Formula::atom("p")));
    CHECK(*fp == *Formula::until(Formula::t(), Formula::atom("p")));

    FormulaPtr kp = desugar(Formula::know(AgentTag::base("1"), Formula::atom("p")));
    CHECK(*kp == *Formula::distKnow({AgentTag::base("1")}, Formula::atom("p")));

    FormulaPtr ep = desugar(
        Formula::everyoneKnow({AgentTag::base("1"), AgentTag::base("2")}, Formula::atom("p")));
    CHECK(*ep == *Formula::andf(Formula::distKnow({AgentTag::base("1")}, Formula::atom("p")),
                                Formula::distKnow({AgentTag::base("2")}, Formula::atom("p"))));

    // Idempotence on random surface formulas.
    Rng rng(17);
    for (int i = 0; i < 300; ++i) {
        FormulaPtr f = randomAst(rng, 5);
        FormulaPtr once = desugar(f);
        CHECK(*once == *desugar(once));
    }
}

TEST_CASE("knowledge over a path body closes it under the path quantifier") {
    FormulaPtr f = desugar(parse_formula("D[sig(1)] X p", nullptr));
    CHECK(*f == *Formula::distKnow({AgentTag::strategic("1")},
                                   Formula::pathAll(Formula::next(Formula::atom("p")))));
    // A over a state formula collapses.
    CHECK(*desugar(parse_formula("A p", nullptr)) == *Formula::atom("p"));
}

TEST_CASE("fragment classification") {
    auto classify = [](const char* text) { return classify_fragment(desugar(parse_formula(text, nullptr))); };
    CHECK(classify("A X p") == Fragment::CTLK);
    CHECK(classify("!A!(p U q)") == Fragment::CTLK);
    CHECK(classify("X p") == Fragment::CTLStarK);
    CHECK(classify("A (X p & F q)") == Fragment::CTLStarK);
    CHECK(classify("exists x . loc(1,x)") == Fragment::ESLMinus);
    CHECK(classify("exists x . A (p U loc(1,x))") == Fragment::ESLMinus);
    CHECK(classify("exists x . X loc(1,x)") == Fragment::FullESL);
    CHECK(classify("D[] A G p") == Fragment::CTLK);
    // Adding a quantifier never lowers the fragment.
    Rng rng(29);
    Environment env;  // tags unchecked with a null environment
    for (int i = 0; i < 200; ++i) {
        FormulaPtr f = desugar(randomCtlkFormula(rng, 3, makeE1()));
        Fragment base = classify_fragment(f);
        Fragment lifted = classify_fragment(desugar(Formula::exists("w", f)));
        if (base == Fragment::CTLK) CHECK(lifted == Fragment::ESLMinus);
        if (base == Fragment::CTLStarK) CHECK(lifted == Fragment::FullESL);
    }
}

TEST_CASE("free variables") {
    FormulaPtr a = parse_formula("loc(1,x)", nullptr);
    CHECK(free_vars(a) == std::set<std::string>{"x"});
    CHECK(free_vars(parse_formula("exists x . loc(1,x)", nullptr)).empty());
    CHECK(free_vars(parse_formula("exists x . (loc(1,x) & loc(2,y))", nullptr)) ==
          std::set<std::string>{"y"});
    // Shadowing: the inner binder wins, the outer variable stays bound.
    CHECK(free_vars(parse_formula("exists x . (loc(1,x) & exists x . loc(2,x))", nullptr)).empty());
}

TEST_CASE("distributed knowledge rewrites into the universal modality") {
    FormulaPtr in = parse_formula("D[1] p", nullptr);
    FormulaPtr out = rewrite_dg_via_exists(in);
    FormulaPtr lid = Formula::localEq(AgentTag::base("1"), "v0");
    CHECK(*out == *Formula::exists(
                      "v0", Formula::andf(lid, Formula::distKnow(
                                                   {}, Formula::implies(lid, Formula::atom("p"))))));

    FormulaPtr universal = parse_formula("D[] p", nullptr);
    CHECK(*rewrite_dg_via_exists(universal) == *desugar(universal));

    // Nested rewrites pick distinct fresh variables.
    FormulaPtr nested = rewrite_dg_via_exists(parse_formula("D[1] D[2] p", nullptr));
    std::string text = render_formula(nested);
    CHECK(text.find("v0") != std::string::npos);
    CHECK(text.find("v1") != std::string::npos);
}

TEST_CASE("render/parse round trip") {
    CHECK(render_formula(Formula::atom("p")) == "p");
    CHECK(render_formula(Formula::distKnow({}, Formula::atom("p"))) == "D[] p");
    Rng rng(41);
    for (int i = 0; i < 1000; ++i) {
        FormulaPtr f = randomAst(rng, 6);
        FormulaPtr back = parse_formula(render_formula(f), nullptr);
        CHECK(*f == *back);
    }
}
