#include "doctest.h"

#include "esl/game.hpp"
#include "support/random_instances.hpp"

using namespace esl;
using namespace esl::game;
using namespace testsupport;

namespace {

NormalFormGame prisonersDilemma() {
    NormalFormGame g;
    g.actions0 = {"c", "d"};
    g.actions1 = {"c", "d"};
    g.util0 = {3, 0, 5, 1};
    g.util1 = {3, 5, 0, 1};
    return g;
}

NormalFormGame matchingPennies() {
    NormalFormGame g;
    g.actions0 = {"h", "t"};
    g.actions1 = {"h", "t"};
    g.util0 = {1, -1, -1, 1};
    g.util1 = {-1, 1, 1, -1};
    return g;
}

NormalFormGame randomGame(Rng& rng, int na, int nb) {
    NormalFormGame g;
    for (int a = 0; a < na; ++a) g.actions0.push_back(std::string(1, static_cast<char>('a' + a)));
    for (int b = 0; b < nb; ++b) g.actions1.push_back(std::string(1, static_cast<char>('a' + b)));
    for (int i = 0; i < na * nb; ++i) {
        g.util0.push_back(Rational(static_cast<int64_t>(rng() % 7) - 3));
        g.util1.push_back(Rational(static_cast<int64_t>(rng() % 7) - 3));
    }
    return g;
}

bool formulaNe(const NormalFormGame& g) {
    GameEncoding enc = game_to_env(g);
    Instance inst;
    inst.env = &enc.env;
    inst.cls = enc.cls;
    inst.formula = ne_formula(g);
    return check(inst).holds;
}

bool formulaPce(const NormalFormGame& g) {
    GameEncoding enc = game_to_env(g);
    Instance inst;
    inst.env = &enc.env;
    inst.cls = enc.cls;
    inst.formula = pce_formula(g);
    return check(inst).holds;
}

}  // namespace

TEST_CASE("encoding arithmetic and validity") {
    NormalFormGame pd = prisonersDilemma();
    GameEncoding enc = game_to_env(pd);
    CHECK(enc.env.stateCount() == 5);
    CHECK(enumerate_profiles(enc.env, *enc.cls).size() == 4);
    CHECK(validate_environment(enc.env).empty());

    NormalFormGame mp = matchingPennies();
    GameEncoding enc2 = game_to_env(mp);
    auto u0pos = enc2.env.props.find("u0=1");
    auto u0neg = enc2.env.props.find("u0=-1");
    REQUIRE(u0pos);
    REQUIRE(u0neg);
    CHECK(enc2.env.hasLabel(enc2.outcome[0][0], *u0pos));
    CHECK(enc2.env.hasLabel(enc2.outcome[0][1], *u0neg));
}

TEST_CASE("utility formulas evaluate through one play step") {
    NormalFormGame pd = prisonersDilemma();
    GameEncoding enc = game_to_env(pd);
    CHECK(render_formula(utility_formula(pd, 0, Rational(3))) == "X u0=3");
    CHECK_THROWS_AS(utility_formula(pd, 0, Rational(42)), InputError);

    // At an initial point with a deterministic profile, X u0=v holds exactly
    // when the profile's outcome pays v; at the absorbing outcome states the
    // same atom persists.
    Instance inst;
    inst.env = &enc.env;
    inst.cls = enc.cls;
    inst.formula = utility_formula(pd, 0, Rational(5));
    ProfileSpace space = enumerate_profiles(enc.env, *enc.cls);
    for (uint64_t i = 0; i < space.size(); ++i) {
        StrategyProfile p = space.materialize(i);
        int a = __builtin_ctz(p.byAgent[0].enabled[static_cast<size_t>(enc.initState)]);
        int b = __builtin_ctz(p.byAgent[1].enabled[static_cast<size_t>(enc.initState)]);
        bool expect = pd.u(0, a, b) == Rational(5);
        CHECK(eval_at(inst, enc.initState, p) == expect);
        CHECK(eval_at(inst, enc.outcome[static_cast<size_t>(a)][static_cast<size_t>(b)], p) ==
              expect);
    }
}

TEST_CASE("named games against the oracles, with witnesses") {
    NormalFormGame pd = prisonersDilemma();
    auto [pdHasNe, pdCell] = brute_force_ne(pd);
    REQUIRE(pdHasNe);
    CHECK(*pdCell == std::make_pair(1, 1));  // mutual defection
    CHECK(formulaNe(pd));

    GameEncoding enc = game_to_env(pd);
    Instance inst;
    inst.env = &enc.env;
    inst.cls = enc.cls;
    inst.formula = ne_formula(pd);
    CheckOptions o;
    o.wantWitness = true;
    Verdict v = check(inst, o);
    REQUIRE(v.witness);
    CHECK(witness_joint_action(enc, *v.witness) == *pdCell);

    NormalFormGame mp = matchingPennies();
    CHECK(!brute_force_ne(mp).first);
    CHECK(!formulaNe(mp));

    // A dominant outcome is an equilibrium.
    NormalFormGame dominant = prisonersDilemma();
    dominant.util0 = {9, 0, 1, 1};
    dominant.util1 = {9, 1, 0, 1};
    CHECK(brute_force_ne(dominant).first);
    CHECK(formulaNe(dominant));

    CHECK(formulaPce(pd) == brute_force_pce(pd));
    CHECK(formulaPce(mp) == brute_force_pce(mp));

    // Mutual cooperation dominating every best-response cell is cooperative.
    NormalFormGame coop = prisonersDilemma();
    coop.util0 = {5, 0, 3, 1};
    coop.util1 = {5, 3, 0, 1};
    CHECK(brute_force_pce(coop));
    CHECK(formulaPce(coop));

    // One outcome only: trivially an equilibrium of both kinds.
    NormalFormGame single;
    single.actions0 = {"x"};
    single.actions1 = {"y"};
    single.util0 = {2};
    single.util1 = {7};
    CHECK(brute_force_ne(single).first);
    CHECK(brute_force_pce(single));
    CHECK(formulaNe(single));
    CHECK(formulaPce(single));
}

TEST_CASE("random games: formulas equal the brute-force oracles") {
    Rng rng(89);
    for (int round = 0; round < 40; ++round) {
        int na = 2 + pick(rng, 2);
        int nb = 2 + pick(rng, 2);
        NormalFormGame g = randomGame(rng, na, nb);
        CHECK(formulaNe(g) == brute_force_ne(g).first);
        CHECK(formulaPce(g) == brute_force_pce(g));
    }
}

TEST_CASE("scaling one player's payoffs preserves the equilibrium verdict") {
    Rng rng(97);
    for (int round = 0; round < 20; ++round) {
        NormalFormGame g = randomGame(rng, 2, 2);
        NormalFormGame scaled = g;
        for (Rational& r : scaled.util0) r = Rational(r.num * 3, r.den);
        CHECK(formulaNe(g) == formulaNe(scaled));
    }
}

TEST_CASE("relabeling actions leaves the cooperative verdict alone") {
    Rng rng(103);
    for (int round = 0; round < 10; ++round) {
        NormalFormGame g = randomGame(rng, 2, 2);
        NormalFormGame renamed = g;
        renamed.actions0 = {"x", "y"};
        renamed.actions1 = {"u", "v"};
        CHECK(formulaPce(g) == formulaPce(renamed));
    }
}

TEST_CASE("game text round-trips") {
    NormalFormGame pd = prisonersDilemma();
    NormalFormGame back = parse_game(render_game(pd));
    CHECK(back.actions0 == pd.actions0);
    CHECK(back.util1 == pd.util1);
    CHECK_THROWS_AS(parse_game("actions 0: a\npayoffs 0: 1"), ParseError);
}

TEST_CASE("constant games return the first cell in canonical order") {
    NormalFormGame flat;
    flat.actions0 = {"a", "b"};
    flat.actions1 = {"a", "b"};
    flat.util0 = {1, 1, 1, 1};
    flat.util1 = {1, 1, 1, 1};
    auto [has, cell] = brute_force_ne(flat);
    REQUIRE(has);
    CHECK(*cell == std::make_pair(0, 0));
}
