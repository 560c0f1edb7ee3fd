#include "doctest.h"

#include "esl/global_space.hpp"
#include "support/random_instances.hpp"

using namespace esl;
using namespace testsupport;

TEST_CASE("validation reports seriality violations by state and action") {
    Environment env = makeE1();
    CHECK(validate_environment(env).empty());

    Environment broken;
    AgentId one = broken.addAgent("1");
    broken.addAction(one, "a");
    broken.addAction(one, "b");
    StateId s0 = broken.addState("s0");
    broken.setObservation(one, s0, "0");
    broken.initial.push_back(s0);
    broken.seal();
    broken.addTransition(s0, 0, s0);  // nothing under action b
    auto report = validate_environment(broken);
    REQUIRE(report.size() == 1);
    CHECK(report[0].kind == Violation::Seriality);
    CHECK(report[0].detail.find("s0") != std::string::npos);
    CHECK(report[0].detail.find("(b)") != std::string::npos);
}

TEST_CASE("turn-based wildcard input expands to a serial relation only when total") {
    // Two agents, states owned by agent 1: successors depend on agent 1 only.
    Environment env;
    AgentId a1 = env.addAgent("1");
    AgentId a2 = env.addAgent("2");
    env.addAction(a1, "l");
    env.addAction(a1, "r");
    env.addAction(a2, "x");
    StateId s0 = env.addState("s0");
    StateId s1 = env.addState("s1");
    for (AgentId i : {a1, a2})
        for (StateId s : {s0, s1}) env.setObservation(i, s, "0");
    env.initial.push_back(s0);
    env.seal();
    std::array<ActionId, 2> lx{0, 0}, rx{1, 0};
    env.addTransition(s0, env.jointEncode(lx), s0);
    env.addTransition(s1, env.jointEncode(lx), s1);
    env.addTransition(s1, env.jointEncode(rx), s1);
    auto report = validate_environment(env);
    CHECK(!report.empty());  // agent 1's action r is undefined at s0
}

TEST_CASE("profile counts for the built-in classes") {
    // 1 agent, 2 states with distinct observations, A={a,b}.
    Environment env;
    AgentId one = env.addAgent("1");
    env.addAction(one, "a");
    env.addAction(one, "b");
    StateId s0 = env.addState("s0");
    StateId s1 = env.addState("s1");
    env.setObservation(one, s0, "0");
    env.setObservation(one, s1, "1");
    env.initial.push_back(s0);
    env.seal();
    for (StateId s : {s0, s1})
        for (int ja = 0; ja < 2; ++ja) env.addTransition(s, ja, s);

    CHECK(enumerate_profiles(env, *StrategyClass::locallyUniformDeterministic()).size() == 4);

    Environment shared = env;
    shared.obs[0][1] = shared.obs[0][0];  // both states share one observation
    CHECK(enumerate_profiles(shared, *StrategyClass::locallyUniformDeterministic()).size() == 2);

    // 1 agent, 1 state, A={a,b}: the nonempty subsets.
    Environment tiny;
    AgentId t1 = tiny.addAgent("1");
    tiny.addAction(t1, "a");
    tiny.addAction(t1, "b");
    StateId u = tiny.addState("u");
    tiny.setObservation(t1, u, "0");
    tiny.initial.push_back(u);
    tiny.seal();
    tiny.addTransition(u, 0, u);
    tiny.addTransition(u, 1, u);
    CHECK(enumerate_profiles(tiny, *StrategyClass::all()).size() == 3);
}

TEST_CASE("profile_in_class membership") {
    Environment env = makeE1();
    StrategyProfile random = complete_group_strategy(env, {});
    CHECK(profile_in_class(
        env, random, *StrategyClass::atelCompletion(StrategyClass::locallyUniformDeterministic())));

    // Same observation at both states, different enabled sets: not uniform.
    StrategyProfile nonuniform = singleAgentProfile(env, 0b01, 0b10);
    CHECK(!profile_in_class(env, nonuniform, *StrategyClass::locallyUniform()));

    StrategyProfile detUniform = singleAgentProfile(env, 0b01, 0b01);
    CHECK(profile_in_class(env, detUniform, *StrategyClass::all()));
    CHECK(profile_in_class(env, detUniform, *StrategyClass::locallyUniformDeterministic()));
}

TEST_CASE("enumerated members satisfy the class predicate exactly") {
    Rng rng(7);
    for (int round = 0; round < 20; ++round) {
        Environment env = randomEnv(rng);
        for (ClassPtr cls : {StrategyClass::all(), StrategyClass::deterministic(),
                             StrategyClass::locallyUniform(),
                             StrategyClass::locallyUniformDeterministic(),
                             StrategyClass::atelCompletion(StrategyClass::deterministic())}) {
            ProfileSpace space = enumerate_profiles(env, *cls);
            ProfileSpace allSpace = enumerate_profiles(env, *StrategyClass::all());
            uint64_t matching = 0;
            for (uint64_t i = 0; i < allSpace.size(); ++i)
                if (cls->contains(env, allSpace.materialize(i))) ++matching;
            CHECK(space.size() == matching);
            for (uint64_t i = 0; i < space.size(); ++i)
                CHECK(cls->contains(env, space.materialize(i)));
        }
    }
}

TEST_CASE("successors and reach on E1") {
    Environment env = makeE1();
    StrategyProfile onlyA = singleAgentProfile(env, 0b01, 0b11);
    StrategyProfile both = singleAgentProfile(env, 0b11, 0b11);

    CHECK(successors(env, 0, onlyA) == std::vector<StateId>{0});
    CHECK(successors(env, 0, both) == std::vector<StateId>{0, 1});
    CHECK(successors(env, 1, onlyA) == std::vector<StateId>{1});

    Bitset rOnlyA = reach(env, onlyA);
    CHECK(rOnlyA.test(0));
    CHECK(!rOnlyA.test(1));
    CHECK(reach(env, both).count() == 2);
}

TEST_CASE("seriality lifts to nonempty successor sets under every class member") {
    Rng rng(11);
    for (int round = 0; round < 15; ++round) {
        Environment env = randomEnv(rng);
        REQUIRE(validate_environment(env).empty());
        ProfileSpace space = enumerate_profiles(env, *StrategyClass::all());
        for (uint64_t i = 0; i < space.size(); ++i) {
            StrategyProfile p = space.materialize(i);
            for (StateId s = 0; s < env.stateCount(); ++s)
                CHECK(!successors(env, s, p).empty());
        }
    }
}

TEST_CASE("global states pair class members with their reach sets") {
    Environment env = makeE1();
    GlobalSpace space(env, enumerate_profiles(env, *StrategyClass::all()));
    CHECK(space.profileCount() == 9);
    uint64_t expected = 0;
    for (uint64_t i = 0; i < space.profileCount(); ++i)
        expected += reach(env, space.profiles().materialize(i)).count();
    CHECK(static_cast<uint64_t>(space.admissibleCount()) == expected);
    CHECK(static_cast<uint64_t>(space.admissibleCount()) <=
          space.profileCount() * static_cast<uint64_t>(env.stateCount()));

    // A state unreachable under every profile appears in no global state.
    Environment lonely = makeE1();
    StateId u = lonely.addState("u");
    lonely.setObservation(0, u, "0");
    lonely.seal();
    for (int ja = 0; ja < 2; ++ja) lonely.addTransition(u, ja, u);
    GlobalSpace ls(lonely, enumerate_profiles(lonely, *StrategyClass::all()));
    for (int32_t h = 0; h < ls.admissibleCount(); ++h) CHECK(ls.stateOf(h) != u);
}

TEST_CASE("local values project the indexed global state components") {
    Environment env = makeE1();
    GlobalSpace space(env, enumerate_profiles(env, *StrategyClass::all()));
    StrategyProfile onlyA = singleAgentProfile(env, 0b01, 0b01);
    auto idx = space.profiles().indexOf(onlyA);
    REQUIRE(idx);
    int32_t g = space.handleOf(*idx, 0);
    REQUIRE(g >= 0);
    CHECK(space.stateOf(g) == 0);
    CHECK(space.obsOf(g, 0) == env.obs[0][0]);
    CHECK(space.profiles().pools[0][static_cast<size_t>(space.stratIndexOf(g, 0))] ==
          onlyA.byAgent[0]);
}

TEST_CASE("indistinguishability: empty group is universal, projections decide") {
    Rng rng(23);
    Environment env = randomEnv(rng, 3, 2, 2);
    GlobalSpace space(env, enumerate_profiles(env, *StrategyClass::all()));
    AgentTagSet empty;
    AgentTagSet agentOne{false, 0b01, 0b01};  // agent 1's observation and strategy
    for (int trial = 0; trial < 50; ++trial) {
        int32_t g = pick(rng, space.admissibleCount());
        int32_t h = pick(rng, space.admissibleCount());
        CHECK(space.indist(g, h, empty));
        CHECK(space.indist(g, g, agentOne));
        if (space.stateOf(g) == space.stateOf(h) &&
            space.stratIndexOf(g, 0) == space.stratIndexOf(h, 0))
            CHECK(space.indist(g, h, agentOne));  // only agent 2's strategy differs
    }
}

TEST_CASE("indistinguishability is an equivalence; larger groups refine it") {
    Rng rng(31);
    for (int round = 0; round < 10; ++round) {
        Environment env = randomEnv(rng, 3, 2, 2);
        GlobalSpace space(env, enumerate_profiles(env, *StrategyClass::locallyUniform()));
        AgentTagSet sub{coin(rng), static_cast<uint32_t>(rng() % 4),
                        static_cast<uint32_t>(rng() % 4)};
        AgentTagSet super = sub.unionWith(AgentTagSet{coin(rng), static_cast<uint32_t>(rng() % 4),
                                                      static_cast<uint32_t>(rng() % 4)});
        for (int trial = 0; trial < 60; ++trial) {
            int32_t g = pick(rng, space.admissibleCount());
            int32_t h = pick(rng, space.admissibleCount());
            int32_t k = pick(rng, space.admissibleCount());
            CHECK(space.indist(g, g, sub));
            CHECK(space.indist(g, h, sub) == space.indist(h, g, sub));
            if (space.indist(g, h, sub) && space.indist(h, k, sub))
                CHECK(space.indist(g, k, sub));
            if (space.indist(g, h, super)) CHECK(space.indist(g, h, sub));
        }
    }
}

TEST_CASE("common knowledge closure: degenerate and universal cases") {
    Environment env = makeE1();
    GlobalSpace space(env, enumerate_profiles(env, *StrategyClass::all()));
    CHECK(space.commonReachable(0, AgentTagSet{}, true) == std::vector<int32_t>{0});

    Rng rng(5);
    Environment env2 = randomEnv(rng, 3, 2, 2);
    GlobalSpace space2(env2, enumerate_profiles(env2, *StrategyClass::all()));
    AgentTagSet twoStrats{false, 0, 0b11};
    CHECK(space2.commonReachable(0, twoStrats, true).size() ==
          static_cast<size_t>(space2.admissibleCount()));
}

TEST_CASE("common knowledge shortcut equals breadth-first closure") {
    Rng rng(137);
    for (int round = 0; round < 60; ++round) {
        Environment env = randomEnv(rng, 4, 2, 2);
        ClassPtr cls =
            coin(rng) ? StrategyClass::all() : StrategyClass::locallyUniformDeterministic();
        GlobalSpace space(env, enumerate_profiles(env, *cls));
        AgentTagSet tags{coin(rng), static_cast<uint32_t>(rng() % 4),
                         static_cast<uint32_t>(rng() % 4)};
        int32_t g = pick(rng, space.admissibleCount());
        CHECK(space.commonReachable(g, tags, true) == space.commonReachable(g, tags, false));
    }
}

TEST_CASE("common knowledge closure grows with the tag set") {
    Rng rng(211);
    for (int round = 0; round < 20; ++round) {
        Environment env = randomEnv(rng, 3, 2, 2);
        GlobalSpace space(env, enumerate_profiles(env, *StrategyClass::locallyUniform()));
        AgentTagSet sub{false, static_cast<uint32_t>(rng() % 4), static_cast<uint32_t>(rng() % 4)};
        AgentTagSet super = sub.unionWith(AgentTagSet{true, static_cast<uint32_t>(rng() % 4), 0});
        if (sub.empty()) continue;
        int32_t g = pick(rng, space.admissibleCount());
        auto small = space.commonReachable(g, sub, true);
        auto large = space.commonReachable(g, super, true);
        CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
    }
}

TEST_CASE("make_all_initial widens the initial set and reach monotonely") {
    Environment env = makeE1();
    Environment wide = make_all_initial(env);
    CHECK(wide.initial.size() == 2);
    CHECK(make_all_initial(wide).initial == wide.initial);

    ProfileSpace space = enumerate_profiles(env, *StrategyClass::all());
    for (uint64_t i = 0; i < space.size(); ++i) {
        StrategyProfile p = space.materialize(i);
        Bitset narrow = reach(env, p);
        Bitset broad = reach(wide, p);
        for (StateId s = 0; s < env.stateCount(); ++s)
            if (narrow.test(static_cast<size_t>(s))) CHECK(broad.test(static_cast<size_t>(s)));
    }
}

TEST_CASE("group strategy completion") {
    Rng rng(3);
    Environment env = randomEnv(rng, 3, 2, 2);
    StrategyProfile random = complete_group_strategy(env, {});
    for (AgentId i = 0; i < env.agentCount(); ++i)
        CHECK(random.byAgent[static_cast<size_t>(i)] == random_strategy(env, i));

    ProfileSpace dets = enumerate_profiles(env, *StrategyClass::locallyUniformDeterministic());
    StrategyProfile full = dets.materialize(0);
    std::vector<std::pair<AgentId, IndividualStrategy>> group;
    for (AgentId i = 0; i < env.agentCount(); ++i)
        group.emplace_back(i, full.byAgent[static_cast<size_t>(i)]);
    CHECK(complete_group_strategy(env, group) == full);

    StrategyProfile partial = complete_group_strategy(env, {group[0]});
    CHECK(profile_in_class(
        env, partial, *StrategyClass::atelCompletion(StrategyClass::locallyUniformDeterministic())));
    CHECK_THROWS_AS(complete_group_strategy(env, {{static_cast<AgentId>(99), full.byAgent[0]}}),
                    InputError);
}

TEST_CASE("custom classes filter a base enumeration; bare predicates refuse") {
    Environment env = makeE1();
    ClassPtr constant = StrategyClass::custom(
        StrategyClass::deterministic(),
        [](const Environment&, const StrategyProfile& p) {
            return p.byAgent[0].enabled[0] == p.byAgent[0].enabled[1];
        },
        "constant");
    CHECK(enumerate_profiles(env, *constant).size() == 2);  // always-a, always-b
    ClassPtr bare = StrategyClass::custom(
        nullptr, [](const Environment&, const StrategyProfile&) { return true; }, "bare");
    CHECK_THROWS_AS(enumerate_profiles(env, *bare), InputError);
}
