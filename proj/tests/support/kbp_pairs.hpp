#pragma once

// Handcrafted program/environment pairs (|S| <= 3) shared by the unit and
// acceptance suites. Each program mentions every action of its agent so the
// implementation formula sees the whole enabled set.

#include "esl/kbp.hpp"
#include "support/random_instances.hpp"

namespace kbppairs {

using namespace esl;
using namespace testsupport;

struct Pair {
    Environment env;
    std::string program;
};



// Both states initial, indistinguishable; p only at s1: K[1] p never holds.
Pair bitLite() {
    Pair out;
    Environment& env = out.env;
    AgentId one = env.addAgent("1");
    env.addAction(one, "a");
    env.addAction(one, "b");
    env.addState("s0");
    env.addState("s1");
    env.setObservation(one, 0, "0");
    env.setObservation(one, 1, "0");
    env.addLabel(1, "p");
    env.initial = {0, 1};
    env.seal();
    for (StateId s : {0, 1})
        for (int ja = 0; ja < 2; ++ja) env.addTransition(s, ja, s);
    out.program = "agent 1: do K[1] p -> a [] otherwise -> b od";
    return out;
}

// Guards contradict every profile: act a exactly when knowing p, but playing
// a is what makes p unknowable.
Pair contradiction() {
    Pair out;
    Environment& env = out.env;
    AgentId one = env.addAgent("1");
    env.addAction(one, "a");
    env.addAction(one, "b");
    env.addState("s0");
    env.addState("s1");
    env.setObservation(one, 0, "0");
    env.setObservation(one, 1, "0");
    env.addLabel(0, "p");
    env.initial = {0};
    env.seal();
    env.addTransition(0, 0, 1);  // a leaves p
    env.addTransition(0, 1, 0);  // b stays
    env.addTransition(1, 0, 1);
    env.addTransition(1, 1, 1);
    out.program = "agent 1: do K[1] p -> a [] otherwise -> b od";
    return out;
}

// Self-fulfilling: acting a steers into p, so believing in F p sustains
// itself, and so does not believing it.
Pair selfFulfilling() {
    Pair out;
    Environment& env = out.env;
    AgentId one = env.addAgent("1");
    env.addAction(one, "a");
    env.addAction(one, "b");
    env.addState("s0");
    env.addState("s1");
    env.setObservation(one, 0, "0");
    env.setObservation(one, 1, "1");
    env.addLabel(1, "p");
    env.initial = {0};
    env.seal();
    env.addTransition(0, 0, 1);  // a reaches p
    env.addTransition(0, 1, 0);  // b loops
    env.addTransition(1, 0, 1);
    env.addTransition(1, 1, 1);
    out.program = "agent 1: do K[1] F p -> a [] otherwise -> b od";
    return out;
}

// Tautological guards on both actions: only the random strategy implements.
Pair bothEnabled() {
    Pair out = bitLite();
    out.program = "agent 1: do K[1] true -> a [] K[1] !true -> b od";
    // Rewrite so both guards are valid: knowing true and knowing "p or not p".
    out.program = "agent 1: do K[1] true -> a [] K[1] (p | !p) -> b od";
    return out;
}

// Distinct observations, p at s1: the unique fixed point plays b at s0 and a
// at s1.
Pair uniqueFixedPoint() {
    Pair out;
    Environment& env = out.env;
    AgentId one = env.addAgent("1");
    env.addAction(one, "a");
    env.addAction(one, "b");
    env.addState("s0");
    env.addState("s1");
    env.setObservation(one, 0, "0");
    env.setObservation(one, 1, "1");
    env.addLabel(1, "p");
    env.initial = {0, 1};
    env.seal();
    for (StateId s : {0, 1})
        for (int ja = 0; ja < 2; ++ja) env.addTransition(s, ja, s);
    out.program = "agent 1: do K[1] p -> a [] otherwise -> b od";
    return out;
}

// Two agents: agent 2 learns p only if agent 1 steers there.
Pair twoAgents() {
    Pair out;
    Environment& env = out.env;
    AgentId one = env.addAgent("1");
    AgentId two = env.addAgent("2");
    env.addAction(one, "l");
    env.addAction(one, "r");
    env.addAction(two, "yes");
    env.addAction(two, "no");
    env.addState("s0");
    env.addState("sa");
    env.addState("sb");
    for (StateId s : {0, 1, 2}) env.setObservation(one, s, "o" + std::to_string(s));
    env.setObservation(two, 0, "start");
    env.setObservation(two, 1, "moved");
    env.setObservation(two, 2, "moved");
    env.addLabel(1, "p");
    env.props.intern("q");
    env.initial = {0};
    env.seal();
    std::vector<ActionId> acts(2);
    for (int ja = 0; ja < env.jointCount(); ++ja) {
        env.jointDecode(ja, acts);
        env.addTransition(0, ja, acts[0] == 0 ? 1 : 2);
        env.addTransition(1, ja, 1);
        env.addTransition(2, ja, 2);
    }
    out.program =
        "agent 1: do K[1] true -> l [] K[1] !true -> r od\n"
        "agent 2: do K[2] p -> yes [] otherwise -> no od";
    return out;
}

std::vector<Pair> corpus() {
    return {bitLite(), contradiction(), selfFulfilling(), bothEnabled(), uniqueFixedPoint(),
            twoAgents()};
}


}  // namespace kbppairs
