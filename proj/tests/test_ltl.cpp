#include "doctest.h"

#include "esl/checker.hpp"
#include "support/random_instances.hpp"

using namespace esl;
using namespace testsupport;

namespace {

// Single-agent environment from an explicit successor list; one action per
// state pair keeps strategies trivial (the full graph).
struct Graph {
    Environment env;
    StrategyProfile profile;
};

Graph makeGraph(int n, const std::vector<std::pair<int, int>>& edges,
                const std::vector<std::string>& labels) {
    Graph g;
    AgentId one = g.env.addAgent("1");
    g.env.addAction(one, "go");
    for (int i = 0; i < n; ++i) g.env.addState("n" + std::to_string(i));
    for (int i = 0; i < n; ++i) g.env.setObservation(one, i, "0");
    for (int i = 0; i < n; ++i)
        for (char c : labels[static_cast<size_t>(i)]) g.env.addLabel(i, std::string(1, c));
    g.env.props.intern("p");
    g.env.props.intern("q");
    g.env.initial.push_back(0);
    g.env.seal();
    for (auto [from, to] : edges) g.env.addTransition(from, 0, to);
    g.profile = complete_group_strategy(g.env, {});
    return g;
}

// Truth of a pure path formula on the ultimately periodic path given by
// `states` looping back to `loopStart`; the independent oracle for the
// automaton route.
bool lassoSatisfies(const Graph& g, const std::vector<int>& states, size_t loopStart,
                    const FormulaPtr& f) {
    size_t m = states.size();
    auto next = [&](size_t i) { return i + 1 < m ? i + 1 : loopStart; };
    std::function<std::vector<char>(const FormulaPtr&)> evalAll =
        [&](const FormulaPtr& node) -> std::vector<char> {
        std::vector<char> out(m, 0);
        switch (node->kind) {
            case FKind::Atom: {
                auto p = g.env.props.find(node->text);
                for (size_t i = 0; i < m; ++i)
                    out[i] = p && g.env.hasLabel(states[i], *p) ? 1 : 0;
                return out;
            }
            case FKind::True: return std::vector<char>(m, 1);
            case FKind::False: return out;
            case FKind::Not: {
                auto a = evalAll(node->lhs);
                for (size_t i = 0; i < m; ++i) out[i] = !a[i];
                return out;
            }
            case FKind::And: {
                auto a = evalAll(node->lhs), b = evalAll(node->rhs);
                for (size_t i = 0; i < m; ++i) out[i] = a[i] && b[i];
                return out;
            }
            case FKind::Or: {
                auto a = evalAll(node->lhs), b = evalAll(node->rhs);
                for (size_t i = 0; i < m; ++i) out[i] = a[i] || b[i];
                return out;
            }
            case FKind::Next: {
                auto a = evalAll(node->lhs);
                for (size_t i = 0; i < m; ++i) out[i] = a[next(i)];
                return out;
            }
            case FKind::Until: {
                auto a = evalAll(node->lhs), b = evalAll(node->rhs);
                // Least fixpoint; enough sweeps to stabilize on the lasso.
                for (size_t sweep = 0; sweep <= 2 * m + 2; ++sweep)
                    for (size_t ii = m; ii-- > 0;)
                        out[ii] = b[ii] || (a[ii] && out[next(ii)]);
                return out;
            }
            default:
                throw InputError("oracle takes pure path formulas");
        }
    };
    return evalAll(f)[0] != 0;
}

// All lassos from `start` with prefix+cycle at most `bound`.
bool anyLassoSatisfies(const Graph& g, int start, int bound, const FormulaPtr& f) {
    std::vector<int> path{start};
    std::function<bool()> go = [&]() -> bool {
        int last = path.back();
        // Close the lasso at any earlier position reachable from `last`.
        for (StateId t : g.env.trans[static_cast<size_t>(last)][0]) {
            for (size_t l = 0; l < path.size(); ++l) {
                if (path[l] == t && lassoSatisfies(g, path, l, f)) return true;
            }
        }
        if (static_cast<int>(path.size()) >= bound) return false;
        for (StateId t : g.env.trans[static_cast<size_t>(last)][0]) {
            path.push_back(t);
            if (go()) return true;
            path.pop_back();
        }
        return false;
    };
    return go();
}

}  // namespace

TEST_CASE("universal path checking on fixed shapes") {
    // Absorbing p-labeled state.
    Graph loop = makeGraph(1, {{0, 0}}, {"p"});
    CHECK(ltl_forall_paths(loop.env, loop.profile, 0, parse_formula("G p", nullptr)));

    // Self-loop plus an exit into a !p state.
    Graph exit_ = makeGraph(2, {{0, 0}, {0, 1}, {1, 1}}, {"p", "q"});
    CHECK(!ltl_forall_paths(exit_.env, exit_.profile, 0, parse_formula("G p", nullptr)));
    CHECK(ltl_forall_paths(exit_.env, exit_.profile, 0, parse_formula("G (p | q)", nullptr)));

    // A cycle never visiting p refutes (true U p).
    Graph cycle = makeGraph(2, {{0, 1}, {1, 0}}, {"", ""});
    CHECK(!ltl_forall_paths(cycle.env, cycle.profile, 0, parse_formula("(true U p)", nullptr)));

    CHECK_THROWS_AS(ltl_forall_paths(loop.env, loop.profile, 0, parse_formula("p", nullptr)),
                    InputError);
}

TEST_CASE("existential path checking agrees with bounded lasso enumeration") {
    Rng rng(59);
    std::function<FormulaPtr(int)> pathFormula = [&](int d) -> FormulaPtr {
        if (d <= 0) return coin(rng) ? Formula::atom("p") : Formula::atom("q");
        switch (pick(rng, 6)) {
            case 0: return Formula::notf(pathFormula(d - 1));
            case 1: return Formula::andf(pathFormula(d - 1), pathFormula(d - 1));
            case 2: return Formula::orf(pathFormula(d - 1), pathFormula(d - 1));
            case 3: return Formula::next(pathFormula(d - 1));
            default: return Formula::until(pathFormula(d - 1), pathFormula(d - 1));
        }
    };
    int checked = 0;
    for (int round = 0; round < 120; ++round) {
        int n = 1 + pick(rng, 3);
        std::vector<std::pair<int, int>> edges;
        for (int s = 0; s < n; ++s) {
            int succs = 1 + pick(rng, 2);
            for (int k = 0; k < succs; ++k) edges.emplace_back(s, pick(rng, n));
        }
        std::vector<std::string> labels;
        for (int s = 0; s < n; ++s) {
            std::string l;
            if (coin(rng)) l += 'p';
            if (coin(rng)) l += 'q';
            labels.push_back(l);
        }
        Graph g = makeGraph(n, edges, labels);
        FormulaPtr psi = pathFormula(3);
        FormulaPtr desugared = desugar(psi);
        if (is_state_formula(desugared)) continue;
        bool engineExists =
            !ltl_forall_paths(g.env, g.profile, 0, Formula::notf(psi));
        bool lassoExists = anyLassoSatisfies(g, 0, 3 * n + 3, desugared);
        CHECK(engineExists == lassoExists);
        ++checked;
    }
    CHECK(checked > 60);
}
