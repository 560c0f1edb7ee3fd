#include "esl/game.hpp"

#include <algorithm>
#include <sstream>

namespace esl::game {

std::vector<Rational> NormalFormGame::values(int player) const {
    std::vector<Rational> out = player == 0 ? util0 : util1;
    std::sort(out.begin(), out.end(), [](const Rational& a, const Rational& b) { return a < b; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

NormalFormGame parse_game(std::string_view text) {
    NormalFormGame g;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineNo = 0;
    bool haveA0 = false, haveA1 = false, haveU0 = false, haveU1 = false;
    while (std::getline(in, line)) {
        ++lineNo;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        auto readWords = [&](std::vector<std::string>& out) {
            std::string w;
            while (ls >> w) out.push_back(w);
        };
        auto readRationals = [&](std::vector<Rational>& out) {
            std::string w;
            while (ls >> w) out.push_back(Rational::parse(w));
        };
        std::string which;
        if (head == "actions" && (ls >> which)) {
            if (which == "0:") { readWords(g.actions0); haveA0 = true; }
            else if (which == "1:") { readWords(g.actions1); haveA1 = true; }
            else throw ParseError("expected 'actions 0:' or 'actions 1:'", lineNo);
        } else if (head == "payoffs" && (ls >> which)) {
            if (which == "0:") { readRationals(g.util0); haveU0 = true; }
            else if (which == "1:") { readRationals(g.util1); haveU1 = true; }
            else throw ParseError("expected 'payoffs 0:' or 'payoffs 1:'", lineNo);
        } else {
            throw ParseError("unknown game line '" + head + "'", lineNo);
        }
    }
    if (!haveA0 || !haveA1 || !haveU0 || !haveU1)
        throw ParseError("game needs actions and payoffs for both players");
    size_t cells = g.actions0.size() * g.actions1.size();
    if (g.actions0.empty() || g.actions1.empty())
        throw ParseError("each player needs at least one action");
    if (g.util0.size() != cells || g.util1.size() != cells)
        throw ParseError("payoff matrices must list " + std::to_string(cells) +
                         " row-major entries");
    return g;
}

std::string render_game(const NormalFormGame& g) {
    std::string out;
    auto line = [&](const std::string& head, auto render, const auto& items) {
        out += head;
        for (const auto& x : items) out += " " + render(x);
        out += "\n";
    };
    auto word = [](const std::string& s) { return s; };
    auto rat = [](const Rational& r) { return r.str(); };
    line("actions 0:", word, g.actions0);
    line("actions 1:", word, g.actions1);
    line("payoffs 0:", rat, g.util0);
    line("payoffs 1:", rat, g.util1);
    return out;
}

GameEncoding game_to_env(const NormalFormGame& g) {
    GameEncoding enc;
    Environment& env = enc.env;
    AgentId p0 = env.addAgent("0");
    AgentId p1 = env.addAgent("1");
    for (const std::string& a : g.actions0) env.addAction(p0, a);
    for (const std::string& b : g.actions1) env.addAction(p1, b);
    enc.initState = env.addState("init");
    env.addLabel(enc.initState, "start");
    enc.outcome.assign(g.actions0.size(), std::vector<StateId>(g.actions1.size(), -1));
    for (size_t a = 0; a < g.actions0.size(); ++a) {
        for (size_t b = 0; b < g.actions1.size(); ++b) {
            StateId s = env.addState("o_" + g.actions0[a] + "_" + g.actions1[b]);
            enc.outcome[a][b] = s;
            env.addLabel(s, "u0=" + g.u(0, static_cast<int>(a), static_cast<int>(b)).str());
            env.addLabel(s, "u1=" + g.u(1, static_cast<int>(a), static_cast<int>(b)).str());
        }
    }
    env.initial.push_back(enc.initState);
    for (StateId s = 0; s < env.stateCount(); ++s)
        for (AgentId i : {p0, p1}) env.setObservation(i, s, "0");
    env.seal();
    // Play happens in the first step; outcomes absorb every joint action.
    std::vector<ActionId> acts;
    for (int ja = 0; ja < env.jointCount(); ++ja) {
        env.jointDecode(ja, acts);
        env.addTransition(enc.initState, ja, enc.outcome[static_cast<size_t>(acts[0])][static_cast<size_t>(acts[1])]);
        for (const auto& row : enc.outcome)
            for (StateId s : row) env.addTransition(s, ja, s);
    }
    enc.cls = StrategyClass::locallyUniformDeterministic();
    return enc;
}

FormulaPtr utility_formula(const NormalFormGame& g, int player, const Rational& v) {
    std::vector<Rational> vals = g.values(player);
    if (std::find(vals.begin(), vals.end(), v) == vals.end())
        throw InputError("utility " + v.str() + " is not attainable for player " +
                         std::to_string(player));
    return Formula::next(Formula::atom("u" + std::to_string(player) + "=" + v.str()));
}

namespace {

// Best response: the current utility v is as good as anything reachable while
// the adversary's strategy is held fixed.
FormulaPtr bestResponse(const NormalFormGame& g, int player) {
    std::vector<Rational> vals = g.values(player);
    AgentTag adversary = AgentTag::strategic(player == 0 ? "1" : "0");
    std::vector<FormulaPtr> cases;
    for (const Rational& v : vals) {
        std::vector<FormulaPtr> better;
        for (const Rational& w : vals)
            if (!(w <= v)) better.push_back(Formula::notf(utility_formula(g, player, w)));
        FormulaPtr claim = utility_formula(g, player, v);
        if (!better.empty())
            claim = Formula::andf(claim, Formula::know(adversary, Formula::conj(better)));
        cases.push_back(claim);
    }
    return Formula::disj(cases);
}

// Upper bound against a best responder: everywhere in the strategy space, a
// point where the adversary best-responds pays at most v.
FormulaPtr bestUtility(const NormalFormGame& g, int player, const Rational& v) {
    std::vector<Rational> vals = g.values(player);
    FormulaPtr adversaryBr = bestResponse(g, 1 - player);
    std::vector<FormulaPtr> caps;
    for (const Rational& w : vals)
        if (!(w <= v))
            caps.push_back(Formula::notf(
                Formula::andf(adversaryBr, utility_formula(g, player, w))));
    if (caps.empty()) return Formula::t();
    return Formula::distKnow({}, Formula::conj(caps));
}

}  // namespace

FormulaPtr ne_formula(const NormalFormGame& g) {
    FormulaPtr both = Formula::andf(bestResponse(g, 0), bestResponse(g, 1));
    return Formula::notf(Formula::distKnow({}, Formula::notf(both)));
}

FormulaPtr pce_formula(const NormalFormGame& g) {
    auto bu = [&](int player) {
        std::vector<FormulaPtr> cases;
        for (const Rational& v : g.values(player))
            cases.push_back(
                Formula::andf(utility_formula(g, player, v), bestUtility(g, player, v)));
        return Formula::disj(cases);
    };
    FormulaPtr both = Formula::andf(bu(0), bu(1));
    return Formula::notf(Formula::distKnow({}, Formula::notf(both)));
}

std::pair<bool, std::optional<std::pair<int, int>>> brute_force_ne(const NormalFormGame& g) {
    int na = static_cast<int>(g.actions0.size());
    int nb = static_cast<int>(g.actions1.size());
    for (int a = 0; a < na; ++a) {
        for (int b = 0; b < nb; ++b) {
            bool ok = true;
            for (int a2 = 0; a2 < na && ok; ++a2) ok = g.u(0, a2, b) <= g.u(0, a, b);
            for (int b2 = 0; b2 < nb && ok; ++b2) ok = g.u(1, a, b2) <= g.u(1, a, b);
            if (ok) return {true, std::make_pair(a, b)};
        }
    }
    return {false, std::nullopt};
}

bool brute_force_pce(const NormalFormGame& g) {
    int na = static_cast<int>(g.actions0.size());
    int nb = static_cast<int>(g.actions1.size());
    auto bestResponseOf1 = [&](int a, int b) {
        for (int b2 = 0; b2 < nb; ++b2)
            if (!(g.u(1, a, b2) <= g.u(1, a, b))) return false;
        return true;
    };
    auto bestResponseOf0 = [&](int a, int b) {
        for (int a2 = 0; a2 < na; ++a2)
            if (!(g.u(0, a2, b) <= g.u(0, a, b))) return false;
        return true;
    };
    std::optional<Rational> cap0, cap1;
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b) {
            if (bestResponseOf1(a, b) && (!cap0 || *cap0 < g.u(0, a, b))) cap0 = g.u(0, a, b);
            if (bestResponseOf0(a, b) && (!cap1 || *cap1 < g.u(1, a, b))) cap1 = g.u(1, a, b);
        }
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < nb; ++b)
            if (*cap0 <= g.u(0, a, b) && *cap1 <= g.u(1, a, b)) return true;
    return false;
}

std::pair<int, int> witness_joint_action(const GameEncoding& enc, const Witness& w) {
    ActionSet m0 = w.profile.byAgent[0].enabled[static_cast<size_t>(enc.initState)];
    ActionSet m1 = w.profile.byAgent[1].enabled[static_cast<size_t>(enc.initState)];
    if (__builtin_popcount(m0) != 1 || __builtin_popcount(m1) != 1)
        throw InputError("witness profile is not a pure strategy pair");
    return {__builtin_ctz(m0), __builtin_ctz(m1)};
}

}  // namespace esl::game
