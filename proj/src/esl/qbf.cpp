#include "esl/qbf.hpp"

#include <algorithm>
#include <sstream>

namespace esl::qbf {

namespace {

void checkMatrix(const FormulaPtr& f, const std::vector<std::string>& vars) {
    switch (f->kind) {
        case FKind::Atom:
            if (std::find(vars.begin(), vars.end(), f->text) == vars.end())
                throw ParseError("matrix mentions undeclared variable '" + f->text + "'");
            return;
        case FKind::True:
        case FKind::False:
            return;
        case FKind::Not:
            checkMatrix(f->lhs, vars);
            return;
        case FKind::And:
        case FKind::Or:
        case FKind::Implies:
        case FKind::Iff:
            checkMatrix(f->lhs, vars);
            checkMatrix(f->rhs, vars);
            return;
        default:
            throw ParseError("matrix must be propositional");
    }
}

bool evalMatrix(const FormulaPtr& f, const std::unordered_map<std::string, bool>& assignment) {
    switch (f->kind) {
        case FKind::Atom: return assignment.at(f->text);
        case FKind::True: return true;
        case FKind::False: return false;
        case FKind::Not: return !evalMatrix(f->lhs, assignment);
        case FKind::And: return evalMatrix(f->lhs, assignment) && evalMatrix(f->rhs, assignment);
        case FKind::Or: return evalMatrix(f->lhs, assignment) || evalMatrix(f->rhs, assignment);
        case FKind::Implies:
            return !evalMatrix(f->lhs, assignment) || evalMatrix(f->rhs, assignment);
        case FKind::Iff:
            return evalMatrix(f->lhs, assignment) == evalMatrix(f->rhs, assignment);
        default: throw InputError("matrix must be propositional");
    }
}

bool evalRec(const QbfInstance& q, size_t depth, std::unordered_map<std::string, bool>& assignment) {
    if (depth == q.isExists.size()) return evalMatrix(q.matrix, assignment);
    const std::string& var = q.varNames[depth];
    bool exists = q.isExists[depth];
    for (bool value : {false, true}) {
        assignment[var] = value;
        bool sub = evalRec(q, depth + 1, assignment);
        if (exists && sub) return true;
        if (!exists && !sub) return false;
    }
    return !exists;
}

}  // namespace

QbfInstance parse_qbf(std::string_view text) {
    QbfInstance q;
    auto dot = text.find('.');
    if (dot == std::string_view::npos)
        throw ParseError("expected '<prefix> . <matrix>'");
    std::istringstream prefix{std::string(text.substr(0, dot))};
    std::string word;
    while (prefix >> word) {
        bool exists;
        if (word == "exists")
            exists = true;
        else if (word == "forall")
            exists = false;
        else
            throw ParseError("expected 'exists' or 'forall', got '" + word + "'");
        std::string var;
        if (!(prefix >> var)) throw ParseError("quantifier without a variable");
        if (std::find(q.varNames.begin(), q.varNames.end(), var) != q.varNames.end())
            throw ParseError("variable '" + var + "' quantified twice");
        q.isExists.push_back(exists);
        q.varNames.push_back(var);
    }
    q.matrix = parse_formula(text.substr(dot + 1), nullptr);
    checkMatrix(q.matrix, q.varNames);
    return q;
}

std::string render_qbf(const QbfInstance& q) {
    std::string out;
    for (size_t i = 0; i < q.isExists.size(); ++i)
        out += std::string(q.isExists[i] ? "exists " : "forall ") + q.varNames[i] + " ";
    out += ". " + render_formula(q.matrix);
    return out;
}

QbfInstance normalize(const QbfInstance& q) {
    QbfInstance out = q;
    auto fresh = [&](const char* base) {
        std::string name = base;
        int k = 0;
        while (std::find(out.varNames.begin(), out.varNames.end(), name) != out.varNames.end())
            name = std::string(base) + std::to_string(k++);
        return name;
    };
    if (!out.isExists.empty() && !out.isExists.front()) {
        // A fresh unused existential in front preserves truth.
        out.isExists.insert(out.isExists.begin(), true);
        out.varNames.insert(out.varNames.begin(), fresh("pad_e"));
    }
    if (out.isExists.empty()) {
        out.isExists = {true};
        out.varNames = {fresh("pad_e")};
    }
    if (out.isExists.size() % 2 == 1) {
        out.isExists.push_back(false);
        out.varNames.push_back(fresh("pad_a"));
    }
    for (size_t i = 0; i < out.isExists.size(); ++i)
        if (out.isExists[i] != (i % 2 == 0))
            throw InputError("prefix does not alternate after normalization");
    return out;
}

bool eval_qbf_oracle(const QbfInstance& q) {
    if (q.n() > 20) throw InputError("oracle guard: more than 20 variables");
    std::unordered_map<std::string, bool> assignment;
    return evalRec(q, 0, assignment);
}

// ── Reduction ───────────────────────────────────────────────────────────────

namespace {

// K[sig(i)](p_{j-1} -> E X q_i): agent i's strategy picks action 1 at time
// j-1, so it encodes an assignment making x_j true.
FormulaPtr valFormula(int agent, int j) {
    return Formula::know(AgentTag::strategic(std::to_string(agent)),
                         Formula::implies(Formula::atom("p" + std::to_string(j - 1)),
                                          Formula::pathExists(Formula::next(
                                              Formula::atom("q" + std::to_string(agent))))));
}

// The two strategies encode the same values for x_1..x_m.
FormulaPtr agreeFormula(int m) {
    std::vector<FormulaPtr> parts;
    for (int j = 1; j <= m; ++j) {
        FormulaPtr ex1 = Formula::pathExists(Formula::next(Formula::atom("q1")));
        FormulaPtr ex2 = Formula::pathExists(Formula::next(Formula::atom("q2")));
        parts.push_back(Formula::distKnow(
            {AgentTag::strategic("1"), AgentTag::strategic("2")},
            Formula::implies(Formula::atom("p" + std::to_string(j - 1)),
                             Formula::iff(ex1, ex2))));
    }
    return Formula::conj(parts);
}

FormulaPtr substituteVals(const FormulaPtr& f, const std::vector<std::string>& vars) {
    if (f->kind == FKind::Atom) {
        auto it = std::find(vars.begin(), vars.end(), f->text);
        if (it == vars.end()) throw InputError("matrix variable unmapped");
        return valFormula(2, static_cast<int>(it - vars.begin()) + 1);
    }
    auto out = std::make_shared<Formula>(*f);
    if (f->lhs) out->lhs = substituteVals(f->lhs, vars);
    if (f->rhs) out->rhs = substituteVals(f->rhs, vars);
    return out;
}

}  // namespace

QbfReduction qbf_to_instance(const QbfInstance& input) {
    QbfInstance q = normalize(input);
    int n = q.n();

    QbfReduction out;
    Environment& env = out.env;
    AgentId a1 = env.addAgent("1");
    AgentId a2 = env.addAgent("2");
    for (AgentId i : {a1, a2}) {
        env.addAction(i, "0");
        env.addAction(i, "1");
    }
    // One start state plus one layer of four states per variable; both agents
    // observe only the time index.
    StateId s0 = env.addState("s0");
    env.addLabel(s0, "p0");
    std::vector<std::vector<StateId>> layer(static_cast<size_t>(n) + 1);
    layer[0] = {s0};
    for (int t = 1; t <= n; ++t) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                StateId s = env.addState("s_" + std::to_string(t) + "_" + std::to_string(j) +
                                         "_" + std::to_string(k));
                layer[static_cast<size_t>(t)].push_back(s);
                env.addLabel(s, "p" + std::to_string(t));
                if (j) env.addLabel(s, "q1");
                if (k) env.addLabel(s, "q2");
            }
        }
    }
    env.initial.push_back(s0);
    for (StateId s = 0; s < env.stateCount(); ++s) {
        std::string obsValue;
        if (s == s0)
            obsValue = "t0";
        else
            obsValue = "t" + std::to_string(1 + (s - 1) / 4);
        env.setObservation(a1, s, obsValue);
        env.setObservation(a2, s, obsValue);
    }
    env.seal();
    std::vector<ActionId> acts;
    for (int ja = 0; ja < env.jointCount(); ++ja) {
        env.jointDecode(ja, acts);
        size_t idx = static_cast<size_t>(acts[0]) * 2 + static_cast<size_t>(acts[1]);
        env.addTransition(s0, ja, layer[1][idx]);
        for (int t = 1; t < n; ++t)
            for (StateId s : layer[static_cast<size_t>(t)])
                env.addTransition(s, ja, layer[static_cast<size_t>(t) + 1][idx]);
        for (StateId s : layer[static_cast<size_t>(n)]) env.addTransition(s, ja, s);
    }

    // Alternating choice chain: the universal operator picks a fresh profile;
    // holding sig(1) fixed re-guesses agent 2 (a universal variable choice),
    // the dual form re-guesses agent 1 (an existential one). Each agree(m)
    // guard carries the earlier choices across.
    FormulaPtr body = substituteVals(q.matrix, q.varNames);
    for (int m = n - 1; m >= 1; --m) {
        if (m % 2 == 1) {
            body = Formula::distKnow({AgentTag::strategic("1")},
                                     Formula::implies(agreeFormula(m), body));
        } else {
            body = Formula::notf(Formula::distKnow(
                {AgentTag::strategic("2")},
                Formula::notf(Formula::andf(agreeFormula(m), body))));
        }
    }
    out.formula = Formula::notf(Formula::distKnow({}, Formula::notf(body)));
    out.cls = StrategyClass::locallyUniformDeterministic();
    return out;
}

}  // namespace esl::qbf
