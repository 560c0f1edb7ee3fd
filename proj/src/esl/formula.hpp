#pragma once

#include <memory>
#include <set>

#include "esl/environment.hpp"

namespace esl {

// Node kinds. The first thirteen are the core kinds every checker engine
// consumes; the rest are surface sugar removed by desugar().
enum class FKind : uint8_t {
    Atom,
    True,
    False,
    Not,
    And,
    Or,
    PathAll,     // the A path quantifier
    Next,        // X
    Until,       // (a U b)
    Exists,      // exists x . a
    LocalEq,     // loc(tag, x)
    DistKnow,    // D[tags] a
    CommonKnow,  // C[tags] a
    // sugar
    Implies,
    Iff,
    Finally,       // F a
    Globally,      // G a
    PathExists,    // E a
    Know,          // K[tag] a
    EveryoneKnow,  // E[tags] a
};

/// One member of a knowledge group: the environment tag, a base agent, or a
/// strategic agent sig(i).
struct AgentTag {
    enum Kind : uint8_t { Env, Base, Strategic } kind = Base;
    std::string agent;  // empty for Env

    bool operator==(const AgentTag&) const = default;
    static AgentTag env() { return {Env, ""}; }
    static AgentTag base(std::string a) { return {Base, std::move(a)}; }
    static AgentTag strategic(std::string a) { return {Strategic, std::move(a)}; }
    std::string str() const {
        if (kind == Env) return "e";
        if (kind == Strategic) return "sig(" + agent + ")";
        return agent;
    }
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable formula tree. Atoms and variables are plain strings so formulas
/// can be built independently of any particular environment; the checker
/// resolves names when an instance is prepared.
class Formula {
  public:
    FKind kind;
    std::string text;            // atom name, or bound/used variable name
    AgentTag tag;                // Know, LocalEq
    std::vector<AgentTag> tags;  // DistKnow, CommonKnow, EveryoneKnow
    FormulaPtr lhs, rhs;

    static FormulaPtr atom(std::string name);
    static FormulaPtr t();
    static FormulaPtr f();
    static FormulaPtr notf(FormulaPtr a);
    static FormulaPtr andf(FormulaPtr a, FormulaPtr b);
    static FormulaPtr orf(FormulaPtr a, FormulaPtr b);
    static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
    static FormulaPtr iff(FormulaPtr a, FormulaPtr b);
    static FormulaPtr pathAll(FormulaPtr a);
    static FormulaPtr pathExists(FormulaPtr a);
    static FormulaPtr next(FormulaPtr a);
    static FormulaPtr until(FormulaPtr a, FormulaPtr b);
    static FormulaPtr finally_(FormulaPtr a);
    static FormulaPtr globally(FormulaPtr a);
    static FormulaPtr know(AgentTag t, FormulaPtr a);
    static FormulaPtr everyoneKnow(std::vector<AgentTag> ts, FormulaPtr a);
    static FormulaPtr distKnow(std::vector<AgentTag> ts, FormulaPtr a);
    static FormulaPtr commonKnow(std::vector<AgentTag> ts, FormulaPtr a);
    static FormulaPtr exists(std::string var, FormulaPtr a);
    static FormulaPtr localEq(AgentTag t, std::string var);

    /// Conjunction of a list; empty list is true.
    static FormulaPtr conj(const std::vector<FormulaPtr>& parts);
    static FormulaPtr disj(const std::vector<FormulaPtr>& parts);

    bool operator==(const Formula& o) const;  // structural
};

enum class Fragment { CTLK, ESLMinus, CTLStarK, FullESL };
const char* fragment_name(Fragment f);

/// True when truth at a point depends only on the global state (no bare
/// temporal operator outside a path quantifier).
bool is_state_formula(const FormulaPtr& f);

/// Rewrites sugar into the core kinds, hoists an A inside every knowledge
/// operator whose body is a path formula (sound: knowledge already quantifies
/// over every point carrying the same global state), and drops path
/// quantifiers wrapping state formulas. Idempotent.
FormulaPtr desugar(const FormulaPtr& f);

/// Least fragment admitting the (desugared) formula.
Fragment classify_fragment(const FormulaPtr& f);

std::set<std::string> free_vars(const FormulaPtr& f);

/// Replaces every nonempty D[G] by the equivalent exists-form
/// exists x (loc_G(x) & D[](loc_G(x) -> body)) with fresh variables.
FormulaPtr rewrite_dg_via_exists(const FormulaPtr& f);

/// Concrete syntax; parse_formula(render_formula(f)) is structurally f.
std::string render_formula(const FormulaPtr& f);

/// Parses the formula grammar, checking agent names, propositions, and tag
/// well-formedness against the environment. Pass nullptr to skip the checks
/// (used when a formula is rendered before any environment exists).
FormulaPtr parse_formula(std::string_view text, const Environment* env);

std::vector<AgentTag> all_base_tags(const Environment& env);
std::vector<AgentTag> all_strategic_tags(const Environment& env);

}  // namespace esl
