#pragma once

#include "esl/formula.hpp"
#include "esl/global_space.hpp"

namespace esl {

/// Resolves atom names against whatever carries the labeling (an environment,
/// or an epistemic transition system with its marker propositions).
class AtomResolver {
  public:
    virtual ~AtomResolver() = default;
    virtual int32_t resolveAtom(const std::string& name) = 0;  // throws InputError
};

/// Engine-facing formula form: dense nodes, interned atoms, tag bitmasks,
/// variable slots, per-node analysis. Built from a desugared AST.
struct Compiled {
    struct Node {
        FKind kind;
        int32_t a = -1, b = -1;
        int32_t atom = -1;          // Atom: resolver handle
        AgentTagSet tags;           // DistKnow / CommonKnow
        AgentTagSet locTag;         // LocalEq: exactly one member
        int32_t var = -1;           // Exists binder slot / LocalEq variable slot
        bool isState = false;
        std::vector<int32_t> freeVars;  // sorted variable slots
        // Canonical shape of a PathAll body, used by the CTL-style engine.
        enum Core : uint8_t { CoreGeneral, CoreNext, CoreUntil, CoreNotUntil } core = CoreGeneral;
        int32_t coreA = -1, coreB = -1;
        bool shaped = false;  // node and descendants fit the CTL patterns
    };
    std::vector<Node> nodes;
    int32_t root = -1;
    std::vector<std::string> varNames;  // slot -> name; context slots first
    int32_t contextVars = 0;

    const Node& at(int32_t i) const { return nodes[static_cast<size_t>(i)]; }
};

/// Compile a desugared formula. Context variables (free variables supplied by
/// a binding) occupy the first slots in the given order; an unbound free
/// variable is an error. If the formula is a path formula it is wrapped in a
/// path quantifier, matching satisfaction over all runs at time zero.
Compiled compile_formula(const FormulaPtr& desugared, const Environment& env, AtomResolver& atoms,
                         const std::vector<std::string>& contextVars);

/// Tag list -> bitmask form, validating names.
AgentTagSet resolve_tags(const std::vector<AgentTag>& tags, const Environment& env);

}  // namespace esl
