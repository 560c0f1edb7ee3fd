#pragma once

#include <functional>
#include <set>

#include "esl/basics.hpp"

namespace esl::ltl {

// Negation-normal-form path formulas over abstract atom handles. State
// subformulas of the source logic arrive here as opaque atoms; the owner
// supplies their evaluation when the product is explored.
struct Node {
    enum Kind : uint8_t { Lit, TT, FF, And, Or, X, U, R } kind;
    int32_t atom = -1;  // Lit
    bool neg = false;   // Lit
    int32_t a = -1, b = -1;
};

class Arena {
  public:
    explicit Arena(size_t nodeBudget) : budget_(nodeBudget) {}
    int32_t lit(int32_t atom, bool neg) {
        return add(Node{Node::Lit, atom, neg, -1, -1});
    }
    int32_t tt() { return add(Node{Node::TT, -1, false, -1, -1}); }
    int32_t ff() { return add(Node{Node::FF, -1, false, -1, -1}); }
    int32_t mk1(Node::Kind k, int32_t a) { return add(Node{k, -1, false, a, -1}); }
    int32_t mk2(Node::Kind k, int32_t a, int32_t b) { return add(Node{k, -1, false, a, b}); }
    const Node& at(int32_t i) const { return nodes_[static_cast<size_t>(i)]; }
    size_t size() const { return nodes_.size(); }

  private:
    int32_t add(Node n) {
        if (nodes_.size() >= budget_)
            throw BudgetError("path formula expansion", nodes_.size() + 1, budget_);
        nodes_.push_back(n);
        return static_cast<int32_t>(nodes_.size() - 1);
    }
    std::vector<Node> nodes_;
    size_t budget_;
};

/// Generalized Buchi automaton from the closure-set (tableau) construction.
/// A run q0 q1 ... accepts the word w0 w1 ... when the literal constraints of
/// each q_i hold at w_i and every acceptance set is visited infinitely often.
struct Automaton {
    struct State {
        std::vector<std::pair<int32_t, bool>> lits;  // (atom, negated)
        std::vector<int32_t> succs;
        bool initial = false;
    };
    std::vector<State> states;
    std::vector<std::vector<uint8_t>> acceptSets;  // [set][state] membership
};

Automaton build_automaton(const Arena& arena, int32_t root, size_t stateBudget);

using SuccFn = std::function<const std::vector<int32_t>&(int32_t)>;
using AtomFn = std::function<bool(int32_t atom, int32_t graphNode)>;

/// Reachable accepting lasso search over the (graph x automaton) product,
/// nested depth-first. Returns true iff some infinite path from `start`
/// is accepted by the automaton.
bool exists_accepting_path(const Automaton& aut, int32_t start, const SuccFn& succ,
                           const AtomFn& atomTrue, uint64_t* statesVisited = nullptr);

}  // namespace esl::ltl
