#pragma once

#include "esl/checker.hpp"

namespace esl {

/// Epistemic transition system over (state, profile) pairs with one marker
/// proposition per pair. The full cartesian product is materialized (and
/// budgeted); knowledge and paths are evaluated over its reachable part,
/// which is exactly the admissible set of the source instance.
struct Ets {
    const Environment* env = nullptr;
    std::shared_ptr<GlobalSpace> space;   // reachability + knowledge machinery
    uint64_t stateCount = 0;              // |S| x |class|
    uint64_t transitionCount = 0;         // over all pairs
    std::vector<std::vector<int32_t>> adjacency;  // per admissible handle
    std::vector<int32_t> initialHandles;

    std::string markerName(int32_t handle) const;
    /// Parses "pg_<state>_<profileIdx>" back to a handle; -1 when not a marker.
    int32_t markerHandle(const std::string& name) const;
};

/// Theorem-style reduction: materialize the epistemic transition system and
/// rewrite the formula so quantifiers and local-identity tests become
/// disjunctions over marker propositions. Throws BudgetError when the system
/// or the transformed formula would exceed the configured budgets.
std::pair<std::shared_ptr<Ets>, FormulaPtr> reduce_to_ets(const Instance& instance,
                                                          const CheckOptions& opts = {});

/// Branching-time epistemic verdict over the reduced system; the formula must
/// be quantifier-free.
bool check_ets(const Ets& ets, const FormulaPtr& formula, const CheckOptions& opts = {},
               Statistics* stats = nullptr);

}  // namespace esl
