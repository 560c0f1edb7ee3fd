#pragma once

// Internal: the shared evaluator behind the checking engines. Not part of the
// public surface; include esl/checker.hpp instead.

#include <map>
#include <unordered_map>

#include "esl/checker.hpp"
#include "esl/ltl.hpp"

namespace esl::detail {

/// What the evaluator needs from a model: dense admissible nodes, successor
/// steps that keep the strategy component fixed, atoms, and the two knowledge
/// groupings. Implemented by the direct strategy-space view and by the
/// reduced epistemic transition system.
class ModelView {
  public:
    virtual ~ModelView() = default;
    virtual const std::vector<int32_t>& admissible() const = 0;
    virtual bool isInitial(int32_t node) const = 0;
    virtual const std::vector<int32_t>& successors(int32_t node) const = 0;
    virtual bool atomValue(int32_t atomRef, int32_t node) const = 0;
    virtual bool indist(int32_t a, int32_t b, const AgentTagSet& tags) const = 0;
    virtual const std::vector<int32_t>& distGroup(const AgentTagSet& tags, int32_t node) const = 0;
    virtual const std::vector<int32_t>& commonGroup(const AgentTagSet& tags,
                                                    int32_t node) const = 0;
};

// One evaluator drives all three direct engines:
//   - the state-recursive engine resolves path quantifiers by CTL fixpoints
//     over the profile-fixed subgraph (ctlFixpoints = true),
//   - the branching/linear engine resolves every path quantifier by a tableau
//     automaton and a nested-DFS product emptiness check,
//   - quantifier support is switched separately.
// Truth of knowledge, quantifier, and path-quantified nodes depends only on
// the global state and the restriction of the context to the node's free
// variables; memoization keys on exactly that.

struct EngineConfig {
    bool allowQuantifiers = true;
    bool ctlFixpoints = false;
};

struct MemoKey {
    int32_t node, g;
    std::vector<int32_t> gamma;
    bool operator==(const MemoKey&) const = default;
};
struct MemoKeyHash {
    size_t operator()(const MemoKey& k) const {
        size_t h = std::hash<int64_t>{}((int64_t(k.node) << 32) ^ uint32_t(k.g));
        for (int32_t v : k.gamma) hashCombine(h, static_cast<size_t>(v) + 1);
        return h;
    }
};

class Engine {
  public:
    Engine(const ModelView& model, const Compiled& cf, const CheckOptions& opts, Statistics& stats,
           EngineConfig cfg)
        : model_(model), cf_(cf), opts_(opts), stats_(stats), cfg_(cfg),
          gamma_(cf.varNames.size(), -1) {}

    bool evalRoot(int32_t g, const std::vector<int32_t>& gamma0) {
        for (size_t i = 0; i < gamma_.size(); ++i)
            gamma_[i] = i < gamma0.size() ? gamma0[i] : -1;
        return eval(cf_.root, g);
    }

  private:
    std::vector<int32_t> restrict(const Compiled::Node& nd) const {
        std::vector<int32_t> out;
        out.reserve(nd.freeVars.size());
        for (int32_t v : nd.freeVars) out.push_back(gamma_[static_cast<size_t>(v)]);
        return out;
    }

    bool eval(int32_t n, int32_t g) {
        const Compiled::Node& nd = cf_.at(n);
        switch (nd.kind) {
            case FKind::Atom: return model_.atomValue(nd.atom, g);
            case FKind::True: return true;
            case FKind::False: return false;
            case FKind::Not: return !eval(nd.a, g);
            case FKind::And: return eval(nd.a, g) && eval(nd.b, g);
            case FKind::Or: return eval(nd.a, g) || eval(nd.b, g);
            case FKind::LocalEq: {
                if (!cfg_.allowQuantifiers)
                    throw FragmentError("quantifier construct outside the supported fragment");
                int32_t bound = gamma_[static_cast<size_t>(nd.var)];
                if (bound < 0)
                    throw InputError("unbound free variable '" +
                                     cf_.varNames[static_cast<size_t>(nd.var)] + "'");
                return model_.indist(g, bound, nd.locTag);
            }
            case FKind::DistKnow:
            case FKind::CommonKnow:
            case FKind::Exists:
            case FKind::PathAll:
                break;
            default:
                throw FragmentError("path operator outside a path quantifier");
        }
        MemoKey key{n, g, restrict(nd)};
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            ++stats_.memoHits;
            return it->second;
        }
        bool value = false;
        switch (nd.kind) {
            case FKind::DistKnow: {
                value = true;
                for (int32_t h : model_.distGroup(nd.tags, g)) {
                    if (!eval(nd.a, h)) {
                        value = false;
                        break;
                    }
                }
                break;
            }
            case FKind::CommonKnow: {
                if (nd.tags.empty()) {
                    value = eval(nd.a, g);
                    break;
                }
                value = true;
                for (int32_t h : model_.commonGroup(nd.tags, g)) {
                    if (!eval(nd.a, h)) {
                        value = false;
                        break;
                    }
                }
                break;
            }
            case FKind::Exists: {
                if (!cfg_.allowQuantifiers)
                    throw FragmentError("quantifier construct outside the supported fragment");
                value = false;
                int32_t slot = nd.var;
                for (int32_t h : model_.admissible()) {
                    gamma_[static_cast<size_t>(slot)] = h;
                    if (eval(nd.a, g)) {
                        value = true;
                        break;
                    }
                }
                gamma_[static_cast<size_t>(slot)] = -1;
                break;
            }
            case FKind::PathAll:
                value = cfg_.ctlFixpoints ? evalPathFixpoint(n, g) : forallPaths(n, g);
                break;
            default:
                break;
        }
        memo_.emplace(std::move(key), value);
        return value;
    }

    // ── CTL-style path evaluation (profile fixed along paths) ───────────────

    bool evalPathFixpoint(int32_t n, int32_t g) {
        const Compiled::Node& nd = cf_.at(n);
        switch (nd.core) {
            case Compiled::Node::CoreNext: {
                for (int32_t t : model_.successors(g))
                    if (!eval(nd.coreA, t)) return false;
                return true;
            }
            case Compiled::Node::CoreUntil:
                return fixpointUntil(n, g, /*universal=*/true);
            case Compiled::Node::CoreNotUntil:
                return !fixpointUntil(n, g, /*universal=*/false);
            case Compiled::Node::CoreGeneral:
                throw FragmentError("path body outside the CTL shapes");
        }
        return false;
    }

    // Least fixpoint for A(a U b) / E(a U b) over the subgraph forward-closed
    // from g; the strategy component is constant there. The verdict of this
    // PathAll node is recorded for every member at once (truth depends only
    // on the global state). Returns the raw until value at g.
    bool fixpointUntil(int32_t n, int32_t g, bool universal) {
        const Compiled::Node& nd = cf_.at(n);
        std::vector<int32_t> domain{g};
        std::map<int32_t, size_t> pos{{g, 0}};
        for (size_t i = 0; i < domain.size(); ++i) {
            for (int32_t t : model_.successors(domain[i]))
                if (pos.emplace(t, domain.size()).second) domain.push_back(t);
        }
        size_t m = domain.size();
        stats_.statesExplored += m;
        std::vector<char> res(m, 0), aHolds(m, 0);
        for (size_t i = 0; i < m; ++i) {
            if (eval(nd.coreB, domain[i]))
                res[i] = 1;
            else
                aHolds[i] = eval(nd.coreA, domain[i]) ? 1 : 0;
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < m; ++i) {
                if (res[i] || !aHolds[i]) continue;
                bool next = universal;
                for (int32_t t : model_.successors(domain[i])) {
                    bool v = res[pos[t]] != 0;
                    next = universal ? (next && v) : (next || v);
                    if (next != universal) break;
                }
                if (next) {
                    res[i] = 1;
                    changed = true;
                }
            }
        }
        for (size_t i = 0; i < m; ++i) {
            MemoKey key{n, domain[i], restrict(nd)};
            bool value = universal ? res[i] != 0 : !(res[i] != 0);
            memo_.emplace(std::move(key), value);
        }
        return res[0] != 0;
    }

    // ── Automaton-based path evaluation ─────────────────────────────────────

    struct AtomRegistry {
        std::vector<std::pair<int32_t, std::vector<int32_t>>> atoms;  // (node, gamma snapshot)
        std::map<std::pair<int32_t, std::vector<int32_t>>, int32_t> index;
    };
    struct AutEntry {
        ltl::Automaton automaton;
        AtomRegistry registry;
    };

    int32_t convert(int32_t n, bool pol, ltl::Arena& arena, AtomRegistry& reg) {
        const Compiled::Node& nd = cf_.at(n);
        if (nd.kind == FKind::True) return pol ? arena.tt() : arena.ff();
        if (nd.kind == FKind::False) return pol ? arena.ff() : arena.tt();
        if (nd.isState) {
            auto key = std::make_pair(n, restrict(nd));
            auto it = reg.index.find(key);
            int32_t atom;
            if (it != reg.index.end()) {
                atom = it->second;
            } else {
                atom = static_cast<int32_t>(reg.atoms.size());
                reg.atoms.emplace_back(n, gamma_);
                reg.index.emplace(std::move(key), atom);
            }
            return arena.lit(atom, !pol);
        }
        switch (nd.kind) {
            case FKind::Not:
                return convert(nd.a, !pol, arena, reg);
            case FKind::And:
            case FKind::Or: {
                bool isAnd = (nd.kind == FKind::And) == pol;
                int32_t a = convert(nd.a, pol, arena, reg);
                int32_t b = convert(nd.b, pol, arena, reg);
                return arena.mk2(isAnd ? ltl::Node::And : ltl::Node::Or, a, b);
            }
            case FKind::Next:
                return arena.mk1(ltl::Node::X, convert(nd.a, pol, arena, reg));
            case FKind::Until: {
                int32_t a = convert(nd.a, pol, arena, reg);
                int32_t b = convert(nd.b, pol, arena, reg);
                return arena.mk2(pol ? ltl::Node::U : ltl::Node::R, a, b);
            }
            case FKind::Exists: {
                // A quantifier scoped over a path formula: unfold over the
                // admissible global states under the current polarity.
                if (!cfg_.allowQuantifiers)
                    throw FragmentError("quantifier construct outside the supported fragment");
                int32_t slot = nd.var;
                int32_t acc = -1;
                for (int32_t h : model_.admissible()) {
                    gamma_[static_cast<size_t>(slot)] = h;
                    int32_t part = convert(nd.a, pol, arena, reg);
                    acc = acc < 0 ? part
                                  : arena.mk2(pol ? ltl::Node::Or : ltl::Node::And, acc, part);
                }
                gamma_[static_cast<size_t>(slot)] = -1;
                if (acc < 0) return pol ? arena.ff() : arena.tt();
                return acc;
            }
            default:
                throw FragmentError("unsupported construct inside a path formula");
        }
    }

    bool forallPaths(int32_t n, int32_t g) {
        const Compiled::Node& nd = cf_.at(n);
        auto key = std::make_pair(n, restrict(nd));
        auto it = autCache_.find(key);
        if (it == autCache_.end()) {
            AutEntry entry;
            ltl::Arena arena(opts_.formulaNodeBudget);
            int32_t root = convert(nd.a, /*pol=*/false, arena, entry.registry);
            entry.automaton = ltl::build_automaton(arena, root, kAutomatonStateBudget);
            it = autCache_.emplace(std::move(key), std::move(entry)).first;
        }
        AutEntry& entry = it->second;
        ltl::SuccFn succ = [this](int32_t node) -> const std::vector<int32_t>& {
            return model_.successors(node);
        };
        ltl::AtomFn atomTrue = [this, &entry](int32_t atom, int32_t node) {
            const auto& [cnode, snapshot] = entry.registry.atoms[static_cast<size_t>(atom)];
            std::vector<int32_t> saved = gamma_;
            gamma_ = snapshot;
            bool v = eval(cnode, node);
            gamma_ = std::move(saved);
            return v;
        };
        bool counterexample =
            ltl::exists_accepting_path(entry.automaton, g, succ, atomTrue, &stats_.statesExplored);
        return !counterexample;
    }

    static constexpr size_t kAutomatonStateBudget = 200'000;

    const ModelView& model_;
    const Compiled& cf_;
    const CheckOptions& opts_;
    Statistics& stats_;
    EngineConfig cfg_;
    std::vector<int32_t> gamma_;
    std::unordered_map<MemoKey, bool, MemoKeyHash> memo_;
    std::map<std::pair<int32_t, std::vector<int32_t>>, AutEntry> autCache_;
};

}  // namespace esl::detail
