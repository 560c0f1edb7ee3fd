#include "esl/ets.hpp"

#include <algorithm>

#include "esl/engine.hpp"

namespace esl {

std::string Ets::markerName(int32_t handle) const {
    return "pg_" + env->states.name(space->stateOf(handle)) + "_" +
           std::to_string(space->profileOf(handle));
}

int32_t Ets::markerHandle(const std::string& name) const {
    if (name.rfind("pg_", 0) != 0) return -1;
    auto cut = name.rfind('_');
    if (cut == std::string::npos || cut < 3) return -1;
    std::string stateName = name.substr(3, cut - 3);
    std::string idxText = name.substr(cut + 1);
    auto s = env->states.find(stateName);
    if (!s) return -1;
    uint64_t p = 0;
    for (char c : idxText) {
        if (c < '0' || c > '9') return -1;
        p = p * 10 + static_cast<uint64_t>(c - '0');
    }
    if (p >= space->profileCount()) return -1;
    return space->handleOf(p, *s);
}

namespace {

// Formula rewriting with a node budget. Quantifiers unfold into disjunctions
// over the admissible global states; local-identity tests into disjunctions
// of the marker propositions of matching admissible states.
struct Transformer {
    const Ets& ets;
    uint64_t budget;
    uint64_t built = 0;

    FormulaPtr count(FormulaPtr f) {
        if (++built > budget)
            throw BudgetError("transformed formula size", built, budget);
        return f;
    }

    FormulaPtr run(const FormulaPtr& f, std::map<std::string, int32_t>& gamma) {
        switch (f->kind) {
            case FKind::Atom:
            case FKind::True:
            case FKind::False:
                return count(f);
            case FKind::Not:
                return count(Formula::notf(run(f->lhs, gamma)));
            case FKind::And:
                return count(Formula::andf(run(f->lhs, gamma), run(f->rhs, gamma)));
            case FKind::Or:
                return count(Formula::orf(run(f->lhs, gamma), run(f->rhs, gamma)));
            case FKind::PathAll:
                return count(Formula::pathAll(run(f->lhs, gamma)));
            case FKind::Next:
                return count(Formula::next(run(f->lhs, gamma)));
            case FKind::Until:
                return count(Formula::until(run(f->lhs, gamma), run(f->rhs, gamma)));
            case FKind::DistKnow:
                return count(Formula::distKnow(f->tags, run(f->lhs, gamma)));
            case FKind::CommonKnow:
                return count(Formula::commonKnow(f->tags, run(f->lhs, gamma)));
            case FKind::LocalEq: {
                auto bound = gamma.find(f->text);
                if (bound == gamma.end())
                    throw InputError("unbound free variable '" + f->text + "'");
                AgentTagSet tag = resolve_tags({f->tag}, *ets.env);
                std::vector<FormulaPtr> parts;
                for (int32_t h : ets.space->allHandlesSorted()) {
                    if (!ets.space->indist(h, bound->second, tag)) continue;
                    parts.push_back(count(Formula::atom(ets.markerName(h))));
                }
                FormulaPtr out = Formula::disj(parts);
                return count(out);
            }
            case FKind::Exists: {
                std::vector<FormulaPtr> parts;
                auto saved = gamma.find(f->text) != gamma.end()
                                 ? std::optional<int32_t>(gamma[f->text])
                                 : std::nullopt;
                for (int32_t h : ets.space->allHandlesSorted()) {
                    gamma[f->text] = h;
                    parts.push_back(run(f->lhs, gamma));
                }
                if (saved)
                    gamma[f->text] = *saved;
                else
                    gamma.erase(f->text);
                FormulaPtr out = Formula::disj(parts);
                return count(out);
            }
            default:
                throw InputError("reduction expects a desugared formula");
        }
    }
};

class EtsResolver final : public AtomResolver {
  public:
    explicit EtsResolver(const Ets& ets) : ets_(ets) {}
    struct Entry {
        PropId prop = -1;
        int32_t marker = -1;
    };
    int32_t resolveAtom(const std::string& name) override {
        Entry e;
        int32_t marker = ets_.markerHandle(name);
        if (marker >= 0) {
            e.marker = marker;
        } else {
            auto p = ets_.env->props.find(name);
            if (!p) throw InputError("unknown proposition '" + name + "'");
            e.prop = *p;
        }
        entries.push_back(e);
        return static_cast<int32_t>(entries.size() - 1);
    }
    std::vector<Entry> entries;

  private:
    const Ets& ets_;
};

class EtsModel final : public detail::ModelView {
  public:
    EtsModel(const Ets& ets, const std::vector<EtsResolver::Entry>& atoms, bool shortcut)
        : ets_(ets), atoms_(atoms), shortcut_(shortcut) {}
    const std::vector<int32_t>& admissible() const override {
        return ets_.space->allHandlesSorted();
    }
    bool isInitial(int32_t h) const override { return ets_.space->isInitialHandle(h); }
    const std::vector<int32_t>& successors(int32_t h) const override {
        return ets_.adjacency[static_cast<size_t>(h)];
    }
    bool atomValue(int32_t atomRef, int32_t node) const override {
        const EtsResolver::Entry& e = atoms_[static_cast<size_t>(atomRef)];
        if (e.marker >= 0) return node == e.marker;
        return ets_.env->hasLabel(ets_.space->stateOf(node), e.prop);
    }
    bool indist(int32_t a, int32_t b, const AgentTagSet& tags) const override {
        return ets_.space->indist(a, b, tags);
    }
    const std::vector<int32_t>& distGroup(const AgentTagSet& tags, int32_t node) const override {
        return ets_.space->distGroup(tags, node);
    }
    const std::vector<int32_t>& commonGroup(const AgentTagSet& tags, int32_t node) const override {
        return ets_.space->commonGroup(tags, node, shortcut_);
    }

  private:
    const Ets& ets_;
    const std::vector<EtsResolver::Entry>& atoms_;
    bool shortcut_;
};

}  // namespace

std::pair<std::shared_ptr<Ets>, FormulaPtr> reduce_to_ets(const Instance& instance,
                                                          const CheckOptions& opts) {
    const Environment& env = *instance.env;
    ProfileSpace profiles = enumerate_profiles(env, *instance.cls);
    uint64_t numProfiles = profiles.size();
    if (numProfiles == 0) throw InputError("empty strategy class");
    uint64_t ns = static_cast<uint64_t>(env.stateCount());
    if (numProfiles == UINT64_MAX || numProfiles > opts.etsStateBudget / std::max<uint64_t>(ns, 1))
        throw BudgetError("epistemic transition system states",
                          numProfiles == UINT64_MAX ? UINT64_MAX : numProfiles * ns,
                          opts.etsStateBudget);

    auto ets = std::make_shared<Ets>();
    ets->env = &env;
    ets->space = std::make_shared<GlobalSpace>(env, std::move(profiles), opts.workers);
    ets->stateCount = numProfiles * ns;

    // Materialize the transition relation over the full product; adjacency is
    // kept for the reachable part, which is what evaluation visits.
    ets->adjacency.resize(static_cast<size_t>(ets->space->admissibleCount()));
    std::vector<StateId> succs;
    for (uint64_t p = 0; p < numProfiles; ++p) {
        for (StateId s = 0; s < env.stateCount(); ++s) {
            ets->space->computeSuccessors(p, s, succs);
            ets->transitionCount += succs.size();
            int32_t h = ets->space->handleOf(p, s);
            if (h < 0) continue;
            auto& adj = ets->adjacency[static_cast<size_t>(h)];
            for (StateId t : succs) {
                int32_t ht = ets->space->handleOf(p, t);
                if (ht >= 0) adj.push_back(ht);
            }
        }
    }
    for (int32_t h : ets->space->allHandlesSorted())
        if (ets->space->isInitialHandle(h)) ets->initialHandles.push_back(h);

    FormulaPtr core = desugar(instance.formula);
    std::map<std::string, int32_t> gamma;
    for (const ContextBinding& b : instance.context) {
        auto idx = ets->space->profiles().indexOf(b.profile);
        if (!idx)
            throw InputError("context binding for '" + b.var +
                             "': profile is not in the strategy class");
        if (b.state < 0 || !ets->space->reachTest(*idx, b.state))
            throw InputError("context binding for '" + b.var +
                             "': state not reachable under the bound profile");
        gamma[b.var] = ets->space->handleOf(*idx, b.state);
    }
    Transformer tr{*ets, opts.formulaNodeBudget, 0};
    FormulaPtr transformed = tr.run(core, gamma);
    return {ets, transformed};
}

bool check_ets(const Ets& ets, const FormulaPtr& formula, const CheckOptions& opts,
               Statistics* stats) {
    FormulaPtr core = desugar(formula);
    Fragment fragment = classify_fragment(core);
    if (fragment == Fragment::ESLMinus || fragment == Fragment::FullESL)
        throw FragmentError("reduced system takes quantifier-free formulas");
    EtsResolver resolver(ets);
    Compiled cf = compile_formula(core, *ets.env, resolver, {});
    EtsModel model(ets, resolver.entries, opts.shortcutCommon);
    Statistics local;
    Statistics& st = stats ? *stats : local;
    st.statesExplored += static_cast<uint64_t>(ets.space->admissibleCount());
    detail::Engine engine(model, cf, opts, st, detail::EngineConfig{false, false});
    for (int32_t h : ets.initialHandles)
        if (!engine.evalRoot(h, {})) return false;
    return true;
}

}  // namespace esl
