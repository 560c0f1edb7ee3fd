#include "esl/checker.hpp"

#include <algorithm>
#include <cassert>

#include "esl/engine.hpp"
#include "esl/ets.hpp"

namespace esl {

const char* engine_name(EngineKind e) {
    switch (e) {
        case EngineKind::Auto: return "auto";
        case EngineKind::EslMinus: return "eslminus";
        case EngineKind::CtlStarK: return "ctlstark";
        case EngineKind::Full: return "full";
        case EngineKind::Reduction: return "reduction";
    }
    return "?";
}

EngineKind engine_by_name(std::string_view name) {
    if (name == "auto") return EngineKind::Auto;
    if (name == "eslminus") return EngineKind::EslMinus;
    if (name == "ctlstark") return EngineKind::CtlStarK;
    if (name == "full") return EngineKind::Full;
    if (name == "reduction") return EngineKind::Reduction;
    throw InputError("unknown engine '" + std::string(name) + "'");
}

namespace {

using detail::Engine;
using detail::EngineConfig;
using detail::ModelView;

// Atoms of a direct instance: environment labels plus strategy-derived atoms.
struct DirectAtom {
    PropId prop = -1;
    const StrategyAtom* strat = nullptr;
};

class DirectResolver final : public AtomResolver {
  public:
    explicit DirectResolver(const Environment& env) : env_(env) {}
    int32_t resolveAtom(const std::string& name) override {
        auto p = env_.props.find(name);
        if (!p) throw InputError("unknown proposition '" + name + "'");
        DirectAtom a;
        auto it = env_.strategyAtoms.find(*p);
        if (it != env_.strategyAtoms.end())
            a.strat = &it->second;
        else
            a.prop = *p;
        atoms.push_back(a);
        return static_cast<int32_t>(atoms.size() - 1);
    }
    std::vector<DirectAtom> atoms;

  private:
    const Environment& env_;
};

class DirectModel final : public ModelView {
  public:
    DirectModel(const GlobalSpace& space, const std::vector<DirectAtom>& atoms, bool shortcut)
        : space_(space), atoms_(atoms), shortcut_(shortcut) {}

    const std::vector<int32_t>& admissible() const override { return space_.allHandlesSorted(); }
    bool isInitial(int32_t h) const override { return space_.isInitialHandle(h); }
    const std::vector<int32_t>& successors(int32_t h) const override {
        auto it = succ_.find(h);
        if (it != succ_.end()) return it->second;
        std::vector<StateId> states;
        space_.computeSuccessors(space_.profileOf(h), space_.stateOf(h), states);
        std::vector<int32_t> out;
        out.reserve(states.size());
        for (StateId t : states) {
            int32_t ht = space_.handleOf(space_.profileOf(h), t);
            assert(ht >= 0);
            out.push_back(ht);
        }
        return succ_.emplace(h, std::move(out)).first->second;
    }
    bool atomValue(int32_t atomRef, int32_t h) const override {
        const DirectAtom& a = atoms_[static_cast<size_t>(atomRef)];
        if (a.strat) {
            int32_t idx = space_.stratIndexOf(h, a.strat->agent);
            return space_.profiles()
                       .pools[static_cast<size_t>(a.strat->agent)][static_cast<size_t>(idx)]
                       .enabled == a.strat->enabled;
        }
        return space_.env().hasLabel(space_.stateOf(h), a.prop);
    }
    bool indist(int32_t a, int32_t b, const AgentTagSet& tags) const override {
        return space_.indist(a, b, tags);
    }
    const std::vector<int32_t>& distGroup(const AgentTagSet& tags, int32_t h) const override {
        return space_.distGroup(tags, h);
    }
    const std::vector<int32_t>& commonGroup(const AgentTagSet& tags, int32_t h) const override {
        return space_.commonGroup(tags, h, shortcut_);
    }

  private:
    const GlobalSpace& space_;
    const std::vector<DirectAtom>& atoms_;
    bool shortcut_;
    mutable std::map<int32_t, std::vector<int32_t>> succ_;  // reference-stable
};

struct Prepared {
    FormulaPtr desugared;
    Fragment fragment = Fragment::CTLK;
    std::shared_ptr<GlobalSpace> space;
    std::unique_ptr<DirectResolver> resolver;
    std::unique_ptr<DirectModel> model;
    Compiled cf;
    std::vector<int32_t> gamma0;
    Statistics stats;
};

void requireValid(const Environment& env) {
    std::vector<Violation> violations = validate_environment(env);
    if (!violations.empty())
        throw InputError("invalid environment: " + violations.front().detail);
}

Prepared prepare(const Instance& instance, const CheckOptions& opts) {
    if (!instance.env || !instance.cls || !instance.formula)
        throw InputError("instance is incomplete");
    const Environment& env = *instance.env;
    requireValid(env);

    Prepared p;
    p.desugared = desugar(instance.formula);
    p.fragment = classify_fragment(p.desugared);

    ProfileSpace profiles = enumerate_profiles(env, *instance.cls);
    if (profiles.size() == 0) throw InputError("empty strategy class");
    p.space = std::make_shared<GlobalSpace>(env, std::move(profiles), opts.workers);
    p.stats.profilesEnumerated = p.space->profileCount();
    p.stats.admissibleStates = static_cast<uint64_t>(p.space->admissibleCount());
    p.stats.statesExplored = p.stats.admissibleStates;

    std::vector<std::string> contextVars;
    for (const ContextBinding& b : instance.context) {
        for (const auto& seen : contextVars)
            if (seen == b.var) throw InputError("variable '" + b.var + "' bound twice");
        auto idx = p.space->profiles().indexOf(b.profile);
        if (!idx)
            throw InputError("context binding for '" + b.var +
                             "': profile is not in the strategy class");
        if (b.state < 0 || b.state >= env.stateCount() || !p.space->reachTest(*idx, b.state))
            throw InputError("context binding for '" + b.var +
                             "': state not reachable under the bound profile");
        contextVars.push_back(b.var);
        p.gamma0.push_back(p.space->handleOf(*idx, b.state));
    }

    p.resolver = std::make_unique<DirectResolver>(env);
    p.cf = compile_formula(p.desugared, env, *p.resolver, contextVars);
    p.model = std::make_unique<DirectModel>(*p.space, p.resolver->atoms, opts.shortcutCommon);
    return p;
}

EngineKind resolveEngine(EngineKind requested, Fragment fragment) {
    if (requested != EngineKind::Auto) return requested;
    switch (fragment) {
        case Fragment::CTLK:
        case Fragment::ESLMinus:
            return EngineKind::EslMinus;
        case Fragment::CTLStarK:
            return EngineKind::CtlStarK;
        case Fragment::FullESL:
            return EngineKind::Full;
    }
    return EngineKind::Full;
}

EngineConfig configFor(EngineKind kind, const Prepared& p) {
    switch (kind) {
        case EngineKind::EslMinus:
            if (!p.cf.at(p.cf.root).shaped)
                throw FragmentError("state-recursive engine needs CTL-shaped temporal operators");
            return EngineConfig{true, true};
        case EngineKind::CtlStarK:
            if (p.fragment == Fragment::ESLMinus || p.fragment == Fragment::FullESL)
                throw FragmentError("quantifier construct in the quantifier-free engine");
            return EngineConfig{false, false};
        case EngineKind::Full:
            return EngineConfig{true, false};
        default:
            throw InputError("engine not valid here");
    }
}

std::optional<Witness> extractWitnessPrepared(Prepared& p, const CheckOptions& opts) {
    const FormulaPtr& f = p.desugared;
    Statistics scratch;
    auto materialize = [&](int32_t h, std::string var) {
        Witness w;
        w.var = std::move(var);
        w.state = p.space->stateOf(h);
        w.profile = p.space->profiles().materialize(p.space->profileOf(h));
        return w;
    };

    if (f->kind == FKind::Not && f->lhs->kind == FKind::DistKnow && f->lhs->tags.empty()) {
        // !D[] Z holds iff some admissible h refutes Z; h is the witness.
        Compiled sub = p.cf;
        sub.root = p.cf.at(p.cf.at(p.cf.root).a).a;
        Engine bodyEngine(*p.model, sub, opts, scratch, EngineConfig{true, false});
        for (int32_t h : p.space->allHandlesSorted())
            if (!bodyEngine.evalRoot(h, p.gamma0)) return materialize(h, "");
        return std::nullopt;
    }
    if (f->kind == FKind::Exists && is_state_formula(f)) {
        // A binding for the quantifier that verifies at every initial state.
        Compiled sub = p.cf;
        sub.root = p.cf.at(p.cf.root).a;
        Engine bodyEngine(*p.model, sub, opts, scratch, EngineConfig{true, false});
        std::vector<int32_t> gamma = p.gamma0;
        gamma.push_back(-1);  // the root binder takes the slot after the context
        for (int32_t h : p.space->allHandlesSorted()) {
            gamma.back() = h;
            bool ok = true;
            for (int32_t g : p.space->allHandlesSorted()) {
                if (!p.space->isInitialHandle(g)) continue;
                if (!bodyEngine.evalRoot(g, gamma)) {
                    ok = false;
                    break;
                }
            }
            if (ok) return materialize(h, f->text);
        }
        return std::nullopt;
    }
    throw InputError("witness extraction needs a top-level !D[]! or exists form");
}

}  // namespace

Verdict check(const Instance& instance, const CheckOptions& opts) {
    if (opts.engine == EngineKind::Reduction) {
        auto [ets, transformed] = reduce_to_ets(instance, opts);
        Verdict v;
        v.stats.engine = engine_name(EngineKind::Reduction);
        v.stats.profilesEnumerated = ets->space->profileCount();
        v.stats.admissibleStates = static_cast<uint64_t>(ets->space->admissibleCount());
        v.holds = check_ets(*ets, transformed, opts, &v.stats);
        if (opts.wantWitness && v.holds) v.witness = extract_witness(instance, opts);
        return v;
    }

    Prepared p = prepare(instance, opts);
    EngineKind kind = resolveEngine(opts.engine, p.fragment);
    EngineConfig cfg = configFor(kind, p);
    Verdict v;
    v.stats = p.stats;
    v.stats.engine = engine_name(kind);

    Engine engine(*p.model, p.cf, opts, v.stats, cfg);
    v.holds = true;
    for (int32_t h : p.space->allHandlesSorted()) {
        if (!p.space->isInitialHandle(h)) continue;
        if (!engine.evalRoot(h, p.gamma0)) {
            v.holds = false;
            break;
        }
    }
    if (opts.wantWitness && v.holds) v.witness = extractWitnessPrepared(p, opts);
    return v;
}

bool eval_at(const Instance& instance, StateId state, const StrategyProfile& profile,
             EngineKind engineKind, const CheckOptions& opts) {
    Prepared p = prepare(instance, opts);
    auto idx = p.space->profiles().indexOf(profile);
    if (!idx) throw InputError("profile is not in the strategy class");
    if (state < 0 || state >= instance.env->stateCount() || !p.space->reachTest(*idx, state))
        throw InputError("state not reachable under the profile: global state inadmissible");
    EngineKind kind = resolveEngine(engineKind, p.fragment);
    EngineConfig cfg = configFor(kind, p);
    Statistics stats;
    Engine engine(*p.model, p.cf, opts, stats, cfg);
    return engine.evalRoot(p.space->handleOf(*idx, state), p.gamma0);
}

bool holds_at_all_with_state(const Instance& instance, StateId state, EngineKind engineKind,
                             const CheckOptions& opts) {
    Prepared p = prepare(instance, opts);
    EngineKind kind = resolveEngine(engineKind, p.fragment);
    EngineConfig cfg = configFor(kind, p);
    Statistics stats;
    Engine engine(*p.model, p.cf, opts, stats, cfg);
    for (int32_t h : p.space->allHandlesSorted()) {
        if (p.space->stateOf(h) != state) continue;
        if (!engine.evalRoot(h, p.gamma0)) return false;
    }
    return true;
}

bool holds_at_profile(const Instance& instance, const StrategyProfile& profile,
                      EngineKind engineKind, const CheckOptions& opts) {
    Prepared p = prepare(instance, opts);
    auto idx = p.space->profiles().indexOf(profile);
    if (!idx) throw InputError("profile is not in the strategy class");
    EngineKind kind = resolveEngine(engineKind, p.fragment);
    EngineConfig cfg = configFor(kind, p);
    Statistics stats;
    Engine engine(*p.model, p.cf, opts, stats, cfg);
    std::optional<bool> verdict;
    for (int32_t h : p.space->allHandlesSorted()) {
        if (p.space->profileOf(h) != *idx) continue;
        bool v = engine.evalRoot(h, p.gamma0);
        if (verdict && *verdict != v)
            throw EslError("verdict varies across points with a fixed strategy");
        verdict = v;
    }
    if (!verdict) throw InputError("profile has no admissible points");
    return *verdict;
}

std::optional<Witness> extract_witness(const Instance& instance, const CheckOptions& opts) {
    Prepared p = prepare(instance, opts);
    std::optional<Witness> w = extractWitnessPrepared(p, opts);
    if (w) {
        // Re-check before emission: the witnessed body must verify.
        Instance probe = instance;
        if (p.desugared->kind == FKind::Exists) {
            probe.formula = p.desugared->lhs;
            probe.context.push_back(ContextBinding{w->var, w->state, w->profile});
            Verdict v = check(probe, CheckOptions{});
            if (!v.holds) throw EslError("witness failed its re-check");
        } else {
            probe.formula = Formula::notf(p.desugared->lhs->lhs);
            if (!eval_at(probe, w->state, w->profile, EngineKind::Auto, CheckOptions{}))
                throw EslError("witness failed its re-check");
        }
    }
    return w;
}

struct SingletonEvaluator::Impl {
    Environment env;
    std::shared_ptr<GlobalSpace> space;
    DirectResolver resolver;
    std::unique_ptr<DirectModel> model;
    CheckOptions opts;
    Statistics stats;
    std::vector<StateId> reachable;
    struct Entry {
        Compiled cf;
        std::unique_ptr<Engine> engine;
    };
    std::map<const Formula*, std::unique_ptr<Entry>> entries;

    Impl(const Environment& e, const StrategyProfile& profile) : env(e), resolver(env) {
        if (!profile.wellFormed(env)) throw InputError("malformed profile");
        ProfileSpace ps;
        ps.product = true;
        for (AgentId i = 0; i < env.agentCount(); ++i)
            ps.pools.push_back({profile.byAgent[static_cast<size_t>(i)]});
        space = std::make_shared<GlobalSpace>(env, std::move(ps));
        model = std::make_unique<DirectModel>(*space, resolver.atoms, true);
        for (StateId s = 0; s < env.stateCount(); ++s)
            if (space->reachTest(0, s)) reachable.push_back(s);
    }
};

SingletonEvaluator::SingletonEvaluator(const Environment& env, const StrategyProfile& profile)
    : impl_(std::make_shared<Impl>(env, profile)) {}

bool SingletonEvaluator::reachable(StateId s) const { return impl_->space->reachTest(0, s); }
const std::vector<StateId>& SingletonEvaluator::reachableStates() const {
    return impl_->reachable;
}

bool SingletonEvaluator::eval(StateId s, const FormulaPtr& f) {
    if (!reachable(s)) throw InputError("state not reachable under the profile");
    auto it = impl_->entries.find(f.get());
    if (it == impl_->entries.end()) {
        auto entry = std::make_unique<Impl::Entry>();
        entry->cf = compile_formula(desugar(f), impl_->env, impl_->resolver, {});
        entry->engine = std::make_unique<Engine>(*impl_->model, entry->cf, impl_->opts,
                                                 impl_->stats, EngineConfig{true, false});
        it = impl_->entries.emplace(f.get(), std::move(entry)).first;
    }
    return it->second->engine->evalRoot(impl_->space->handleOf(0, s), {});
}

bool ltl_forall_paths(const Environment& env, const StrategyProfile& profile, StateId state,
                      const FormulaPtr& pathFormula, const CheckOptions& opts) {
    FormulaPtr core = desugar(pathFormula);
    if (is_state_formula(core)) throw InputError("ltl_forall_paths expects a path formula");
    if (!profile.wellFormed(env)) throw InputError("malformed profile");
    if (state < 0 || state >= env.stateCount()) throw InputError("unknown state");
    Environment pinned = env;
    pinned.initial = {state};
    ProfileSpace space;
    space.product = true;
    for (AgentId i = 0; i < env.agentCount(); ++i)
        space.pools.push_back({profile.byAgent[static_cast<size_t>(i)]});
    auto gs = std::make_shared<GlobalSpace>(pinned, std::move(space));
    DirectResolver resolver(pinned);
    Compiled cf = compile_formula(core, pinned, resolver, {});
    DirectModel model(*gs, resolver.atoms, opts.shortcutCommon);
    Statistics stats;
    Engine engine(model, cf, opts, stats, EngineConfig{true, false});
    return engine.evalRoot(gs->handleOf(0, state), {});
}

}  // namespace esl
