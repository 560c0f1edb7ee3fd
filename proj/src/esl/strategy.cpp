#include "esl/strategy.hpp"

#include <algorithm>

namespace esl {

bool IndividualStrategy::uniformFor(const Environment& env, AgentId agent) const {
    const auto& o = env.obs[static_cast<size_t>(agent)];
    std::unordered_map<ObsId, ActionSet> byClass;
    for (StateId s = 0; s < env.stateCount(); ++s) {
        auto [it, fresh] = byClass.emplace(o[static_cast<size_t>(s)], enabled[static_cast<size_t>(s)]);
        if (!fresh && it->second != enabled[static_cast<size_t>(s)]) return false;
    }
    return true;
}

bool IndividualStrategy::wellFormed(const Environment& env, AgentId agent) const {
    if (enabled.size() != static_cast<size_t>(env.stateCount())) return false;
    ActionSet all = (ActionSet{1} << env.actionCount(agent)) - 1;
    for (ActionSet m : enabled)
        if (m == 0 || (m & ~all)) return false;
    return true;
}

bool StrategyProfile::wellFormed(const Environment& env) const {
    if (byAgent.size() != static_cast<size_t>(env.agentCount())) return false;
    for (AgentId i = 0; i < env.agentCount(); ++i)
        if (!byAgent[static_cast<size_t>(i)].wellFormed(env, i)) return false;
    return true;
}

IndividualStrategy random_strategy(const Environment& env, AgentId agent) {
    ActionSet all = (ActionSet{1} << env.actionCount(agent)) - 1;
    return IndividualStrategy{std::vector<ActionSet>(static_cast<size_t>(env.stateCount()), all)};
}

StrategyProfile complete_group_strategy(
    const Environment& env,
    const std::vector<std::pair<AgentId, IndividualStrategy>>& group) {
    StrategyProfile out;
    out.byAgent.resize(static_cast<size_t>(env.agentCount()));
    std::vector<bool> covered(static_cast<size_t>(env.agentCount()), false);
    for (const auto& [agent, strat] : group) {
        if (agent < 0 || agent >= env.agentCount())
            throw InputError("group mentions unknown agent #" + std::to_string(agent));
        out.byAgent[static_cast<size_t>(agent)] = strat;
        covered[static_cast<size_t>(agent)] = true;
    }
    for (AgentId i = 0; i < env.agentCount(); ++i)
        if (!covered[static_cast<size_t>(i)]) out.byAgent[static_cast<size_t>(i)] = random_strategy(env, i);
    return out;
}

// ── StrategyClass ───────────────────────────────────────────────────────────

ClassPtr StrategyClass::all() {
    return ClassPtr(new StrategyClass(ClassKind::All, nullptr, nullptr, "all"));
}
ClassPtr StrategyClass::deterministic() {
    return ClassPtr(new StrategyClass(ClassKind::Deterministic, nullptr, nullptr, "det"));
}
ClassPtr StrategyClass::locallyUniform() {
    return ClassPtr(new StrategyClass(ClassKind::LocallyUniform, nullptr, nullptr, "unif"));
}
ClassPtr StrategyClass::locallyUniformDeterministic() {
    return ClassPtr(new StrategyClass(ClassKind::LocallyUniformDeterministic, nullptr, nullptr,
                                      "unifdet"));
}
ClassPtr StrategyClass::atelCompletion(ClassPtr inner) {
    if (!inner) throw InputError("completion class needs an inner class");
    std::string name = "comp:" + inner->name();
    return ClassPtr(new StrategyClass(ClassKind::AtelCompletion, std::move(inner), nullptr, name));
}
ClassPtr StrategyClass::custom(ClassPtr base, Predicate pred, std::string name) {
    return ClassPtr(new StrategyClass(ClassKind::Custom, std::move(base), std::move(pred),
                                      std::move(name)));
}

ClassPtr StrategyClass::byName(std::string_view name) {
    if (name == "all") return all();
    if (name == "det") return deterministic();
    if (name == "unif") return locallyUniform();
    if (name == "unifdet") return locallyUniformDeterministic();
    if (name.rfind("comp:", 0) == 0) return atelCompletion(byName(name.substr(5)));
    throw InputError("unknown strategy class '" + std::string(name) + "'");
}

bool StrategyClass::containsIndividual(const Environment& env, AgentId agent,
                                       const IndividualStrategy& s) const {
    switch (kind_) {
        case ClassKind::All: return true;
        case ClassKind::Deterministic: return s.deterministic();
        case ClassKind::LocallyUniform: return s.uniformFor(env, agent);
        case ClassKind::LocallyUniformDeterministic:
            return s.deterministic() && s.uniformFor(env, agent);
        case ClassKind::AtelCompletion:
            return s == random_strategy(env, agent) || inner_->containsIndividual(env, agent, s);
        case ClassKind::Custom:
            throw InputError("custom classes have no per-agent membership");
    }
    return false;
}

bool StrategyClass::contains(const Environment& env, const StrategyProfile& profile) const {
    if (kind_ == ClassKind::Custom) {
        if (inner_ && !inner_->contains(env, profile)) return false;
        return pred_(env, profile);
    }
    for (AgentId i = 0; i < env.agentCount(); ++i)
        if (!containsIndividual(env, i, profile.byAgent[static_cast<size_t>(i)])) return false;
    return true;
}

bool profile_in_class(const Environment& env, const StrategyProfile& profile,
                      const StrategyClass& cls) {
    return cls.contains(env, profile);
}

// ── Enumeration ─────────────────────────────────────────────────────────────

namespace {

// All nonempty action subsets, singletons only when det, in mask order.
std::vector<ActionSet> cellChoices(int actionCount, bool det) {
    std::vector<ActionSet> out;
    ActionSet limit = ActionSet{1} << actionCount;
    for (ActionSet m = 1; m < limit; ++m)
        if (!det || __builtin_popcount(m) == 1) out.push_back(m);
    return out;
}

// Odometer over per-cell choices; `cells` maps each state to its cell.
std::vector<IndividualStrategy> enumerateByCells(const Environment& env,
                                                 const std::vector<int>& cells, int numCells,
                                                 bool det, AgentId agent) {
    std::vector<ActionSet> choices = cellChoices(env.actionCount(agent), det);
    std::vector<size_t> idx(static_cast<size_t>(numCells), 0);
    std::vector<IndividualStrategy> out;
    while (true) {
        IndividualStrategy s;
        s.enabled.resize(static_cast<size_t>(env.stateCount()));
        for (StateId st = 0; st < env.stateCount(); ++st)
            s.enabled[static_cast<size_t>(st)] = choices[idx[static_cast<size_t>(cells[static_cast<size_t>(st)])]];
        out.push_back(std::move(s));
        int pos = numCells - 1;
        while (pos >= 0) {
            if (++idx[static_cast<size_t>(pos)] < choices.size()) break;
            idx[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

std::vector<IndividualStrategy> enumerateIndividual(const Environment& env, AgentId agent,
                                                    const StrategyClass& cls);

std::vector<IndividualStrategy> enumerateIndividual(const Environment& env, AgentId agent,
                                                    const StrategyClass& cls) {
    switch (cls.kind()) {
        case ClassKind::All:
        case ClassKind::Deterministic: {
            std::vector<int> cells(static_cast<size_t>(env.stateCount()));
            for (StateId s = 0; s < env.stateCount(); ++s) cells[static_cast<size_t>(s)] = s;
            return enumerateByCells(env, cells, env.stateCount(),
                                    cls.kind() == ClassKind::Deterministic, agent);
        }
        case ClassKind::LocallyUniform:
        case ClassKind::LocallyUniformDeterministic: {
            // Cells are the observation classes of this agent.
            std::vector<int> cells(static_cast<size_t>(env.stateCount()));
            std::unordered_map<ObsId, int> classOf;
            for (StateId s = 0; s < env.stateCount(); ++s) {
                ObsId o = env.obs[static_cast<size_t>(agent)][static_cast<size_t>(s)];
                auto [it, fresh] = classOf.emplace(o, static_cast<int>(classOf.size()));
                cells[static_cast<size_t>(s)] = it->second;
            }
            return enumerateByCells(env, cells, static_cast<int>(classOf.size()),
                                    cls.kind() == ClassKind::LocallyUniformDeterministic, agent);
        }
        case ClassKind::AtelCompletion: {
            std::vector<IndividualStrategy> base = enumerateIndividual(env, agent, *cls.inner());
            IndividualStrategy rnd = random_strategy(env, agent);
            if (std::find(base.begin(), base.end(), rnd) == base.end()) base.push_back(rnd);
            return base;
        }
        case ClassKind::Custom:
            throw InputError("custom classes cannot be enumerated per agent");
    }
    return {};
}

}  // namespace

uint64_t ProfileSpace::size() const {
    if (!product) return tuples.size();
    uint64_t n = 1;
    for (const auto& pool : pools) {
        if (pool.empty()) return 0;
        // Saturate rather than overflow; callers budget-check against this.
        if (n > UINT64_MAX / pool.size()) return UINT64_MAX;
        n *= pool.size();
    }
    return n;
}

void ProfileSpace::decode(uint64_t idx, std::vector<int32_t>& out) const {
    out.resize(pools.size());
    if (!product) {
        out = tuples[static_cast<size_t>(idx)];
        return;
    }
    for (size_t i = 0; i < pools.size(); ++i) {
        uint64_t n = pools[i].size();
        out[i] = static_cast<int32_t>(idx % n);
        idx /= n;
    }
}

int32_t ProfileSpace::poolIndex(uint64_t idx, AgentId agent) const {
    if (!product) return tuples[static_cast<size_t>(idx)][static_cast<size_t>(agent)];
    for (AgentId i = 0; i < agent; ++i) idx /= pools[static_cast<size_t>(i)].size();
    return static_cast<int32_t>(idx % pools[static_cast<size_t>(agent)].size());
}

StrategyProfile ProfileSpace::materialize(uint64_t idx) const {
    std::vector<int32_t> t;
    decode(idx, t);
    StrategyProfile p;
    p.byAgent.reserve(pools.size());
    for (size_t i = 0; i < pools.size(); ++i) p.byAgent.push_back(pools[i][static_cast<size_t>(t[i])]);
    return p;
}

std::optional<uint64_t> ProfileSpace::indexOf(const StrategyProfile& p) const {
    if (p.byAgent.size() != pools.size()) return std::nullopt;
    std::vector<int32_t> t(pools.size());
    for (size_t i = 0; i < pools.size(); ++i) {
        auto it = std::find(pools[i].begin(), pools[i].end(), p.byAgent[i]);
        if (it == pools[i].end()) return std::nullopt;
        t[i] = static_cast<int32_t>(it - pools[i].begin());
    }
    if (!product) {
        auto it = std::find(tuples.begin(), tuples.end(), t);
        if (it == tuples.end()) return std::nullopt;
        return static_cast<uint64_t>(it - tuples.begin());
    }
    uint64_t idx = 0, stride = 1;
    for (size_t i = 0; i < pools.size(); ++i) {
        idx += static_cast<uint64_t>(t[i]) * stride;
        stride *= pools[i].size();
    }
    return idx;
}

std::vector<IndividualStrategy> enumerate_individual_strategies(const Environment& env,
                                                                AgentId agent,
                                                                const StrategyClass& cls) {
    return enumerateIndividual(env, agent, cls);
}

ProfileSpace enumerate_profiles(const Environment& env, const StrategyClass& cls) {
    ProfileSpace out;
    if (cls.kind() == ClassKind::Custom) {
        if (!cls.inner())
            throw InputError("custom class '" + cls.name() + "' has no enumerable base class");
        ProfileSpace base = enumerate_profiles(env, *cls.inner());
        out.pools = base.pools;
        out.product = false;
        uint64_t n = base.size();
        std::vector<int32_t> t;
        for (uint64_t i = 0; i < n; ++i) {
            StrategyProfile p = base.materialize(i);
            if (cls.contains(env, p)) {
                base.decode(i, t);
                out.tuples.push_back(t);
            }
        }
        return out;
    }
    out.product = true;
    for (AgentId i = 0; i < env.agentCount(); ++i)
        out.pools.push_back(enumerateIndividual(env, i, cls));
    return out;
}

}  // namespace esl
