#include "esl/global_space.hpp"

#include <algorithm>
#include <thread>

namespace esl {

std::vector<StateId> successors(const Environment& env, StateId state,
                                const StrategyProfile& profile) {
    std::vector<StateId> out;
    int nj = env.jointCount();
    std::vector<ActionId> acts;
    for (int ja = 0; ja < nj; ++ja) {
        env.jointDecode(ja, acts);
        bool enabled = true;
        for (AgentId i = 0; i < env.agentCount() && enabled; ++i)
            enabled = (profile.byAgent[static_cast<size_t>(i)].enabled[static_cast<size_t>(state)] >>
                       acts[static_cast<size_t>(i)]) & 1;
        if (!enabled) continue;
        for (StateId t : env.trans[static_cast<size_t>(state)][static_cast<size_t>(ja)]) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

// Reach for one profile given as pool indices, written into `words`.
void reachInto(const Environment& env, const ProfileSpace& space,
               const std::vector<int32_t>& tuple, uint64_t* words, size_t nwords) {
    std::fill(words, words + nwords, 0);
    std::vector<StateId> stack(env.initial.begin(), env.initial.end());
    for (StateId s : stack) words[static_cast<size_t>(s) >> 6] |= (uint64_t{1} << (s & 63));
    int nj = env.jointCount();
    std::vector<ActionId> acts;
    while (!stack.empty()) {
        StateId s = stack.back();
        stack.pop_back();
        for (int ja = 0; ja < nj; ++ja) {
            env.jointDecode(ja, acts);
            bool enabled = true;
            for (AgentId i = 0; i < env.agentCount() && enabled; ++i) {
                const IndividualStrategy& strat =
                    space.pools[static_cast<size_t>(i)][static_cast<size_t>(tuple[static_cast<size_t>(i)])];
                enabled = (strat.enabled[static_cast<size_t>(s)] >> acts[static_cast<size_t>(i)]) & 1;
            }
            if (!enabled) continue;
            for (StateId t : env.trans[static_cast<size_t>(s)][static_cast<size_t>(ja)]) {
                uint64_t& w = words[static_cast<size_t>(t) >> 6];
                uint64_t bit = uint64_t{1} << (t & 63);
                if (!(w & bit)) {
                    w |= bit;
                    stack.push_back(t);
                }
            }
        }
    }
}

constexpr uint64_t kSpaceCap = 50'000'000;  // (state, profile) pairs

}  // namespace

Bitset reach(const Environment& env, const StrategyProfile& profile) {
    Bitset out(static_cast<size_t>(env.stateCount()));
    std::vector<StateId> stack(env.initial.begin(), env.initial.end());
    for (StateId s : stack) out.set(static_cast<size_t>(s));
    while (!stack.empty()) {
        StateId s = stack.back();
        stack.pop_back();
        for (StateId t : successors(env, s, profile)) {
            if (!out.test(static_cast<size_t>(t))) {
                out.set(static_cast<size_t>(t));
                stack.push_back(t);
            }
        }
    }
    return out;
}

GlobalSpace::GlobalSpace(const Environment& env, ProfileSpace space, int workers)
    : env_(&env), space_(std::move(space)) {
    numProfiles_ = space_.size();
    size_t ns = static_cast<size_t>(env.stateCount());
    if (numProfiles_ > kSpaceCap / std::max<size_t>(ns, 1))
        throw BudgetError("strategy space too large to materialize",
                          numProfiles_ == UINT64_MAX ? UINT64_MAX : numProfiles_ * ns, kSpaceCap);
    words_ = (ns + 63) / 64;
    reachWords_.assign(numProfiles_ * words_, 0);

    auto worker = [&](uint64_t lo, uint64_t hi) {
        std::vector<int32_t> tuple;
        for (uint64_t p = lo; p < hi; ++p) {
            space_.decode(p, tuple);
            reachInto(env, space_, tuple, reachWords_.data() + p * words_, words_);
        }
    };
    if (workers > 1 && numProfiles_ > 64) {
        std::vector<std::thread> pool;
        uint64_t chunk = (numProfiles_ + static_cast<uint64_t>(workers) - 1) / static_cast<uint64_t>(workers);
        for (int w = 0; w < workers; ++w) {
            uint64_t lo = static_cast<uint64_t>(w) * chunk;
            if (lo >= numProfiles_) break;
            pool.emplace_back(worker, lo, std::min(numProfiles_, lo + chunk));
        }
        for (auto& t : pool) t.join();
    } else {
        worker(0, numProfiles_);
    }

    pairHandle_.assign(numProfiles_ * ns, -1);
    realizableState_.assign(ns, 0);
    for (uint64_t p = 0; p < numProfiles_; ++p) {
        for (size_t s = 0; s < ns; ++s) {
            if ((reachWords_[p * words_ + (s >> 6)] >> (s & 63)) & 1) {
                pairHandle_[p * ns + s] = static_cast<int32_t>(handleState_.size());
                handleState_.push_back(static_cast<StateId>(s));
                handleProfile_.push_back(p);
                realizableState_[s] = 1;
            }
        }
    }
    allHandles_.resize(handleState_.size());
    for (size_t i = 0; i < allHandles_.size(); ++i) allHandles_[i] = static_cast<int32_t>(i);
}

void GlobalSpace::computeSuccessors(uint64_t profileIdx, StateId s,
                                    std::vector<StateId>& out) const {
    out.clear();
    int nj = env_->jointCount();
    std::vector<ActionId> acts;
    for (int ja = 0; ja < nj; ++ja) {
        env_->jointDecode(ja, acts);
        bool enabled = true;
        for (AgentId i = 0; i < env_->agentCount() && enabled; ++i) {
            const IndividualStrategy& strat =
                space_.pools[static_cast<size_t>(i)][static_cast<size_t>(space_.poolIndex(profileIdx, i))];
            enabled = (strat.enabled[static_cast<size_t>(s)] >> acts[static_cast<size_t>(i)]) & 1;
        }
        if (!enabled) continue;
        for (StateId t : env_->trans[static_cast<size_t>(s)][static_cast<size_t>(ja)]) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

bool GlobalSpace::indist(int32_t g, int32_t h, const AgentTagSet& tags) const {
    if (tags.e && stateOf(g) != stateOf(h)) return false;
    for (uint32_t m = tags.base; m; m &= m - 1) {
        AgentId i = __builtin_ctz(m);
        if (obsOf(g, i) != obsOf(h, i)) return false;
    }
    for (uint32_t m = tags.strat; m; m &= m - 1) {
        AgentId i = __builtin_ctz(m);
        if (stratIndexOf(g, i) != stratIndexOf(h, i)) return false;
    }
    return true;
}

const GlobalSpace::GroupIndex& GlobalSpace::groupIndex(const AgentTagSet& tags) const {
    auto it = groups_.find(tags.key());
    if (it != groups_.end()) return it->second;
    GroupIndex idx;
    idx.bucketOf.resize(handleState_.size());
    std::map<std::vector<int32_t>, int32_t> byKey;
    std::vector<int32_t> key;
    for (int32_t h = 0; h < admissibleCount(); ++h) {
        key.clear();
        if (tags.e) key.push_back(stateOf(h));
        for (uint32_t m = tags.base; m; m &= m - 1) key.push_back(obsOf(h, __builtin_ctz(m)));
        for (uint32_t m = tags.strat; m; m &= m - 1) key.push_back(stratIndexOf(h, __builtin_ctz(m)));
        auto [pos, fresh] = byKey.emplace(key, static_cast<int32_t>(idx.buckets.size()));
        if (fresh) idx.buckets.emplace_back();
        idx.bucketOf[static_cast<size_t>(h)] = pos->second;
        idx.buckets[static_cast<size_t>(pos->second)].push_back(h);
    }
    return groups_.emplace(tags.key(), std::move(idx)).first->second;
}

const std::vector<int32_t>& GlobalSpace::distGroup(const AgentTagSet& tags, int32_t g) const {
    const GroupIndex& idx = groupIndex(tags);
    return idx.buckets[static_cast<size_t>(idx.bucketOf[static_cast<size_t>(g)])];
}

const GlobalSpace::CommonIndex& GlobalSpace::commonIndex(const AgentTagSet& tags) const {
    auto it = commons_.find(tags.key());
    if (it != commons_.end()) return it->second;
    CommonIndex idx;
    idx.classOf.resize(handleState_.size());
    size_t n = handleState_.size();

    if (tags.empty()) {
        // Identity closure.
        idx.members.resize(n);
        for (int32_t h = 0; h < static_cast<int32_t>(n); ++h) {
            idx.classOf[static_cast<size_t>(h)] = h;
            idx.members[static_cast<size_t>(h)] = {h};
        }
    } else if (tags.strat == 0) {
        // Base tags only (the e tag contributes identity steps): connected
        // components of realizable states under shared-observation edges.
        // A step may change the strategy component freely, so the closure is
        // every admissible pairing of a component state with any profile.
        size_t ns = static_cast<size_t>(env_->stateCount());
        std::vector<int32_t> comp(ns);
        for (size_t s = 0; s < ns; ++s) comp[s] = static_cast<int32_t>(s);
        std::function<int32_t(int32_t)> find = [&](int32_t x) {
            while (comp[static_cast<size_t>(x)] != x) {
                comp[static_cast<size_t>(x)] = comp[static_cast<size_t>(comp[static_cast<size_t>(x)])];
                x = comp[static_cast<size_t>(x)];
            }
            return x;
        };
        auto unite = [&](int32_t a, int32_t b) { comp[static_cast<size_t>(find(a))] = find(b); };
        for (uint32_t m = tags.base; m; m &= m - 1) {
            AgentId i = __builtin_ctz(m);
            std::unordered_map<ObsId, StateId> rep;
            for (size_t s = 0; s < ns; ++s) {
                if (!realizableState_[s]) continue;
                ObsId o = env_->obs[static_cast<size_t>(i)][s];
                auto [pos, fresh] = rep.emplace(o, static_cast<StateId>(s));
                if (!fresh) unite(static_cast<int32_t>(s), pos->second);
            }
        }
        std::map<int32_t, int32_t> classIds;
        for (int32_t h = 0; h < static_cast<int32_t>(n); ++h) {
            int32_t root = find(stateOf(h));
            auto [pos, fresh] = classIds.emplace(root, static_cast<int32_t>(idx.members.size()));
            if (fresh) idx.members.emplace_back();
            idx.classOf[static_cast<size_t>(h)] = pos->second;
            idx.members[static_cast<size_t>(pos->second)].push_back(h);
        }
    } else if (!tags.e && tags.base == 0 && __builtin_popcount(tags.strat) == 1) {
        // One strategic tag: that agent's strategy is pinned, all else free.
        AgentId i = __builtin_ctz(tags.strat);
        std::map<int32_t, int32_t> classIds;
        for (int32_t h = 0; h < static_cast<int32_t>(n); ++h) {
            auto [pos, fresh] = classIds.emplace(stratIndexOf(h, i), static_cast<int32_t>(idx.members.size()));
            if (fresh) idx.members.emplace_back();
            idx.classOf[static_cast<size_t>(h)] = pos->second;
            idx.members[static_cast<size_t>(pos->second)].push_back(h);
        }
    } else {
        // At least one strategic tag plus another tag, or two strategic tags:
        // the closure is universal on admissible states. The two/three-step
        // witness chains route through an initial state, which is reachable
        // under every profile.
        idx.members.resize(1);
        idx.members[0] = allHandles_;
        std::fill(idx.classOf.begin(), idx.classOf.end(), 0);
    }
    return commons_.emplace(tags.key(), std::move(idx)).first->second;
}

std::vector<int32_t> GlobalSpace::commonReachableBfs(int32_t g, const AgentTagSet& tags) const {
    std::vector<uint8_t> seen(handleState_.size(), 0);
    std::vector<int32_t> frontier{g}, out{g};
    seen[static_cast<size_t>(g)] = 1;
    // Single-tag relations; one bucket expansion covers a whole equivalence
    // class, so each (tag, bucket) pair is expanded at most once.
    std::vector<AgentTagSet> singles;
    if (tags.e) singles.push_back(AgentTagSet{true, 0, 0});
    for (uint32_t m = tags.base; m; m &= m - 1)
        singles.push_back(AgentTagSet{false, uint32_t{1} << __builtin_ctz(m), 0});
    for (uint32_t m = tags.strat; m; m &= m - 1)
        singles.push_back(AgentTagSet{false, 0, uint32_t{1} << __builtin_ctz(m)});
    std::vector<std::vector<uint8_t>> expanded(singles.size());
    for (size_t t = 0; t < singles.size(); ++t)
        expanded[t].assign(groupIndex(singles[t]).buckets.size(), 0);
    while (!frontier.empty()) {
        int32_t h = frontier.back();
        frontier.pop_back();
        for (size_t t = 0; t < singles.size(); ++t) {
            const GroupIndex& gi = groupIndex(singles[t]);
            int32_t b = gi.bucketOf[static_cast<size_t>(h)];
            if (expanded[t][static_cast<size_t>(b)]) continue;
            expanded[t][static_cast<size_t>(b)] = 1;
            for (int32_t m : gi.buckets[static_cast<size_t>(b)]) {
                if (!seen[static_cast<size_t>(m)]) {
                    seen[static_cast<size_t>(m)] = 1;
                    out.push_back(m);
                    frontier.push_back(m);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int32_t> GlobalSpace::commonReachable(int32_t g, const AgentTagSet& tags,
                                                  bool shortcut) const {
    if (tags.empty()) return {g};
    if (shortcut && space_.product) {
        const CommonIndex& idx = commonIndex(tags);
        return idx.members[static_cast<size_t>(idx.classOf[static_cast<size_t>(g)])];
    }
    return commonReachableBfs(g, tags);
}

const std::vector<int32_t>& GlobalSpace::commonGroup(const AgentTagSet& tags, int32_t g,
                                                     bool shortcut) const {
    if (shortcut && space_.product) {
        const CommonIndex& idx = commonIndex(tags);
        return idx.members[static_cast<size_t>(idx.classOf[static_cast<size_t>(g)])];
    }
    auto& perTag = bfsCache_[tags.key()];
    auto it = perTag.find(g);
    if (it == perTag.end()) it = perTag.emplace(g, commonReachableBfs(g, tags)).first;
    return it->second;
}

}  // namespace esl
