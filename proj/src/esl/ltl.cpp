#include "esl/ltl.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace esl::ltl {

// ── Tableau construction ─────────────────────────────────────────────────────
//
// Classic expand-node algorithm. Each pre-state carries the sets New (yet to
// be decomposed), Old (decomposed obligations for "now") and Next (obligations
// for the successor). Finished pre-states with equal (Old, Next) are merged.

namespace {

struct PreState {
    std::set<int32_t> incoming;  // ids of predecessor states; -1 marks initial
    std::set<int32_t> news, olds, nexts;
};

struct Builder {
    const Arena& arena;
    size_t budget;
    // finished states, keyed by (olds, nexts)
    std::map<std::pair<std::set<int32_t>, std::set<int32_t>>, int32_t> index;
    std::vector<PreState> finished;

    bool contradicts(const std::set<int32_t>& olds, const Node& lit) const {
        for (int32_t o : olds) {
            const Node& n = arena.at(o);
            if (n.kind == Node::Lit && n.atom == lit.atom && n.neg != lit.neg) return true;
        }
        return false;
    }

    void expand(PreState node) {
        if (node.news.empty()) {
            auto key = std::make_pair(node.olds, node.nexts);
            auto it = index.find(key);
            if (it != index.end()) {
                auto& inc = finished[static_cast<size_t>(it->second)].incoming;
                inc.insert(node.incoming.begin(), node.incoming.end());
                return;
            }
            if (finished.size() >= budget)
                throw BudgetError("path automaton construction", finished.size() + 1, budget);
            int32_t id = static_cast<int32_t>(finished.size());
            index.emplace(key, id);
            finished.push_back(node);
            PreState succ;
            succ.incoming = {id};
            succ.news = node.nexts;
            expand(std::move(succ));
            return;
        }
        int32_t f = *node.news.begin();
        node.news.erase(node.news.begin());
        if (node.olds.count(f)) {
            expand(std::move(node));
            return;
        }
        const Node& n = arena.at(f);
        switch (n.kind) {
            case Node::FF:
                return;  // inconsistent branch
            case Node::TT:
                expand(std::move(node));
                return;
            case Node::Lit:
                if (contradicts(node.olds, n)) return;
                node.olds.insert(f);
                expand(std::move(node));
                return;
            case Node::And:
                node.olds.insert(f);
                if (!node.olds.count(n.a)) node.news.insert(n.a);
                if (!node.olds.count(n.b)) node.news.insert(n.b);
                expand(std::move(node));
                return;
            case Node::X:
                node.olds.insert(f);
                node.nexts.insert(n.a);
                expand(std::move(node));
                return;
            case Node::Or: {
                PreState left = node, right = node;
                left.olds.insert(f);
                right.olds.insert(f);
                if (!left.olds.count(n.a)) left.news.insert(n.a);
                if (!right.olds.count(n.b)) right.news.insert(n.b);
                expand(std::move(left));
                expand(std::move(right));
                return;
            }
            case Node::U: {
                PreState cont = node, done = node;
                cont.olds.insert(f);
                done.olds.insert(f);
                if (!cont.olds.count(n.a)) cont.news.insert(n.a);
                cont.nexts.insert(f);
                if (!done.olds.count(n.b)) done.news.insert(n.b);
                expand(std::move(cont));
                expand(std::move(done));
                return;
            }
            case Node::R: {
                PreState wait = node, rel = node;
                wait.olds.insert(f);
                rel.olds.insert(f);
                if (!wait.olds.count(n.b)) wait.news.insert(n.b);
                wait.nexts.insert(f);
                if (!rel.olds.count(n.a)) rel.news.insert(n.a);
                if (!rel.olds.count(n.b)) rel.news.insert(n.b);
                expand(std::move(wait));
                expand(std::move(rel));
                return;
            }
        }
    }
};

}  // namespace

Automaton build_automaton(const Arena& arena, int32_t root, size_t stateBudget) {
    Builder b{arena, stateBudget, {}, {}};
    PreState init;
    init.incoming = {-1};
    init.news = {root};
    b.expand(std::move(init));

    Automaton out;
    out.states.resize(b.finished.size());
    for (size_t q = 0; q < b.finished.size(); ++q) {
        const PreState& pre = b.finished[q];
        Automaton::State& st = out.states[q];
        st.initial = pre.incoming.count(-1) > 0;
        for (int32_t o : pre.olds) {
            const Node& n = arena.at(o);
            if (n.kind == Node::Lit) st.lits.emplace_back(n.atom, n.neg);
        }
        for (int32_t p : pre.incoming)
            if (p >= 0) out.states[static_cast<size_t>(p)].succs.push_back(static_cast<int32_t>(q));
    }
    // One acceptance set per Until in the closure: states where the Until is
    // either discharged (right operand holds) or not pending.
    std::set<int32_t> untils;
    for (const PreState& pre : b.finished)
        for (int32_t o : pre.olds)
            if (arena.at(o).kind == Node::U) untils.insert(o);
    for (int32_t u : untils) {
        std::vector<uint8_t> inSet(b.finished.size(), 0);
        for (size_t q = 0; q < b.finished.size(); ++q) {
            const PreState& pre = b.finished[q];
            bool pending = pre.olds.count(u) && !pre.olds.count(arena.at(u).b);
            inSet[q] = pending ? 0 : 1;
        }
        out.acceptSets.push_back(std::move(inSet));
    }
    return out;
}

// ── Product emptiness, nested DFS ───────────────────────────────────────────

namespace {

struct ProductKey {
    int32_t g, q, c;
    bool operator==(const ProductKey&) const = default;
};
struct ProductHash {
    size_t operator()(const ProductKey& k) const {
        size_t h = std::hash<int64_t>{}((int64_t(k.g) << 28) ^ (int64_t(k.q) << 8) ^ k.c);
        return h;
    }
};

struct Search {
    const Automaton& aut;
    const SuccFn& succ;
    const AtomFn& atomTrue;
    int32_t nsets;
    uint64_t visited = 0;
    std::unordered_set<ProductKey, ProductHash> blue, red;

    bool litsHold(int32_t q, int32_t g) const {
        for (auto [atom, neg] : aut.states[static_cast<size_t>(q)].lits)
            if (atomTrue(atom, g) == neg) return false;
        return true;
    }
    int32_t stepCounter(int32_t c, int32_t q) const {
        int32_t n = (c == nsets) ? 0 : c;
        if (n < nsets && aut.acceptSets[static_cast<size_t>(n)][static_cast<size_t>(q)]) ++n;
        return n;
    }
    bool accepting(const ProductKey& k) const { return k.c == nsets; }

    void productSuccs(const ProductKey& k, std::vector<ProductKey>& out) const {
        out.clear();
        for (int32_t g2 : succ(k.g)) {
            for (int32_t q2 : aut.states[static_cast<size_t>(k.q)].succs) {
                if (!litsHold(q2, g2)) continue;
                out.push_back(ProductKey{g2, q2, stepCounter(k.c, q2)});
            }
        }
    }

    // Red search: is `seed` on a cycle?
    bool redDfs(const ProductKey& seed) {
        std::vector<ProductKey> stack{seed};
        std::vector<ProductKey> succs;
        while (!stack.empty()) {
            ProductKey k = stack.back();
            stack.pop_back();
            productSuccs(k, succs);
            for (const ProductKey& n : succs) {
                if (n == seed) return true;
                if (red.insert(n).second) stack.push_back(n);
            }
        }
        return false;
    }

    bool blueDfs(const ProductKey& start) {
        struct Frame {
            ProductKey k;
            std::vector<ProductKey> succs;
            size_t next = 0;
        };
        std::vector<Frame> stack;
        if (!blue.insert(start).second) return false;
        ++visited;
        stack.push_back(Frame{start, {}, 0});
        productSuccs(start, stack.back().succs);
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.next < f.succs.size()) {
                ProductKey n = f.succs[f.next++];
                if (blue.insert(n).second) {
                    ++visited;
                    Frame nf{n, {}, 0};
                    productSuccs(n, nf.succs);
                    stack.push_back(std::move(nf));
                }
            } else {
                if (accepting(f.k) && !red.count(f.k)) {
                    if (redDfs(f.k)) return true;
                }
                stack.pop_back();
            }
        }
        return false;
    }
};

}  // namespace

bool exists_accepting_path(const Automaton& aut, int32_t start, const SuccFn& succ,
                           const AtomFn& atomTrue, uint64_t* statesVisited) {
    Search search{aut, succ, atomTrue, static_cast<int32_t>(aut.acceptSets.size()), 0, {}, {}};
    bool found = false;
    for (int32_t q = 0; q < static_cast<int32_t>(aut.states.size()) && !found; ++q) {
        if (!aut.states[static_cast<size_t>(q)].initial) continue;
        if (!search.litsHold(q, start)) continue;
        ProductKey k{start, q, search.stepCounter(0, q)};
        // The very first counter step treats the entry state like a move.
        if (search.blueDfs(k)) found = true;
    }
    if (statesVisited) *statesVisited += search.visited;
    return found;
}

}  // namespace esl::ltl
