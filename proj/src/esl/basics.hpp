#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace esl {

// ── Errors ──────────────────────────────────────────────────────────────────

struct EslError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text (formula, environment, table, ...).
struct ParseError : EslError {
    ParseError(const std::string& msg, int line = -1, int col = -1)
        : EslError(locate(msg, line, col)), line(line), col(col) {}
    int line;
    int col;

  private:
    static std::string locate(const std::string& msg, int line, int col) {
        std::string s = msg;
        if (line >= 0) s += " (line " + std::to_string(line) + ")";
        if (col >= 0) s += " (column " + std::to_string(col) + ")";
        return s;
    }
};

/// Semantically invalid request: unknown agent, unbound variable, bad class...
struct InputError : EslError {
    using EslError::EslError;
};

/// A deliberately bounded computation exceeded its configured budget.
struct BudgetError : EslError {
    BudgetError(const std::string& what, uint64_t requested, uint64_t limit)
        : EslError(what + ": needs " + std::to_string(requested) +
                   ", budget is " + std::to_string(limit)),
          requested(requested), limit(limit) {}
    uint64_t requested;
    uint64_t limit;
};

/// Formula lies outside the fragment an engine supports.
struct FragmentError : EslError {
    using EslError::EslError;
};

/// A knowledge-based program enables no action at a reachable state.
struct CoverageError : EslError {
    using EslError::EslError;
};

// ── Interning ───────────────────────────────────────────────────────────────

struct StringHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};
struct StringEq {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const noexcept { return a == b; }
};

/// Identifier table with stable integer handles.
class SymbolTable {
  public:
    int32_t intern(std::string_view name) {
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        int32_t id = static_cast<int32_t>(names_.size());
        names_.emplace_back(name);
        index_.emplace(names_.back(), id);
        return id;
    }
    std::optional<int32_t> find(std::string_view name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    const std::string& name(int32_t id) const { return names_.at(static_cast<size_t>(id)); }
    int32_t size() const { return static_cast<int32_t>(names_.size()); }
    bool empty() const { return names_.empty(); }

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int32_t, StringHash, StringEq> index_;
};

// ── Dynamic bitset ──────────────────────────────────────────────────────────

class Bitset {
  public:
    Bitset() = default;
    explicit Bitset(size_t n) : n_(n), words_((n + 63) / 64, 0) {}
    void set(size_t i) { words_[i >> 6] |= (uint64_t{1} << (i & 63)); }
    void clear(size_t i) { words_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
    bool test(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    size_t size() const { return n_; }
    size_t count() const {
        size_t c = 0;
        for (uint64_t w : words_) c += static_cast<size_t>(__builtin_popcountll(w));
        return c;
    }
    Bitset& operator|=(const Bitset& o) {
        for (size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    bool operator==(const Bitset&) const = default;

  private:
    size_t n_ = 0;
    std::vector<uint64_t> words_;
};

// ── Exact rationals for game utilities ──────────────────────────────────────

struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n) : num(n), den(1) {}
    Rational(int64_t n, int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw InputError("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    bool operator==(const Rational&) const = default;
    bool operator<(const Rational& o) const { return num * o.den < o.num * den; }
    bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
    static Rational parse(std::string_view s);
};

// FNV-1a, used for content digests in machine-readable output.
inline uint64_t fnv1a(std::string_view data) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline void hashCombine(size_t& seed, size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

}  // namespace esl
