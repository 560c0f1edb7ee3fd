#pragma once

#include "esl/checker.hpp"

namespace esl::qbf {

/// Closed quantified boolean formula: a quantifier prefix over x1..xn and a
/// propositional matrix. Normalized instances alternate strictly, start
/// existential, and have even length.
struct QbfInstance {
    std::vector<bool> isExists;          // prefix, outermost first
    std::vector<std::string> varNames;   // x1..xn
    FormulaPtr matrix;                   // atoms, negation, and/or only

    int n() const { return static_cast<int>(isExists.size()); }
};

/// "exists x1 forall x2 . (x1 | x2)".
QbfInstance parse_qbf(std::string_view text);
std::string render_qbf(const QbfInstance& q);

/// Restores the assumed shape without changing truth: a fresh leading
/// existential variable when the prefix starts universally, a fresh trailing
/// universal variable when the length is odd. Rejects prefixes that do not
/// alternate afterwards.
QbfInstance normalize(const QbfInstance& q);

/// Truth by recursion over assignments; guarded to 20 variables.
bool eval_qbf_oracle(const QbfInstance& q);

struct QbfReduction {
    Environment env;
    FormulaPtr formula;
    ClassPtr cls;  // locally uniform deterministic
};

/// The two-agent time-counting environment whose uniform deterministic
/// strategies encode assignments, plus the alternating knowledge formula that
/// is valid exactly when the instance is true.
QbfReduction qbf_to_instance(const QbfInstance& q);

}  // namespace esl::qbf
