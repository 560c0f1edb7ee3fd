#pragma once

#include "esl/checker.hpp"

namespace esl::game {

/// Two-player normal-form game; utilities are exact rationals, row-major over
/// (player 0 action, player 1 action).
struct NormalFormGame {
    std::vector<std::string> actions0, actions1;
    std::vector<Rational> util0, util1;

    const Rational& u(int player, int a, int b) const {
        size_t idx = static_cast<size_t>(a) * actions1.size() + static_cast<size_t>(b);
        return player == 0 ? util0[idx] : util1[idx];
    }
    /// Distinct utility values of one player, ascending.
    std::vector<Rational> values(int player) const;
};

/// Text format: action lists plus the two payoff matrices row-major.
NormalFormGame parse_game(std::string_view text);
std::string render_game(const NormalFormGame& g);

/// One initial state, one absorbing outcome state per joint action, utility
/// atoms at the outcomes, constant observations; under locally uniform
/// deterministic profiles the strategies are exactly the pure pairs.
struct GameEncoding {
    Environment env;
    ClassPtr cls;
    StateId initState = -1;
    std::vector<std::vector<StateId>> outcome;  // [a][b]
};
GameEncoding game_to_env(const NormalFormGame& g);

/// X(u<i>=<v>): the play about to finish pays v to player i.
FormulaPtr utility_formula(const NormalFormGame& g, int player, const Rational& v);

/// Existence of a pure Nash equilibrium over the strategy space.
FormulaPtr ne_formula(const NormalFormGame& g);

/// Existence of a perfect cooperative equilibrium.
FormulaPtr pce_formula(const NormalFormGame& g);

/// Independent oracle: scan the payoff cells for mutual best responses.
std::pair<bool, std::optional<std::pair<int, int>>> brute_force_ne(const NormalFormGame& g);

/// Independent oracle mirroring the best-utility-against-a-best-responder
/// definition.
bool brute_force_pce(const NormalFormGame& g);

/// Joint action picked by a checking witness (read off the strategy profile).
std::pair<int, int> witness_joint_action(const GameEncoding& enc, const Witness& w);

}  // namespace esl::game
