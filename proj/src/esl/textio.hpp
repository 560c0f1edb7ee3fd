#pragma once

#include "esl/strategy.hpp"

namespace esl {

/// Line-oriented environment format; see docs/FORMATS.md. Wildcard joint
/// actions and turn-based single-agent labels expand to the explicit
/// relation while reading.
Environment parse_environment(std::string_view text);
std::string serialize_environment(const Environment& env);

/// Strategy tables: "agent <name>: <state|obs:<value>|*> -> {a,b}".
StrategyProfile parse_strategy_table(std::string_view text, const Environment& env);
std::string serialize_strategy_table(const Environment& env, const StrategyProfile& profile);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace esl
