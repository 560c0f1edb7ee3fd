#pragma once

#include <map>

#include "esl/basics.hpp"

namespace esl::demo {

/// Payment-erasure scenario: a customer C, merchant M, payment processor P,
/// and attacker A. The processor erases the card number by randomizing it
/// once the merchant acknowledges; a silent merchant leaves it in place, and
/// the attacker can copy the processor's memory after the transaction is
/// done. Returns file name -> content: the environment plus a formula list
/// probing the leak with and without strategy-aware knowledge.
std::map<std::string, std::string> erasure_files();

}  // namespace esl::demo
