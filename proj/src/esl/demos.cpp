#include "esl/demos.hpp"

namespace esl::demo {

std::map<std::string, std::string> erasure_files() {
    std::map<std::string, std::string> out;
    out["erasure.env"] = R"(# Payment erasure scenario.
# Card numbers range over {1,2}. After the merchant acknowledges, the
# processor erases the card by overwriting it with a random value r; if the
# merchant stays silent the transaction times out with the card still held.
# The attacker may copy the processor's memory once the transaction is done.
agents: C M P A
actions C: idle
actions M: ack silent
actions P: idle
actions A: skip exploit
states: start_1 start_2 doneH_1 doneH_2 doneE_1_1 doneE_1_2 doneE_2_1 doneE_2_2 expH_1 expH_2 expE_1_1 expE_1_2 expE_2_1 expE_2_2
init: start_1 start_2

# The customer knows its own card number.
obs C: start_1=1 doneH_1=1 doneE_1_1=1 doneE_1_2=1 expH_1=1 expE_1_1=1 expE_1_2=1 *=2
# The merchant sees only the stage: pending, acknowledged, or timed out.
obs M: start_1=pend start_2=pend doneE_1_1=acked doneE_1_2=acked doneE_2_1=acked doneE_2_2=acked expE_1_1=acked expE_1_2=acked expE_2_1=acked expE_2_2=acked *=timeout
# The processor sees its memory cell: the held card, or the erasure value.
obs P: start_1=1 doneH_1=1 expH_1=1 start_2=2 doneH_2=2 expH_2=2 doneE_1_1=1 doneE_2_1=1 expE_1_1=1 expE_2_1=1 *=2
# The attacker sees only what it copied.
obs A: expH_1=1 expH_2=2 expE_1_1=1 expE_2_1=1 expE_1_2=2 expE_2_2=2 *=n

label doneH_1: done cc=1
label doneH_2: done cc=2
label doneE_1_1: done cc=1
label doneE_1_2: done cc=1
label doneE_2_1: done cc=2
label doneE_2_2: done cc=2
label expH_1: done exploited cc=1
label expH_2: done exploited cc=2
label expE_1_1: done exploited cc=1
label expE_1_2: done exploited cc=1
label expE_2_1: done exploited cc=2
label expE_2_2: done exploited cc=2
label start_1: cc=1
label start_2: cc=2

# Acknowledged: erasure randomizes the memory.
trans start_1 (idle,ack,idle,*): doneE_1_1 doneE_1_2
trans start_2 (idle,ack,idle,*): doneE_2_1 doneE_2_2
# Silent merchant: timeout, card still held.
trans start_1 (idle,silent,idle,*): doneH_1
trans start_2 (idle,silent,idle,*): doneH_2
# The attacker can copy the processor memory after the transaction is done.
trans doneH_1 (idle,*,idle,exploit): expH_1
trans doneH_1 (idle,*,idle,skip): doneH_1
trans doneH_2 (idle,*,idle,exploit): expH_2
trans doneH_2 (idle,*,idle,skip): doneH_2
trans doneE_1_1 (idle,*,idle,exploit): expE_1_1
trans doneE_1_1 (idle,*,idle,skip): doneE_1_1
trans doneE_1_2 (idle,*,idle,exploit): expE_1_2
trans doneE_1_2 (idle,*,idle,skip): doneE_1_2
trans doneE_2_1 (idle,*,idle,exploit): expE_2_1
trans doneE_2_1 (idle,*,idle,skip): doneE_2_1
trans doneE_2_2 (idle,*,idle,exploit): expE_2_2
trans doneE_2_2 (idle,*,idle,skip): doneE_2_2
trans expH_1 (*,*,*,*): expH_1
trans expH_2 (*,*,*,*): expH_2
trans expE_1_1 (*,*,*,*): expE_1_1
trans expE_1_2 (*,*,*,*): expE_1_2
trans expE_2_1 (*,*,*,*): expE_2_1
trans expE_2_2 (*,*,*,*): expE_2_2
)";
    out["erasure.formulas"] = R"(# Check each with: eslmc check --env erasure.env --class unif --formula <line>
# 1. Plain potential leak: the processor itself retains card knowledge after
#    the transaction is done. False here: randomized erasure means the
#    processor cannot tell a held card from an erasure value.
!D[]!(done & (K[P] !cc=1 | K[P] !cc=2))
# 2. Attack using only the attacker's own strategy. Still false: a copied
#    value might be an erasure value.
!D[]!(done & !exploited & E F (D[A,sig(A)] !cc=1 | D[A,sig(A)] !cc=2))
# 3. Collusion: knowing the merchant stayed silent tells the attacker the
#    copied value is the real card. True.
!D[]!(done & !exploited & E F (D[A,sig(A),sig(M)] !cc=1 | D[A,sig(A),sig(M)] !cc=2))
# 4. Erasure flaw independent of the attacker: the processor state plus the
#    merchant's strategy pins the card down. True.
!D[]!(done & (D[P,sig(M)] !cc=1 | D[P,sig(M)] !cc=2))
)";
    return out;
}

}  // namespace esl::demo
