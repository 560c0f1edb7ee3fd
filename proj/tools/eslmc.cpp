// eslmc: explicit-state model checker for epistemic strategy logic.
//
// Commands: check, atel, generate, kbp, validate. Exit codes are stable for
// scripting: 0 the property holds, 1 it fails, 2 usage or input errors,
// 3 a budget was exceeded.

#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "esl/atel.hpp"
#include "esl/checker.hpp"
#include "esl/demos.hpp"
#include "esl/ets.hpp"
#include "esl/game.hpp"
#include "esl/kbp.hpp"
#include "esl/qbf.hpp"
#include "esl/textio.hpp"

using nlohmann::json;
using namespace esl;

namespace {

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct CommonArgs {
    std::string envPath;
    std::string formulaText;
    std::string formulaFile;
    std::string className = "all";
    std::string engineName = "auto";
    std::vector<std::string> binds;
    bool wantWitness = false;
    bool machine = false;
    int workers = 1;
    uint64_t etsBudget = 200000;
    uint64_t formulaBudget = 1000000;
    bool noShortcut = false;
};

std::string digestHex(std::string_view data) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << fnv1a(data);
    return out.str();
}

CheckOptions optionsFrom(const CommonArgs& a) {
    CheckOptions o;
    o.engine = engine_by_name(a.engineName);
    o.workers = a.workers;
    o.etsStateBudget = a.etsBudget;
    o.formulaNodeBudget = a.formulaBudget;
    o.wantWitness = a.wantWitness;
    o.shortcutCommon = !a.noShortcut;
    return o;
}

std::string formulaTextFrom(const CommonArgs& a) {
    if (!a.formulaText.empty() && !a.formulaFile.empty())
        throw InputError("give --formula or --formula-file, not both");
    if (!a.formulaText.empty()) return a.formulaText;
    if (!a.formulaFile.empty()) return read_file(a.formulaFile);
    throw InputError("a formula is required (--formula or --formula-file)");
}

// VAR=STATE@TABLEFILE
ContextBinding parseBind(const std::string& text, const Environment& env) {
    auto eq = text.find('=');
    auto at = text.find('@');
    if (eq == std::string::npos || at == std::string::npos || at < eq)
        throw InputError("bindings look like x=state@table-file");
    ContextBinding b;
    b.var = text.substr(0, eq);
    std::string stateName = text.substr(eq + 1, at - eq - 1);
    auto s = env.states.find(stateName);
    if (!s) throw InputError("unknown state '" + stateName + "' in binding");
    b.state = *s;
    b.profile = parse_strategy_table(read_file(text.substr(at + 1)), env);
    return b;
}

json statsJson(const Statistics& st) {
    return json{{"profiles", st.profilesEnumerated},
                {"admissible_states", st.admissibleStates},
                {"states_explored", st.statesExplored},
                {"memo_hits", st.memoHits}};
}

json witnessJson(const Environment& env, const Witness& w) {
    json out;
    out["state"] = env.states.name(w.state);
    out["table"] = serialize_strategy_table(env, w.profile);
    if (!w.var.empty()) out["var"] = w.var;
    return out;
}

void printMachine(const json& record) { std::cout << record.dump() << "\n"; }

int runCheck(const CommonArgs& args) {
    std::string envText = read_file(args.envPath);
    Environment env = parse_environment(envText);
    std::vector<Violation> violations = validate_environment(env);
    if (!violations.empty()) {
        for (const Violation& v : violations) std::cerr << "invalid environment: " << v.detail << "\n";
        return kExitUsage;
    }
    std::string formulaText = formulaTextFrom(args);
    Instance inst;
    inst.env = &env;
    inst.cls = StrategyClass::byName(args.className);
    inst.formula = parse_formula(formulaText, &env);
    for (const std::string& b : args.binds) inst.context.push_back(parseBind(b, env));

    Verdict v = check(inst, optionsFrom(args));
    int exit = v.holds ? kExitHolds : kExitFails;
    if (args.machine) {
        json record{{"tool", "eslmc"},
                    {"command", "check"},
                    {"env_digest", digestHex(envText)},
                    {"formula", formulaText},
                    {"class", args.className},
                    {"engine", v.stats.engine},
                    {"holds", v.holds},
                    {"exit", exit},
                    {"stats", statsJson(v.stats)}};
        record["witness"] = v.witness ? witnessJson(env, *v.witness) : json(nullptr);
        printMachine(record);
    } else {
        std::cout << "verdict: " << (v.holds ? "holds" : "fails") << "\n";
        std::cout << "engine: " << v.stats.engine << ", profiles: " << v.stats.profilesEnumerated
                  << ", admissible states: " << v.stats.admissibleStates
                  << ", explored: " << v.stats.statesExplored
                  << ", memo hits: " << v.stats.memoHits << "\n";
        if (v.witness) {
            std::cout << "witness state: " << env.states.name(v.witness->state) << "\n";
            std::cout << serialize_strategy_table(env, v.witness->profile);
        }
    }
    return exit;
}

int runValidate(const std::string& envPath, bool machine) {
    std::string envText = read_file(envPath);
    Environment env = parse_environment(envText);
    std::vector<Violation> violations = validate_environment(env);
    if (machine) {
        json list = json::array();
        for (const Violation& v : violations) list.push_back(v.detail);
        printMachine(json{{"tool", "eslmc"},
                          {"command", "validate"},
                          {"env_digest", digestHex(envText)},
                          {"holds", violations.empty()},
                          {"exit", violations.empty() ? kExitHolds : kExitFails},
                          {"violations", list}});
    } else if (violations.empty()) {
        std::cout << "environment is valid\n";
    } else {
        for (const Violation& v : violations) std::cout << "violation: " << v.detail << "\n";
    }
    return violations.empty() ? kExitHolds : kExitFails;
}

atel::GroupStrategyKind sigmaByName(const std::string& name) {
    if (name == "det") return atel::GroupStrategyKind::Deterministic;
    if (name == "unifdet") return atel::GroupStrategyKind::LocallyUniformDeterministic;
    throw InputError("--sigma is det or unifdet");
}

int runAtel(const std::string& mode, const CommonArgs& args, const std::string& stateName,
            const std::string& sigmaName) {
    if (mode == "translate") {
        atel::AtelPtr f = atel::parse_atel(formulaTextFrom(args), nullptr);
        std::string text = render_formula(atel::translate_atel(
            f, Environment{}));  // translation never reads the environment
        if (args.machine)
            printMachine(json{{"tool", "eslmc"}, {"command", "atel-translate"},
                              {"formula", formulaTextFrom(args)}, {"translated", text},
                              {"holds", true}, {"exit", 0}});
        else
            std::cout << text << "\n";
        return kExitHolds;
    }
    std::string envText = read_file(args.envPath);
    Environment env = parse_environment(envText);
    atel::AtelPtr f = atel::parse_atel(formulaTextFrom(args), &env);
    atel::GroupStrategyKind kind = sigmaByName(sigmaName);

    if (mode == "eval") {
        auto s = env.states.find(stateName);
        if (!s) throw InputError("unknown state '" + stateName + "'");
        bool holds = atel::eval_atel(env, kind, *s, f);
        if (args.machine)
            printMachine(json{{"tool", "eslmc"}, {"command", "atel-eval"},
                              {"env_digest", digestHex(envText)},
                              {"formula", formulaTextFrom(args)}, {"state", stateName},
                              {"sigma", sigmaName}, {"holds", holds},
                              {"exit", holds ? kExitHolds : kExitFails}});
        else
            std::cout << "verdict at " << stateName << ": " << (holds ? "holds" : "fails") << "\n";
        return holds ? kExitHolds : kExitFails;
    }
    if (mode == "verify") {
        auto [prepared, cls] = atel::prepare_atel_instance(env, kind);
        Instance inst;
        inst.env = &prepared;
        inst.cls = cls;
        inst.formula = atel::translate_atel(f, env);
        bool agree = true;
        json perState = json::object();
        for (StateId s = 0; s < env.stateCount(); ++s) {
            bool direct = atel::eval_atel(env, kind, s, f);
            bool translated = holds_at_all_with_state(inst, s, EngineKind::Auto, optionsFrom(args));
            perState[env.states.name(s)] = json{{"direct", direct}, {"translated", translated}};
            if (direct != translated) agree = false;
        }
        if (args.machine)
            printMachine(json{{"tool", "eslmc"}, {"command", "atel-verify"},
                              {"env_digest", digestHex(envText)},
                              {"formula", formulaTextFrom(args)}, {"sigma", sigmaName},
                              {"holds", agree}, {"exit", agree ? kExitHolds : kExitFails},
                              {"per_state", perState}});
        else if (agree)
            std::cout << "agree at all states\n";
        else
            std::cout << "DISAGREEMENT: " << perState.dump() << "\n";
        return agree ? kExitHolds : kExitFails;
    }
    throw InputError("atel mode is eval, translate, or verify");
}

int runGenerate(const std::string& kind, const std::string& qbfText, const std::string& gamePath,
                const std::string& outDir, bool machine) {
    std::vector<std::string> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        std::string path = outDir.empty() ? name : outDir + "/" + name;
        write_file(path, content);
        written.push_back(path);
    };
    if (kind == "qbf") {
        if (qbfText.empty()) throw InputError("generate qbf needs --qbf '<prefix> . <matrix>'");
        qbf::QbfInstance q = qbf::parse_qbf(qbfText);
        qbf::QbfReduction red = qbf::qbf_to_instance(q);
        emit("qbf.env", serialize_environment(red.env));
        emit("qbf.formula", render_formula(red.formula) + "\n");
        emit("qbf.source", render_qbf(q) + "\n");
    } else if (kind == "game") {
        if (gamePath.empty()) throw InputError("generate game needs --game <file>");
        game::NormalFormGame g = game::parse_game(read_file(gamePath));
        game::GameEncoding enc = game::game_to_env(g);
        emit("game.env", serialize_environment(enc.env));
        emit("ne.formula", render_formula(game::ne_formula(g)) + "\n");
        emit("pce.formula", render_formula(game::pce_formula(g)) + "\n");
    } else if (kind == "erasure-demo") {
        for (const auto& [name, content] : demo::erasure_files()) emit(name, content);
    } else {
        throw InputError("generator kind is qbf, game, or erasure-demo");
    }
    if (machine) {
        printMachine(json{{"tool", "eslmc"}, {"command", "generate"}, {"kind", kind},
                          {"files", written}, {"holds", true}, {"exit", 0}});
    } else {
        for (const std::string& p : written) std::cout << "wrote " << p << "\n";
    }
    return kExitHolds;
}

int runKbp(const std::string& mode, const CommonArgs& args, const std::string& kbpPath) {
    std::string envText = read_file(args.envPath);
    Environment env = parse_environment(envText);
    kbp::Program program = kbp::parse_kbp(read_file(kbpPath), env);
    if (mode == "exists") {
        kbp::KbpQuery q;
        q.kind = kbp::KbpQuery::Exists;
        Verdict v = kbp::check_kbp(env, program, q, optionsFrom(args));
        int exit = v.holds ? kExitHolds : kExitFails;
        if (args.machine) {
            json record{{"tool", "eslmc"}, {"command", "kbp-exists"},
                        {"env_digest", digestHex(envText)}, {"holds", v.holds}, {"exit", exit},
                        {"stats", statsJson(v.stats)}};
            record["witness"] = v.witness ? witnessJson(env, *v.witness) : json(nullptr);
            printMachine(record);
        } else {
            std::cout << "implementation " << (v.holds ? "exists" : "does not exist") << "\n";
            if (v.witness) std::cout << serialize_strategy_table(env, v.witness->profile);
        }
        return exit;
    }
    if (mode == "find") {
        std::vector<StrategyProfile> found =
            kbp::find_implementations(env, program, *StrategyClass::byName(args.className));
        if (args.machine) {
            json list = json::array();
            for (const StrategyProfile& p : found) list.push_back(serialize_strategy_table(env, p));
            printMachine(json{{"tool", "eslmc"}, {"command", "kbp-find"},
                              {"env_digest", digestHex(envText)},
                              {"holds", !found.empty()}, {"exit", 0},
                              {"implementations", list}});
        } else {
            std::cout << found.size() << " implementation(s)\n";
            for (size_t i = 0; i < found.size(); ++i)
                std::cout << "--- implementation " << i + 1 << "\n"
                          << serialize_strategy_table(env, found[i]);
        }
        return kExitHolds;
    }
    if (mode == "verify") {
        kbp::KbpQuery q;
        q.kind = kbp::KbpQuery::AllSatisfy;
        kbp::ActionRecording forParsing = kbp::make_action_recording(env);
        q.formula = parse_formula(formulaTextFrom(args), &forParsing.env);
        Verdict v = kbp::check_kbp(env, program, q, optionsFrom(args));
        int exit = v.holds ? kExitHolds : kExitFails;
        std::optional<std::string> offender;
        if (!v.holds) {
            // Name an implementation that breaks the guarantee: one whose own
            // action-recording system has a reachable point refuting the
            // formula.
            for (const StrategyProfile& p :
                 kbp::find_implementations(env, program, *StrategyClass::locallyUniform())) {
                SingletonEvaluator ev(forParsing.env, forParsing.lift(env, p));
                bool ok = true;
                for (StateId s : ev.reachableStates())
                    if (!ev.eval(s, q.formula)) {
                        ok = false;
                        break;
                    }
                if (!ok) {
                    offender = serialize_strategy_table(env, p);
                    break;
                }
            }
        }
        if (args.machine) {
            json record{{"tool", "eslmc"}, {"command", "kbp-verify"},
                        {"env_digest", digestHex(envText)},
                        {"formula", formulaTextFrom(args)}, {"holds", v.holds},
                        {"exit", exit}, {"stats", statsJson(v.stats)}};
            record["offender"] = offender ? json(*offender) : json(nullptr);
            printMachine(record);
        } else {
            std::cout << "all implementations satisfy the formula: "
                      << (v.holds ? "yes" : "no") << "\n";
            if (offender) std::cout << "offending implementation:\n" << *offender;
        }
        return exit;
    }
    throw InputError("kbp mode is exists, find, or verify");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit-state model checker for epistemic strategy logic"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string atelMode, stateName, sigmaName = "unifdet";
    std::string genKind, qbfText, gamePath, outDir = ".";
    std::string kbpMode, kbpPath;

    auto addCommon = [&](CLI::App* cmd, bool needsEnv) {
        if (needsEnv) cmd->add_option("--env", args.envPath, "environment file")->required();
        cmd->add_option("--formula", args.formulaText, "formula text");
        cmd->add_option("--formula-file", args.formulaFile, "file holding the formula");
        cmd->add_flag("--machine", args.machine, "one JSON record on stdout");
    };

    CLI::App* check = app.add_subcommand("check", "decide a formula over a strategy space");
    addCommon(check, true);
    check->add_option("--class", args.className, "all | det | unif | unifdet | comp:<class>");
    check->add_option("--engine", args.engineName, "auto | eslminus | ctlstark | full | reduction");
    check->add_option("--bind", args.binds, "context binding x=state@table-file");
    check->add_flag("--witness", args.wantWitness, "report a witness global state");
    check->add_option("--workers", args.workers, "worker threads for reachability");
    check->add_option("--ets-budget", args.etsBudget, "reduction state budget");
    check->add_option("--formula-budget", args.formulaBudget, "formula node budget");
    check->add_flag("--no-shortcut", args.noShortcut, "plain BFS for common knowledge");

    CLI::App* validate = app.add_subcommand("validate", "report environment invariant violations");
    validate->add_option("--env", args.envPath, "environment file")->required();
    validate->add_flag("--machine", args.machine, "one JSON record on stdout");

    CLI::App* atelCmd = app.add_subcommand("atel", "alternating-logic semantics and translation");
    atelCmd->add_option("mode", atelMode, "eval | translate | verify")->required();
    addCommon(atelCmd, false);
    atelCmd->add_option("--env", args.envPath, "environment file");
    atelCmd->add_option("--state", stateName, "state for eval mode");
    atelCmd->add_option("--sigma", sigmaName, "det | unifdet");
    atelCmd->add_option("--engine", args.engineName, "engine for the translated side");

    CLI::App* gen = app.add_subcommand("generate", "write environment/formula files");
    gen->add_option("kind", genKind, "qbf | game | erasure-demo")->required();
    gen->add_option("--qbf", qbfText, "quantified boolean formula");
    gen->add_option("--game", gamePath, "game file");
    gen->add_option("--out-dir", outDir, "output directory");
    gen->add_flag("--machine", args.machine, "one JSON record on stdout");

    CLI::App* kbpCmd = app.add_subcommand("kbp", "knowledge-based program queries");
    kbpCmd->add_option("mode", kbpMode, "exists | find | verify")->required();
    addCommon(kbpCmd, true);
    kbpCmd->add_option("--kbp", kbpPath, "program file")->required();
    kbpCmd->add_option("--class", args.className, "class for find mode (default unif)");
    kbpCmd->add_option("--workers", args.workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (check->parsed()) return runCheck(args);
        if (validate->parsed()) return runValidate(args.envPath, args.machine);
        if (atelCmd->parsed()) return runAtel(atelMode, args, stateName, sigmaName);
        if (gen->parsed()) return runGenerate(genKind, qbfText, gamePath, outDir, args.machine);
        if (kbpCmd->parsed()) {
            if (kbpCmd->count("--class") == 0) args.className = "unif";
            return runKbp(kbpMode, args, kbpPath);
        }
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const EslError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
