#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "esl/textio.hpp"
#include "support/random_instances.hpp"

using namespace esl;
using namespace testsupport;

namespace {

struct RunResult {
    int exit;
    std::string out;
};

std::string binPath() {
    const char* bin = std::getenv("ESLMC_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "ESLMC_BIN must point at the eslmc binary");
    return bin;
}

RunResult run(const std::string& argsText) {
    std::string cmd = binPath() + " " + argsText + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), out};
}

std::string tempDir() {
    static int counter = 0;
    std::string dir = "cli_scratch_" + std::to_string(counter++);
    std::string cmd = "mkdir -p " + dir;
    REQUIRE(std::system(cmd.c_str()) == 0);
    return dir;
}

std::string e1Path(const std::string& dir) {
    std::string path = dir + "/e1.env";
    write_file(path, serialize_environment(makeE1()));
    return path;
}

}  // namespace

TEST_CASE("check command exit codes are a function of the verdict") {
    std::string dir = tempDir();
    std::string env = e1Path(dir);
    CHECK(run("check --env " + env + " --class all --formula '!D[]! A G p'").exit == 0);
    CHECK(run("check --env " + env + " --class all --formula 'A G p'").exit == 1);
    CHECK(run("check --env " + env + " --class all --formula 'p U q'").exit == 2);
    CHECK(run("check --env " + env + " --class all --formula 'A G p' --engine reduction "
              "--ets-budget 3").exit == 3);
    CHECK(run("check --env missing.env --formula p").exit == 2);
}

TEST_CASE("machine records carry the fields needed to re-run the job") {
    std::string dir = tempDir();
    std::string env = e1Path(dir);
    RunResult r = run("check --env " + env +
                      " --class all --engine eslminus --formula '!D[]! A G p' --witness --machine");
    CHECK(r.exit == 0);
    nlohmann::json record = nlohmann::json::parse(r.out);
    CHECK(record["tool"] == "eslmc");
    CHECK(record["command"] == "check");
    CHECK(record["holds"] == true);
    CHECK(record["exit"] == 0);
    CHECK(record["class"] == "all");
    CHECK(record["engine"] == "eslminus");
    CHECK(record["formula"] == "!D[]! A G p");
    CHECK(record["env_digest"].is_string());
    CHECK(record["stats"]["profiles"] == 9);
    CHECK(record["witness"]["state"] == "s0");

    // The digest pins the environment content.
    std::string envText = read_file(env);
    std::ostringstream expect;
    expect << std::hex << std::setw(16) << std::setfill('0') << fnv1a(envText);
    CHECK(record["env_digest"] == expect.str());
}

TEST_CASE("context bindings name strategies by table files") {
    std::string dir = tempDir();
    std::string env = e1Path(dir);
    write_file(dir + "/stay.table", "agent 1: * -> {a}\n");
    RunResult r = run("check --env " + env + " --class all --formula 'exists y . loc(sig(1),y)' "
                      "--bind x=s0@" + dir + "/stay.table");
    CHECK(r.exit == 0);  // extra bindings are allowed
    RunResult used = run("check --env " + env + " --class all --formula 'loc(sig(1),x)' --bind x=s0@" +
                         dir + "/stay.table");
    CHECK(used.exit == 1);  // other profiles are initial too
    RunResult bad = run("check --env " + env + " --class all --formula 'loc(sig(1),x)' --bind x=s1@" +
                        dir + "/stay.table");
    CHECK(bad.exit == 2);  // s1 is unreachable under the bound profile
}

TEST_CASE("generated files round-trip through their parsers") {
    std::string dir = tempDir();
    REQUIRE(run("generate qbf --qbf 'exists x1 forall x2 . (x1 | x2)' --out-dir " + dir).exit == 0);
    Environment qbfEnv = parse_environment(read_file(dir + "/qbf.env"));
    CHECK(validate_environment(qbfEnv).empty());
    FormulaPtr f = parse_formula(read_file(dir + "/qbf.formula"), &qbfEnv);
    CHECK(render_formula(parse_formula(render_formula(f), &qbfEnv)) == render_formula(f));
    CHECK(run("check --env " + dir + "/qbf.env --class unifdet --formula-file " + dir +
              "/qbf.formula").exit == 0);

    write_file(dir + "/pd.game",
               "actions 0: c d\nactions 1: c d\npayoffs 0: 3 0 5 1\npayoffs 1: 3 5 0 1\n");
    REQUIRE(run("generate game --game " + dir + "/pd.game --out-dir " + dir).exit == 0);
    Environment gameEnv = parse_environment(read_file(dir + "/game.env"));
    CHECK(validate_environment(gameEnv).empty());
    parse_formula(read_file(dir + "/ne.formula"), &gameEnv);
    parse_formula(read_file(dir + "/pce.formula"), &gameEnv);
    CHECK(run("check --env " + dir + "/game.env --class unifdet --formula-file " + dir +
              "/ne.formula").exit == 0);

    REQUIRE(run("generate erasure-demo --out-dir " + dir).exit == 0);
    Environment erasure = parse_environment(read_file(dir + "/erasure.env"));
    CHECK(validate_environment(erasure).empty());
    std::istringstream formulas(read_file(dir + "/erasure.formulas"));
    std::string line;
    std::vector<int> verdicts;
    while (std::getline(formulas, line)) {
        if (line.empty() || line[0] == '#') continue;
        FormulaPtr demo = parse_formula(line, &erasure);
        CHECK(*parse_formula(render_formula(demo), &erasure) == *demo);
        // Everything the demo writes sits inside the full logic.
        classify_fragment(desugar(demo));
        verdicts.push_back(run("check --env " + dir + "/erasure.env --class unif --formula '" +
                               line + "'").exit);
    }
    CHECK(verdicts == std::vector<int>{1, 1, 0, 0});
}

TEST_CASE("alternating-logic commands") {
    std::string dir = tempDir();
    std::string env = e1Path(dir);
    RunResult tr = run("atel translate --formula '<<1>> X p'");
    CHECK(tr.exit == 0);
    CHECK(tr.out == "!K[e]!D[e,sig(1)] X p\n");
    CHECK(run("atel eval --env " + env + " --state s0 --sigma unifdet --formula '<<1>> X q'").exit ==
          0);
    CHECK(run("atel eval --env " + env + " --state nowhere --sigma unifdet --formula 'p'").exit ==
          2);
    RunResult verify = run("atel verify --env " + env + " --sigma unifdet --formula '<<1>> G p'");
    CHECK(verify.exit == 0);
    CHECK(verify.out.find("agree at all states") != std::string::npos);
}

TEST_CASE("knowledge-based program commands") {
    std::string dir = tempDir();
    Environment env;
    AgentId one = env.addAgent("1");
    env.addAction(one, "a");
    env.addAction(one, "b");
    env.addState("s0");
    env.addState("s1");
    env.setObservation(one, 0, "0");
    env.setObservation(one, 1, "0");
    env.addLabel(1, "p");
    env.initial = {0, 1};
    env.seal();
    for (StateId s : {0, 1})
        for (int ja = 0; ja < 2; ++ja) env.addTransition(s, ja, s);
    write_file(dir + "/bit.env", serialize_environment(env));
    write_file(dir + "/bit.kbp", "agent 1: do K[1] p -> a [] otherwise -> b od\n");
    RunResult exists = run("kbp exists --env " + dir + "/bit.env --kbp " + dir + "/bit.kbp");
    CHECK(exists.exit == 0);
    CHECK(exists.out.find("{b}") != std::string::npos);

    RunResult find = run("kbp find --env " + dir + "/bit.env --kbp " + dir + "/bit.kbp --machine");
    nlohmann::json record = nlohmann::json::parse(find.out);
    CHECK(record["implementations"].size() == 1);

    write_file(dir + "/bad.kbp", "agent 1: do K[1] p -> zap od\n");
    CHECK(run("kbp exists --env " + dir + "/bit.env --kbp " + dir + "/bad.kbp").exit == 2);

    // A verification query violated by the only implementation names it.
    RunResult verify = run("kbp verify --env " + dir + "/bit.env --kbp " + dir +
                           "/bit.kbp --formula 'A X did_1=a'");
    CHECK(verify.exit == 1);
    CHECK(verify.out.find("offending implementation") != std::string::npos);
    CHECK(run("kbp verify --env " + dir + "/bit.env --kbp " + dir +
              "/bit.kbp --formula 'A X did_1=b'").exit == 0);
}

TEST_CASE("environment text round-trips and validation diagnostics") {
    Rng rng(271828);
    for (int i = 0; i < 10; ++i) {
        Environment env = randomEnv(rng);
        Environment back = parse_environment(serialize_environment(env));
        CHECK(serialize_environment(back) == serialize_environment(env));
    }
    std::string dir = tempDir();
    write_file(dir + "/broken.env",
               "agents: 1\nactions 1: a b\nstates: s0\ninit: s0\nobs 1: *=0\ntrans s0 (a): s0\n");
    RunResult r = run("validate --env " + dir + "/broken.env");
    CHECK(r.exit == 1);
    CHECK(r.out.find("(b)") != std::string::npos);
}

TEST_CASE("the corpus parses, validates, and answers as documented") {
    const char* corpus = std::getenv("ESLMC_CORPUS");
    REQUIRE_MESSAGE(corpus != nullptr, "ESLMC_CORPUS must point at the corpus directory");
    std::string dir = corpus;
    for (const char* name : {"e1.env", "bit.env", "selffulfil.env", "erasure.env"}) {
        Environment env = parse_environment(read_file(dir + "/" + name));
        CHECK(validate_environment(env).empty());
    }
    Environment e1 = parse_environment(read_file(dir + "/e1.env"));
    StrategyProfile stay = parse_strategy_table(read_file(dir + "/stay.table"), e1);
    CHECK(stay.byAgent[0].enabled == std::vector<ActionSet>{1, 1});

    CHECK(run("check --env " + dir + "/e1.env --class all --formula '!D[]! A G p'").exit == 0);
    CHECK(run("kbp exists --env " + dir + "/bit.env --kbp " + dir + "/bit.kbp").exit == 0);
    RunResult find = run("kbp find --env " + dir + "/selffulfil.env --kbp " + dir +
                         "/selffulfil.kbp --machine");
    nlohmann::json record = nlohmann::json::parse(find.out);
    CHECK(record["implementations"].size() == 4);
}
