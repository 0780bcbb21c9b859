#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vbct/config.hpp"
#include "vbct/rng.hpp"
#include "vbct/scenario.hpp"

#include <string>
#include <vector>

using namespace vbct;
using config::ScenarioConfig;

namespace {

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

} // namespace

TEST_CASE("fixtures enumerate, parse, and round-trip canonically") {
    const std::vector<std::string> expected = {
        "dieroll_biased",  "vbct1_honest",          "vbct1_substitution", "vbct2_bob_cheat",
        "vbct2_honest",    "vbct2_z_mismatch",      "vbct3_honest",       "vbct3_premature_unveil",
        "vbct3_unveil_forge", "vbct3_z_mismatch",   "vbct4_honest",       "vbct4_malformed_pair"};
    CHECK(scenario::fixture_names() == expected);
    CHECK_THROWS_AS(scenario::fixture_config("vbct9_nope"), param_error);

    for (const auto& name : expected) {
        const auto cfg = ScenarioConfig::from_text(scenario::fixture_config(name));
        const std::string canon = cfg.canonical();
        // the canonical form is a fixed point of parse-then-print
        CHECK(ScenarioConfig::from_text(canon).canonical() == canon);
    }

    // a minimal config materializes every default in canonical form
    const auto minimal =
        ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"theta":0.5}})");
    const std::string canon = minimal.canonical();
    CHECK(ScenarioConfig::from_text(canon).canonical() == canon);
    CHECK(canon.find("\"trials\": 1000") != std::string::npos);
    CHECK(canon.find("\"strategy\": \"honest\"") != std::string::npos);
}

TEST_CASE("configs reject unknown keys with their full path") {
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"theta":0.5},"protcol":1})"),
        "config has unknown key 'protcol'", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"thetaa":0.5}})"),
        "config has unknown key 'bias.thetaa'", param_error);
    // sections from another protocol are errors, not dead weight
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"vbct1","bias":{"theta":0.5},"batch":{"states":8}})"),
        "config has unknown key 'batch'", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"vbct2","bias":{"alpha0_sq":0.9,"alpha1_sq":0.1},"rounds":{}})"),
        "config has unknown key 'rounds'", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"vbct2","bias":{"alpha0_sq":0.9,"alpha1_sq":0.1},"commitment":{}})"),
        "config has unknown key 'commitment'", param_error);
    // die rolls take no input bit: the die choice plays that role
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"dieroll","die":{"faces":2,"dice":[[0.5,0.5],[0.5,0.5]],"choice":0},"w":0})"),
        "config has unknown key 'w'", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"theta":0.5},"alice":{"strat":"x"}})"),
        "config has unknown key 'alice.strat'", param_error);
}

TEST_CASE("configs demand required sections and coherent fields") {
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_text(R"({"protocol":"vbct2"})"),
                         "config section 'bias' is required for vbct2", param_error);
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{}})"),
                         "config field 'bias.theta' is required for vbct1", param_error);
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_text(R"({"protocol":"dieroll"})"),
                         "config section 'die' is required for dieroll", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(R"({"protocol":"dieroll","die":{"faces":2,"choice":0}})"),
        "config field 'die.dice' is required for dieroll", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"vbct2","bias":{"alpha0_sq":0.2,"alpha1_sq":0.7}})"),
        "config field 'bias.alpha1_sq' must lie below 'bias.alpha0_sq': "
        "the bias range needs p_min < p_max",
        param_error);
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_text(R"({"protocol":"vbct5"})"),
                         "unknown protocol 'vbct5'; valid: vbct1 vbct2 vbct3 vbct4 dieroll",
                         param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"vbct1","bias":{"theta":0.5},"alice":{"strategy":"bob_vbct1_measure"}})"),
        "unknown strategy 'bob_vbct1_measure' in 'alice'; valid for this party and protocol: "
        "honest alice_vbct1_substitution refuse",
        param_error);

    CHECK_THROWS_AS(ScenarioConfig::from_text("not json at all"), param_error);
    CHECK_THROWS_AS(ScenarioConfig::from_text("[1,2,3]"), param_error);
    CHECK_THROWS_AS(ScenarioConfig::from_text(R"({"trials":10})"), param_error);

    // type errors name the field
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"theta":0.5},"trials":1.5})"),
        "config field 'trials' must be an integer", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"theta":0.5},"seed":-4})"),
        "config field 'seed' must be a nonnegative integer", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"vbct2","bias":{"alpha0_sq":0.9,"alpha1_sq":0.1},"supplementary":1})"),
        "config field 'supplementary' must be a boolean", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"theta":0.5},"w":2})"),
        "config field 'w' must be 0, 1, or \"mix\"", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"theta":0.5},"w":"fixed"})"),
        "config field 'w' must be 0, 1, or \"mix\"", param_error);

    // accepted spellings of the input policy
    CHECK(ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"theta":0.5},"w":"mix"})").w ==
          -1);
    CHECK(ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"theta":0.5},"w":1})").w == 1);

    // cross-field checks still run behind the parser
    CHECK_THROWS_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"vbct4","bias":{"alpha0_sq":0.7,"alpha1_sq":0.25},"batch":{"states":8,"test_exponent":4}})"),
        param_error); // 0.7 * 8 is not an integral column split
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(R"({"protocol":"vbct1","bias":{"theta":0.5},"trials":0})"),
        "config field 'trials' must lie in 1..100000000", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"vbct1","bias":{"theta":0.5},"output":{"full_runs":1001}})"),
        "config field 'output.full_runs' must lie in 0..1000", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"vbct1","bias":{"theta":0.5},"report":{"bootstrap":10001}})"),
        "config field 'report.bootstrap' must lie in 0..10000", param_error);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_text(
            R"({"protocol":"vbct1","bias":{"theta":0.5},"report":{"leakage_allowance":0.0}})"),
        "config field 'report.leakage_allowance' must be positive", param_error);
}

TEST_CASE("per-trial inputs and seeds are stable derivations") {
    CHECK(scenario::trial_seed(7, 0) == 10947815214712303874ull);
    CHECK(scenario::trial_seed(7, 1) == 7076223819581404918ull);
    for (long long i : {0LL, 1LL, 17LL, 4095LL})
        CHECK(scenario::trial_seed(99, i) == rng::derive_seed(99, i));

    auto cfg = ScenarioConfig::from_text(scenario::fixture_config("vbct2_honest"));
    cfg.w = -1;
    long long ones = 0;
    for (long long i = 0; i < 4000; ++i) {
        const int w = scenario::trial_w(cfg, i);
        CHECK((w == 0 || w == 1));
        CHECK(scenario::trial_w(cfg, i) == w); // stable
        ones += w;
    }
    CHECK(ones >= 1800);
    CHECK(ones <= 2200);

    cfg.w = 0;
    CHECK(scenario::trial_w(cfg, 123) == 0);
    cfg.w = 1;
    CHECK(scenario::trial_w(cfg, 123) == 1);
}

TEST_CASE("scenario outputs are byte-identical at any worker count") {
    auto cfg = ScenarioConfig::from_text(scenario::fixture_config("vbct2_honest"));
    cfg.trials = 400;
    const auto seq = scenario::run_scenario(cfg, 1);
    const auto par = scenario::run_scenario(cfg, 3);
    CHECK(seq.trials.size() == 400);
    CHECK(seq.full_texts.size() == static_cast<std::size_t>(cfg.full_runs));
    CHECK(seq.report.trials == 400);
    CHECK(seq.transcript_file() == par.transcript_file());
    CHECK(seq.report_file() == par.report_file());

    auto cheat = ScenarioConfig::from_text(scenario::fixture_config("vbct1_substitution"));
    cheat.trials = 300;
    CHECK(scenario::run_scenario(cheat, 1).transcript_file() ==
          scenario::run_scenario(cheat, 4).transcript_file());

    CHECK_THROWS_AS(scenario::run_scenario(cfg, 0), param_error);
    CHECK_THROWS_AS(scenario::run_scenario(cfg, 65), param_error);
}

TEST_CASE("transcript files verify clean and catch tampering") {
    auto cfg = ScenarioConfig::from_text(scenario::fixture_config("vbct1_honest"));
    cfg.trials = 200;
    const auto out = scenario::run_scenario(cfg, 1);
    const std::string text = out.transcript_file();

    const auto clean = scenario::verify_transcript_text(text, 2);
    CHECK(clean.ok);
    CHECK(clean.trials_checked == 200);
    CHECK(clean.full_checked == cfg.full_runs);
    CHECK(clean.issues.empty());

    SUBCASE("a corrupted digest is pinned to its trial") {
        const auto pos = text.find("trial 5 w ");
        REQUIRE(pos != std::string::npos);
        const auto dig = text.find("digest ", pos);
        REQUIRE(dig != std::string::npos);
        std::string bad = text;
        char& c = bad[dig + 7];
        c = c == '1' ? '2' : '1';
        const auto res = scenario::verify_transcript_text(bad, 1);
        CHECK_FALSE(res.ok);
        REQUIRE(!res.issues.empty());
        CHECK(res.issues.front().trial == 5);
    }
    SUBCASE("an altered input bit is a summary mismatch") {
        const auto res = scenario::verify_transcript_text(
            replace_once(text, "trial 7 w 0", "trial 7 w 1"), 1);
        CHECK_FALSE(res.ok);
        REQUIRE(!res.issues.empty());
        CHECK(res.issues.front().trial == 7);
    }
    SUBCASE("an edited full record fails the byte comparison") {
        const auto res = scenario::verify_transcript_text(
            replace_once(text, "begin full 0\n", "begin full 0\ntampered line\n"), 1);
        CHECK_FALSE(res.ok);
        REQUIRE(!res.issues.empty());
        CHECK(res.issues.front().trial == 0);
    }
    SUBCASE("a wrong declared trial count is a file-level issue") {
        const auto res = scenario::verify_transcript_text(
            replace_once(text, "trials 200\n", "trials 199\n"), 1);
        CHECK_FALSE(res.ok);
        REQUIRE(!res.issues.empty());
        CHECK(res.issues.front().trial == -1);
    }
    SUBCASE("malformed files throw instead of reporting issues") {
        CHECK_THROWS_AS(scenario::verify_transcript_text("not a transcript"), param_error);
        CHECK_THROWS_AS(scenario::verify_transcript_text(""), param_error);
        CHECK_THROWS_AS(scenario::verify_transcript_text(
                            replace_once(text, "vbct transcripts v1", "vbct transcripts v9")),
                        param_error);
    }

    // disabling full records removes the replay section entirely
    cfg.full_runs = 0;
    const auto lean = scenario::run_scenario(cfg, 1);
    CHECK(lean.full_texts.empty());
    CHECK(lean.transcript_file().find("begin full") == std::string::npos);
    const auto res = scenario::verify_transcript_text(lean.transcript_file(), 1);
    CHECK(res.ok);
    CHECK(res.full_checked == 0);
}

TEST_CASE("every fixture runs with all report bounds satisfied") {
    for (const auto& name : scenario::fixture_names()) {
        CAPTURE(name);
        const auto cfg = ScenarioConfig::from_text(scenario::fixture_config(name));
        const auto out = scenario::run_scenario(cfg, 1);
        CHECK(out.report.all_satisfied);
        CHECK(out.report.trials == cfg.trials);
    }
}
