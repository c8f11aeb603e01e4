// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// Acceptance suite: end-to-end checks over the shipped scenarios, the
// decision-semantics oracles and the CLI contract. Prints one PASS/FAIL
// line per criterion and exits nonzero if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "dcv/checker.hpp"
#include "dcv/scenario.hpp"
#include "fixtures.hpp"
#include "naive_formula.hpp"
#include "oracles.hpp"
#include "scenario_gen.hpp"
#include "state_gen.hpp"

using namespace dcv;
using dcv::testing::golden;
using dcv::testing::run_cli;

namespace {

struct Check {
    std::string detail;
    bool passed = true;

    void require(bool condition, const std::string& what) {
        if (!condition && passed) {
            passed = false;
            detail = what;
        }
    }
};

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. Deadlock reproduction on the original chemical-plant process.
Check criterion_deadlock() {
    Check check;
    auto start = std::chrono::steady_clock::now();

    auto liveness = run_cli("check --liveness " + golden("chemical_plant_v1.dcs"));
    check.require(liveness.exit_code == 1, "check --liveness must exit 1");
    check.require(contains(liveness.out, "LIVENESS: VIOLATED\n"), "liveness must be VIOLATED");
    check.require(
        contains(liveness.out, "request_info(compB, coal, READ, {PP}) = DENY; guard = false; "
                               "branch = none\nAT: n_signoff_check\n"),
        "witness must end with the denied sign-off request");

    auto run_result = run_cli("run " + golden("chemical_plant_v1.dcs"));
    check.require(run_result.exit_code == 1, "run must exit 1");
    check.require(contains(run_result.out, "OUTCOME: DEADLOCK(n_signoff_check)\n"),
                  "run must end in DEADLOCK at the signoff condition");

    double elapsed = seconds_since(start);
    check.require(elapsed < 1.0, "runtime exceeded 1 s");
    std::ostringstream os;
    os << "witness + run verified in " << elapsed << " s";
    if (check.passed) check.detail = os.str();
    return check;
}

// 2. Repaired process: liveness and safety hold, the relaxed policy
// variant signs off successfully.
Check criterion_repaired() {
    Check check;
    auto start = std::chrono::steady_clock::now();

    auto checked = run_cli("check --liveness --safety all " + golden("chemical_plant_v2.dcs"));
    check.require(checked.exit_code == 0, "check on v2 must exit 0");
    check.require(contains(checked.out, "LIVENESS: HOLDS\n"), "v2 liveness must hold");
    check.require(contains(checked.out, "SAFETY psi: HOLDS\n"), "v2 psi must hold");

    auto relaxed = run_cli("run " + golden("chemical_plant_v2_relaxed.dcs"));
    check.require(relaxed.exit_code == 0, "relaxed run must exit 0");
    check.require(contains(relaxed.out, "OUTCOME: COMPLETED(SUCCESS)\n"),
                  "relaxed run must complete successfully");
    check.require(contains(relaxed.out, "signoff(compB, coal, PP#1) -> sig = signoff#1"),
                  "signoff must execute in the relaxed run");

    double elapsed = seconds_since(start);
    check.require(elapsed < 1.0, "runtime exceeded 1 s");
    std::ostringstream os;
    os << "v2 checks + relaxed run verified in " << elapsed << " s";
    if (check.passed) check.detail = os.str();
    return check;
}

// 3. Exact policy semantics of the two production-plan rules under
// permit-overrides.
Check criterion_policy_semantics() {
    Check check;
    const AgentId comp_a{"compA"};
    const AgentId comp_b{"compB"};
    const Information pp{"PP"};
    Rule rule_a1{Target{{comp_a}, {pp}, {Action::WRITE, Action::READ}}, Effect::PERMIT};
    Rule rule_a2{Target{{}, {pp}, {Action::WRITE, Action::READ}}, Effect::DENY};
    Policy policy{Target{{}, {pp}, {}}, {rule_a1, rule_a2}, CombAlg::PERMIT_OVERRIDES};

    for (Action action : {Action::READ, Action::WRITE}) {
        Request by_a = make_request({comp_a}, {pp}, {action});
        Request by_b = make_request({comp_b}, {pp}, {action});
        check.require(evaluate_policy(policy, by_a) == Effect::PERMIT,
                      "compA must be permitted (" + to_string(action) + ")");
        check.require(evaluate_policy(policy, by_b) == Effect::DENY,
                      "compB must be denied (" + to_string(action) + ")");
    }
    if (check.passed) check.detail = "PERMIT for compA, DENY for compB, both actions";
    return check;
}

// 4. Combining algorithms against the truth table, and evaluate_pdp
// against the independent reference evaluator over the small universe.
Check criterion_semantics_oracle() {
    Check check;
    auto start = std::chrono::steady_clock::now();

    const auto& table = testing::combine_truth_table();
    check.require(table.size() == 39, "truth table must hold 39 rows");
    for (const auto& row : table) {
        check.require(combine(CombAlg::DENY_OVERRIDES, row.input) == row.deny_overrides,
                      "deny-overrides truth table mismatch");
        check.require(combine(CombAlg::PERMIT_OVERRIDES, row.input) == row.permit_overrides,
                      "permit-overrides truth table mismatch");
    }
    check.require(combine(CombAlg::DENY_OVERRIDES, {}) == Effect::NOT_APPLICABLE,
                  "empty combine must be NOT_APPLICABLE");

    // Small universe: 2 agents x 2 resources x 2 actions; PDPs of up to
    // two policies with up to two rules each. The full closure of that
    // shape is beyond any budget (~10^12 PDPs), so the enumeration is
    // stratified: every single-policy PDP with at most one rule over the
    // complete target lattice, every two-rule policy over reduced target
    // pools, and two-policy PDPs drawn pairwise from a mixed pool. Every
    // request in the universe is checked against every enumerated PDP.
    testing::SmallUniverse universe;
    const auto requests = universe.all_requests();
    const auto all_rules = universe.all_rules();
    const auto all_targets = universe.all_targets();

    long long cases = 0;
    long long disagreements = 0;
    auto compare = [&](const Pdp& pdp) {
        for (const Request& request : requests) {
            ++cases;
            if (evaluate_pdp(request, pdp) != testing::oracle_evaluate_pdp(request, pdp)) {
                ++disagreements;
            }
        }
    };

    // Stratum A: single policy, zero or one rule, full target lattice.
    for (const Target& target : all_targets) {
        for (CombAlg pdp_alg : {CombAlg::DENY_OVERRIDES, CombAlg::PERMIT_OVERRIDES}) {
            compare(Pdp{{Policy{target, {}, CombAlg::DENY_OVERRIDES}}, pdp_alg});
            for (const Rule& rule : all_rules) {
                compare(Pdp{{Policy{target, {rule}, CombAlg::DENY_OVERRIDES}}, pdp_alg});
            }
        }
    }

    // Stratum B: single policy with exactly two rules. Rule targets range
    // over fields in {empty, {first}, {both}}; policy targets over a
    // 9-element pool.
    std::vector<Target> policy_targets;
    {
        const AgentId a1 = universe.a1;
        const Information r1 = universe.r1;
        policy_targets.push_back(Target{{}, {}, {}});
        policy_targets.push_back(Target{{a1}, {}, {}});
        policy_targets.push_back(Target{{}, {r1}, {}});
        policy_targets.push_back(Target{{}, {}, {Action::READ}});
        policy_targets.push_back(Target{{a1}, {r1}, {}});
        policy_targets.push_back(Target{{}, {r1}, {Action::READ}});
        policy_targets.push_back(Target{{a1}, {}, {Action::READ}});
        policy_targets.push_back(Target{{a1}, {r1}, {Action::READ}});
        policy_targets.push_back(
            Target{{universe.a1, universe.a2}, {universe.r1, universe.r2},
                   {Action::READ, Action::WRITE}});
    }
    std::vector<Rule> reduced_rules;
    {
        std::vector<std::set<AgentId>> subjects = {{}, {universe.a1}, {universe.a1, universe.a2}};
        std::vector<std::set<Information>> resources = {
            {}, {universe.r1}, {universe.r1, universe.r2}};
        std::vector<std::set<Action>> actions = {
            {}, {Action::READ}, {Action::READ, Action::WRITE}};
        for (const auto& s : subjects)
            for (const auto& r : resources)
                for (const auto& a : actions)
                    for (Effect e : {Effect::PERMIT, Effect::DENY}) {
                        reduced_rules.push_back(Rule{Target{s, r, a}, e});
                    }
        reduced_rules.push_back(Rule{std::nullopt, Effect::PERMIT});
        reduced_rules.push_back(Rule{std::nullopt, Effect::DENY});
    }
    for (size_t i = 0; i < reduced_rules.size(); ++i) {
        for (size_t j = i + 1; j < reduced_rules.size(); ++j) {
            for (const Target& target : all_targets) {
                for (CombAlg rule_alg : {CombAlg::DENY_OVERRIDES, CombAlg::PERMIT_OVERRIDES}) {
                    compare(Pdp{{Policy{target, {reduced_rules[i], reduced_rules[j]}, rule_alg}},
                                CombAlg::DENY_OVERRIDES});
                }
            }
        }
    }

    // Stratum C: two-policy PDPs from a mixed pool, both combining
    // algorithms at the PDP level.
    std::vector<Policy> pool;
    {
        std::vector<Rule> pool_rules = {
            Rule{std::nullopt, Effect::PERMIT},
            Rule{std::nullopt, Effect::DENY},
            Rule{Target{{}, {}, {}}, Effect::PERMIT},
            Rule{Target{{}, {universe.r1}, {}}, Effect::DENY},
            Rule{Target{{universe.a1}, {universe.r1}, {Action::READ}}, Effect::PERMIT},
            Rule{Target{{universe.a2}, {}, {Action::WRITE}}, Effect::DENY},
        };
        for (const Target& target : policy_targets) {
            for (CombAlg alg : {CombAlg::DENY_OVERRIDES, CombAlg::PERMIT_OVERRIDES}) {
                pool.push_back(Policy{target, {}, alg});
                for (size_t i = 0; i < pool_rules.size(); ++i) {
                    pool.push_back(Policy{target, {pool_rules[i]}, alg});
                    for (size_t j = i + 1; j < pool_rules.size(); ++j) {
                        pool.push_back(Policy{target, {pool_rules[i], pool_rules[j]}, alg});
                    }
                }
            }
        }
    }
    for (size_t i = 0; i < pool.size(); ++i) {
        for (size_t j = i + 1; j < pool.size(); ++j) {
            for (CombAlg pdp_alg : {CombAlg::DENY_OVERRIDES, CombAlg::PERMIT_OVERRIDES}) {
                compare(Pdp{{pool[i], pool[j]}, pdp_alg});
            }
        }
    }

    double elapsed = seconds_since(start);
    check.require(disagreements == 0, "evaluate_pdp disagreed with the reference evaluator");
    check.require(elapsed < 10.0, "runtime exceeded 10 s");
    std::ostringstream os;
    os << cases << " pdp evaluations, 100% agreement, " << elapsed << " s";
    if (check.passed) check.detail = os.str();
    return check;
}

// 5. State invariants under 1,000 random operation sequences.
Check criterion_state_invariants() {
    Check check;
    std::mt19937 rng(20260810);
    testing::SequenceStats stats;
    for (int i = 0; i < 1000; ++i) {
        auto violation = testing::run_random_sequence(rng, 50, &stats);
        if (violation.has_value()) {
            check.require(false, *violation);
            return check;
        }
    }
    std::ostringstream os;
    os << "1000 sequences, " << stats.steps_applied << " steps, " << stats.errors_raised
       << " guarded errors, zero violations";
    check.detail = os.str();
    return check;
}

// 6. Formula evaluator against naive assignment enumeration on every
// reachable configuration of both shipped scenarios.
Check criterion_formula_oracle() {
    Check check;
    long long agreements = 0;

    // Both scenarios' formulas (and their duals, plus a handful of extra
    // shapes) are evaluated on every reachable configuration of both
    // scenarios; the producers they mention exist in each.
    std::vector<Formula> formulas;
    for (const char* name : {"chemical_plant_v1.dcs", "chemical_plant_v2.dcs"}) {
        Scenario scenario = testing::load_scenario(name);
        for (const auto& [pname, property] : scenario.properties) {
            formulas.push_back(property.formula);
            formulas.push_back(negate(property.formula));
        }
    }
    for (const char* extra : {
             "exists PP:INFORMATION . request(compB, coal, READ, {PP}) == DENY",
             "exists x:INFORMATION . exists a:AGENT . event createHA(a, x) -> _",
             "exists x:INFORMATION . exists c:COALITION . "
             "event createPP(x, x) -> x implies request(compA, c, WRITE, {x}) == PERMIT",
         }) {
        FormulaParseResult parsed = parse_formula(extra);
        if (!parsed.ok()) {
            check.require(false, "extra formula failed to parse");
            return check;
        }
        formulas.push_back(*parsed.formula);
        formulas.push_back(negate(*parsed.formula));
    }

    for (const char* name : {"chemical_plant_v1.dcs", "chemical_plant_v2.dcs"}) {
        Scenario scenario = testing::load_scenario(name);
        OpRegistry registry = build_registry(scenario);
        CoalitionState init = initial_state(scenario);
        ExplorationSpace space = reachable(scenario.workflow, init, registry);
        for (const Config& cfg : space.configs) {
            for (const Formula& formula : formulas) {
                bool fast = eval_formula(formula, cfg, registry).value;
                bool naive = testing::naive_eval(formula, cfg, registry);
                if (fast != naive) {
                    check.require(false, std::string("disagreement in ") + name);
                    return check;
                }
                ++agreements;
            }
        }
    }
    std::ostringstream os;
    os << agreements << " formula evaluations, 100% agreement";
    check.detail = os.str();
    return check;
}

// 7. DSL round-trip on generated scenarios plus the goldens; fuzzed
// parsing never crashes.
Check criterion_dsl() {
    Check check;
    std::mt19937 rng(973);
    for (int i = 0; i < 100; ++i) {
        Scenario scenario = testing::random_scenario(rng);
        std::string canonical = serialize_scenario(scenario);
        ParseResult reparsed = parse_scenario(canonical);
        if (!reparsed.ok()) {
            check.require(false, "generated scenario failed to reparse (case " +
                                     std::to_string(i) + ")");
            return check;
        }
        check.require(serialize_scenario(*reparsed.scenario) == canonical,
                      "round-trip mismatch on generated scenario");
    }
    for (const char* name :
         {"chemical_plant_v1.dcs", "chemical_plant_v2.dcs", "chemical_plant_v2_relaxed.dcs"}) {
        std::string canonical = serialize_scenario(testing::load_scenario(name));
        ParseResult reparsed = parse_scenario(canonical);
        if (!reparsed.ok()) {
            check.require(false, std::string("golden failed to reparse: ") + name);
            return check;
        }
        check.require(serialize_scenario(*reparsed.scenario) == canonical,
                      std::string("round-trip mismatch on ") + name);
    }

    std::string seed_text = testing::scenario_text("chemical_plant_v1.dcs");
    const std::string alphabet =
        "abcz {}()[]=,:.#\"->\n\tpolicy agent coalition workflow node if not and or exists";
    int crashes = 0;
    for (int iter = 0; iter < 10000; ++iter) {
        std::string input;
        switch (iter % 3) {
            case 0: {
                input = seed_text;
                int mutations = 1 + static_cast<int>(rng() % 24);
                for (int m = 0; m < mutations; ++m) {
                    input[rng() % input.size()] = alphabet[rng() % alphabet.size()];
                }
                break;
            }
            case 1: {
                size_t len = rng() % 400;
                for (size_t i = 0; i < len; ++i) input.push_back(alphabet[rng() % alphabet.size()]);
                break;
            }
            default: {
                size_t len = rng() % 200;
                for (size_t i = 0; i < len; ++i) input.push_back(static_cast<char>(rng() % 256));
                break;
            }
        }
        try {
            (void)parse_scenario(input);
        } catch (...) {
            ++crashes;
        }
    }
    check.require(crashes == 0, std::to_string(crashes) + " fuzz inputs crashed the parser");
    if (check.passed) {
        check.detail = "103 round-trips, 10000 fuzz inputs without a crash";
    }
    return check;
}

// 8. Byte-identical output across repeated runs and worker counts.
Check criterion_determinism() {
    Check check;
    for (const char* name : {"chemical_plant_v1.dcs", "chemical_plant_v2.dcs"}) {
        std::string path = golden(name);
        auto run_a = run_cli("run " + path);
        auto run_b = run_cli("run " + path);
        check.require(run_a.out == run_b.out, std::string("run output differs for ") + name);

        auto seq = run_cli("check --liveness --safety all " + path);
        auto seq_again = run_cli("check --liveness --safety all " + path);
        auto par = run_cli("check --liveness --safety all --workers 4 " + path);
        check.require(seq.out == seq_again.out,
                      std::string("check output differs across runs for ") + name);
        check.require(seq.out == par.out,
                      std::string("check output differs with --workers 4 for ") + name);
    }
    if (check.passed) check.detail = "run/check byte-identical, workers 1 and 4";
    return check;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Check()> fn;
    };
    const std::vector<Criterion> criteria = {
        {1, "deadlock-reproduction", criterion_deadlock},
        {2, "repaired-process", criterion_repaired},
        {3, "policy-semantics", criterion_policy_semantics},
        {4, "combining-algorithm-oracle", criterion_semantics_oracle},
        {5, "state-invariants", criterion_state_invariants},
        {6, "formula-evaluator-oracle", criterion_formula_oracle},
        {7, "dsl-round-trip", criterion_dsl},
        {8, "determinism", criterion_determinism},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Check result;
        try {
            result = criterion.fn();
        } catch (const std::exception& e) {
            result.passed = false;
            result.detail = std::string("exception: ") + e.what();
        }
        std::cout << "CRITERION " << criterion.id << ' ' << criterion.name << ": "
                  << (result.passed ? "PASS" : "FAIL");
        if (!result.detail.empty()) std::cout << " (" << result.detail << ')';
        std::cout << '\n';
        if (!result.passed) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
