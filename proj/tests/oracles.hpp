// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// Independent reference evaluators used as oracles by the unit and
// acceptance suites. Everything here re-derives the decision semantics
// from scratch and must stay decoupled from the library implementation:
// only the public data types are shared.

#pragma once

#include <array>
#include <vector>

#include "dcv/coalition.hpp"
#include "dcv/policy.hpp"

namespace dcv::testing {

// Exhaustive truth table for both combining algorithms over every
// non-empty effect list of length <= 3 (39 rows). Derived by hand from
// the rule "deny-overrides prefers DENY, permit-overrides prefers
// PERMIT, NOT_APPLICABLE only when nothing else is present".
struct CombineCase {
    std::vector<Effect> input;
    Effect deny_overrides;
    Effect permit_overrides;
};

inline const std::vector<CombineCase>& combine_truth_table() {
    constexpr Effect P = Effect::PERMIT;
    constexpr Effect D = Effect::DENY;
    constexpr Effect N = Effect::NOT_APPLICABLE;
    static const std::vector<CombineCase> table = {
        // length 1
        {{P}, P, P},
        {{D}, D, D},
        {{N}, N, N},
        // length 2
        {{P, P}, P, P},
        {{P, D}, D, P},
        {{P, N}, P, P},
        {{D, P}, D, P},
        {{D, D}, D, D},
        {{D, N}, D, D},
        {{N, P}, P, P},
        {{N, D}, D, D},
        {{N, N}, N, N},
        // length 3
        {{P, P, P}, P, P},
        {{P, P, D}, D, P},
        {{P, P, N}, P, P},
        {{P, D, P}, D, P},
        {{P, D, D}, D, P},
        {{P, D, N}, D, P},
        {{P, N, P}, P, P},
        {{P, N, D}, D, P},
        {{P, N, N}, P, P},
        {{D, P, P}, D, P},
        {{D, P, D}, D, P},
        {{D, P, N}, D, P},
        {{D, D, P}, D, P},
        {{D, D, D}, D, D},
        {{D, D, N}, D, D},
        {{D, N, P}, D, P},
        {{D, N, D}, D, D},
        {{D, N, N}, D, D},
        {{N, P, P}, P, P},
        {{N, P, D}, D, P},
        {{N, P, N}, P, P},
        {{N, D, P}, D, P},
        {{N, D, D}, D, D},
        {{N, D, N}, D, D},
        {{N, N, P}, P, P},
        {{N, N, D}, D, D},
        {{N, N, N}, N, N},
    };
    return table;
}

// ---------------------------------------------------------------------
// Reference decision semantics, written with plain loops and element
// membership checks rather than the library's subset/fold helpers.

inline bool oracle_field_covers(const std::set<AgentId>& scope, const std::set<AgentId>& req) {
    if (scope.empty()) return true;
    for (const auto& v : req) {
        if (scope.find(v) == scope.end()) return false;
    }
    return true;
}

inline bool oracle_field_covers(const std::set<Information>& scope,
                                const std::set<Information>& req) {
    if (scope.empty()) return true;
    for (const auto& v : req) {
        if (scope.find(v) == scope.end()) return false;
    }
    return true;
}

inline bool oracle_field_covers(const std::set<Action>& scope, const std::set<Action>& req) {
    if (scope.empty()) return true;
    for (const auto& v : req) {
        if (scope.find(v) == scope.end()) return false;
    }
    return true;
}

inline bool oracle_matches(const Target& req, const Target& scope) {
    return oracle_field_covers(scope.subjects, req.subjects) &&
           oracle_field_covers(scope.resources, req.resources) &&
           oracle_field_covers(scope.actions, req.actions);
}

inline Effect oracle_fold(CombAlg alg, const std::vector<Effect>& effects) {
    int permits = 0;
    int denies = 0;
    for (Effect e : effects) {
        if (e == Effect::PERMIT) ++permits;
        if (e == Effect::DENY) ++denies;
    }
    if (alg == CombAlg::DENY_OVERRIDES) {
        return denies > 0 ? Effect::DENY
                          : (permits > 0 ? Effect::PERMIT : Effect::NOT_APPLICABLE);
    }
    return permits > 0 ? Effect::PERMIT : (denies > 0 ? Effect::DENY : Effect::NOT_APPLICABLE);
}

inline Effect oracle_evaluate_policy(const Policy& policy, const Request& request) {
    if (!oracle_matches(request.target, policy.target)) {
        return Effect::NOT_APPLICABLE;
    }
    std::vector<Effect> effects;
    for (const Rule& rule : policy.rules) {
        if (!rule.target.has_value() || oracle_matches(request.target, *rule.target)) {
            effects.push_back(rule.effect);
        } else {
            effects.push_back(Effect::NOT_APPLICABLE);
        }
    }
    return oracle_fold(policy.rule_comb_alg, effects);
}

inline Effect oracle_evaluate_pdp(const Request& request, const Pdp& pdp) {
    std::vector<Effect> effects;
    for (const Policy& policy : pdp.policies) {
        effects.push_back(oracle_evaluate_policy(policy, request));
    }
    return oracle_fold(pdp.policy_comb_alg, effects);
}

// ---------------------------------------------------------------------
// Small-universe enumeration: 2 agents x 2 resources x 2 actions.

struct SmallUniverse {
    AgentId a1{"a1"};
    AgentId a2{"a2"};
    Information r1{"r1"};
    Information r2{"r2"};

    std::vector<std::set<AgentId>> subject_sets() const {
        return {{}, {a1}, {a2}, {a1, a2}};
    }
    std::vector<std::set<Information>> resource_sets() const {
        return {{}, {r1}, {r2}, {r1, r2}};
    }
    std::vector<std::set<Action>> action_sets() const {
        return {{}, {Action::READ}, {Action::WRITE}, {Action::READ, Action::WRITE}};
    }

    /// All 64 targets over the universe.
    std::vector<Target> all_targets() const {
        std::vector<Target> out;
        for (const auto& s : subject_sets())
            for (const auto& r : resource_sets())
                for (const auto& a : action_sets()) out.push_back(Target{s, r, a});
        return out;
    }

    /// All 130 rules: every target plus the absent target, each with both
    /// rule effects.
    std::vector<Rule> all_rules() const {
        std::vector<Rule> out;
        out.push_back(Rule{std::nullopt, Effect::PERMIT});
        out.push_back(Rule{std::nullopt, Effect::DENY});
        for (const auto& t : all_targets()) {
            out.push_back(Rule{t, Effect::PERMIT});
            out.push_back(Rule{t, Effect::DENY});
        }
        return out;
    }

    /// All 27 well-formed requests (non-empty fields).
    std::vector<Request> all_requests() const {
        std::vector<Request> out;
        for (const auto& s : subject_sets())
            for (const auto& r : resource_sets())
                for (const auto& a : action_sets()) {
                    if (s.empty() || r.empty() || a.empty()) continue;
                    out.push_back(Request{Target{s, r, a}});
                }
        return out;
    }
};

}  // namespace dcv::testing
