// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "dcv/policy.hpp"

#include <algorithm>
#include <stdexcept>

namespace dcv {

std::string to_string(Action a) {
    switch (a) {
        case Action::READ: return "READ";
        case Action::WRITE: return "WRITE";
    }
    return "?";
}

std::string to_string(Effect e) {
    switch (e) {
        case Effect::PERMIT: return "PERMIT";
        case Effect::DENY: return "DENY";
        case Effect::NOT_APPLICABLE: return "NOT_APPLICABLE";
    }
    return "?";
}

std::string to_string(CombAlg alg) {
    switch (alg) {
        case CombAlg::DENY_OVERRIDES: return "DENY_OVERRIDES";
        case CombAlg::PERMIT_OVERRIDES: return "PERMIT_OVERRIDES";
    }
    return "?";
}

std::optional<Action> action_from_string(const std::string& s) {
    if (s == "READ") return Action::READ;
    if (s == "WRITE") return Action::WRITE;
    return std::nullopt;
}

std::optional<Effect> effect_from_string(const std::string& s) {
    if (s == "PERMIT") return Effect::PERMIT;
    if (s == "DENY") return Effect::DENY;
    if (s == "NOT_APPLICABLE") return Effect::NOT_APPLICABLE;
    return std::nullopt;
}

std::optional<CombAlg> comb_alg_from_string(const std::string& s) {
    if (s == "DENY_OVERRIDES") return CombAlg::DENY_OVERRIDES;
    if (s == "PERMIT_OVERRIDES") return CombAlg::PERMIT_OVERRIDES;
    return std::nullopt;
}

Request make_request(std::set<AgentId> subjects, std::set<Information> resources,
                     std::set<Action> actions) {
    if (subjects.empty() || resources.empty() || actions.empty()) {
        throw std::invalid_argument("request target fields must be non-empty");
    }
    return Request{Target{std::move(subjects), std::move(resources), std::move(actions)}};
}

namespace {

template <typename T>
bool covered(const std::set<T>& requested, const std::set<T>& scope) {
    if (scope.empty()) {
        return true;  // wildcard
    }
    return std::includes(scope.begin(), scope.end(), requested.begin(), requested.end());
}

}  // namespace

bool matches(const Target& request_target, const Target& t) {
    return covered(request_target.subjects, t.subjects) &&
           covered(request_target.resources, t.resources) &&
           covered(request_target.actions, t.actions);
}

Effect evaluate_rule(const Rule& rule, const Request& request) {
    if (!rule.target.has_value()) {
        return rule.effect;
    }
    if (matches(request.target, *rule.target)) {
        return rule.effect;
    }
    return Effect::NOT_APPLICABLE;
}

Effect combine(CombAlg alg, const std::vector<Effect>& effects) {
    bool any_permit = false;
    bool any_deny = false;
    for (Effect e : effects) {
        any_permit = any_permit || e == Effect::PERMIT;
        any_deny = any_deny || e == Effect::DENY;
    }
    if (alg == CombAlg::DENY_OVERRIDES) {
        if (any_deny) return Effect::DENY;
        if (any_permit) return Effect::PERMIT;
        return Effect::NOT_APPLICABLE;
    }
    if (any_permit) return Effect::PERMIT;
    if (any_deny) return Effect::DENY;
    return Effect::NOT_APPLICABLE;
}

Effect evaluate_policy(const Policy& policy, const Request& request) {
    if (!matches(request.target, policy.target)) {
        return Effect::NOT_APPLICABLE;
    }
    std::vector<Effect> effects;
    effects.reserve(policy.rules.size());
    for (const Rule& rule : policy.rules) {  // std::set iterates in canonical order
        effects.push_back(evaluate_rule(rule, request));
    }
    return combine(policy.rule_comb_alg, effects);
}

Effect evaluate_pdp(const Request& request, const Pdp& pdp) {
    std::vector<Effect> effects;
    effects.reserve(pdp.policies.size());
    for (const Policy& policy : pdp.policies) {
        effects.push_back(evaluate_policy(policy, request));
    }
    return combine(pdp.policy_comb_alg, effects);
}

}  // namespace dcv
