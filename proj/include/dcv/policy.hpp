// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dcv/ids.hpp"

namespace dcv {

enum class Action { READ, WRITE };

enum class Effect { PERMIT, DENY, NOT_APPLICABLE };

enum class CombAlg { DENY_OVERRIDES, PERMIT_OVERRIDES };

std::string to_string(Action a);
std::string to_string(Effect e);
std::string to_string(CombAlg alg);

std::optional<Action> action_from_string(const std::string& s);
std::optional<Effect> effect_from_string(const std::string& s);
std::optional<CombAlg> comb_alg_from_string(const std::string& s);

/// Scope of a rule or policy. An empty field acts as a wildcard and
/// matches every request.
struct Target {
    std::set<AgentId> subjects;
    std::set<Information> resources;
    std::set<Action> actions;

    auto operator<=>(const Target&) const = default;
};

/// A concrete access query. Unlike rule/policy targets, every field must
/// be non-empty: requests name actual subjects, resources and actions.
struct Request {
    Target target;

    auto operator<=>(const Request&) const = default;
};

/// Builds a request, enforcing the non-emptiness invariant.
/// Throws std::invalid_argument on an empty field.
Request make_request(std::set<AgentId> subjects, std::set<Information> resources,
                     std::set<Action> actions);

/// A rule states PERMIT or DENY; NOT_APPLICABLE only ever arises from a
/// target that does not match.
struct Rule {
    std::optional<Target> target;
    Effect effect = Effect::PERMIT;

    auto operator<=>(const Rule&) const = default;
};

struct Policy {
    Target target;  // mandatory
    std::set<Rule> rules;
    CombAlg rule_comb_alg = CombAlg::DENY_OVERRIDES;

    auto operator<=>(const Policy&) const = default;
};

struct Pdp {
    std::set<Policy> policies;
    CombAlg policy_comb_alg = CombAlg::DENY_OVERRIDES;

    auto operator<=>(const Pdp&) const = default;
};

/// True iff every field of the request target is covered by `t`, where an
/// empty field of `t` covers everything.
bool matches(const Target& request_target, const Target& t);

/// Targetless rules fire for every request; targeted rules fire only on a
/// match, otherwise NOT_APPLICABLE.
Effect evaluate_rule(const Rule& rule, const Request& request);

/// Folds a list of effects under the given combining algorithm.
/// DENY_OVERRIDES: DENY if any DENY, else PERMIT if any PERMIT, else
/// NOT_APPLICABLE. PERMIT_OVERRIDES is the dual. An empty list yields
/// NOT_APPLICABLE.
Effect combine(CombAlg alg, const std::vector<Effect>& effects);

/// NOT_APPLICABLE when the policy target misses; otherwise the combined
/// effects of all rules in canonical rule order.
Effect evaluate_policy(const Policy& policy, const Request& request);

/// Combines the effects of all policies under the PDP's combining
/// algorithm, in canonical policy order.
Effect evaluate_pdp(const Request& request, const Pdp& pdp);

}  // namespace dcv
