// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dcv/checker.hpp"
#include "dcv/engine.hpp"
#include "dcv/formula.hpp"
#include "dcv/workflow.hpp"

namespace dcv {

struct ParseDiagnostic {
    enum class Severity { ERROR, WARNING };

    Severity severity = Severity::ERROR;
    int line = 1;
    int column = 1;
    std::string message;
};

struct AgentDecl {
    AgentId id;
    std::set<Information> info;
    std::vector<std::string> policies;  // references into Scenario::policies
};

struct CoalitionDecl {
    CoalitionId id;
    std::set<AgentId> members;
    /// Information shared into the coalition when the initial state is
    /// built, keyed by the sharing agent.
    std::map<AgentId, std::set<Information>> shares;
};

struct ProducerSpec {
    std::string name;
    AgentId actor;
    std::string mints;  // token prefix; defaults to the producer name
    std::optional<CoalitionId> shares_into;
    std::optional<std::string> attach_policy;
};

struct PropertySpec {
    std::string name;
    Formula formula;  // forbidden-state description
};

struct ScenarioSettings {
    int max_steps = 10000;
    std::size_t state_cap = 1000000;
};

struct Scenario {
    ScenarioSettings settings;
    std::map<std::string, Policy> policies;
    std::map<AgentId, AgentDecl> agents;
    std::map<CoalitionId, CoalitionDecl> coalitions;
    std::map<std::string, ProducerSpec> producers;
    Workflow workflow;
    std::map<std::string, PropertySpec> properties;
};

struct ParseResult {
    std::optional<Scenario> scenario;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return scenario.has_value(); }
};

/// Total: never throws on malformed input. The scenario is present iff
/// no ERROR diagnostics were produced; warnings may accompany a
/// successful parse.
ParseResult parse_scenario(const std::string& source);

/// Canonical text. parse_scenario(serialize_scenario(s)) yields a
/// scenario that serializes identically (round-trip law).
std::string serialize_scenario(const Scenario& scenario);

struct FormulaParseResult {
    std::optional<Formula> formula;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const { return formula.has_value(); }
};

/// Parses a standalone formula: `exists v:SORT .` prefix, atoms
/// `request(a, c, ACTION, {i}) == EFFECT` and `event op(args) [-> r]`,
/// connectives and/not/implies.
FormulaParseResult parse_formula(const std::string& source);

/// The runtime operation registry of a parsed scenario.
OpRegistry build_registry(const Scenario& scenario);

/// Builds the declared initial state: agents with their policies,
/// coalitions with members, then the declared shares.
CoalitionState initial_state(const Scenario& scenario);

/// Same, with the given agents' PDPs replaced before the shares are
/// applied (policy-variant exploration).
CoalitionState initial_state(const Scenario& scenario,
                             const std::map<AgentId, Pdp>& aac_overrides);

std::string render_diagnostics(const std::vector<ParseDiagnostic>& diagnostics);

}  // namespace dcv
