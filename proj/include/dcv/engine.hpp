// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dcv/coalition.hpp"
#include "dcv/workflow.hpp"

namespace dcv {

/// A runtime value bound to a workflow variable or recorded in an event.
/// Values compare by kind and canonical text; an information-set value
/// renders as `{a, b}` with sorted elements.
struct Value {
    enum class Kind { AGENT, COALITION, INFO, EFFECT, ACTION, INFO_SET, FAULT };

    Kind kind = Kind::INFO;
    std::string text;

    static Value of_agent(const AgentId& id);
    static Value of_coalition(const CoalitionId& id);
    static Value of_info(const Information& item);
    static Value of_effect(Effect e);
    static Value of_action(Action a);
    static Value of_info_set(const std::set<Information>& items);
    static Value of_fault(CoreError code);

    auto operator<=>(const Value&) const = default;
};

/// One executed update operation. Guard evaluations are recorded in
/// traces, not here: the history holds exactly one event per update node
/// traversed.
struct Event {
    NodeId node;
    std::string op;
    std::vector<Value> args;
    std::optional<Value> result;

    auto operator<=>(const Event&) const = default;
};

/// A producer operation declared by the scenario: mints a fresh
/// information token named `<mint_prefix>#<n>`, gives it to the actor and
/// optionally shares it into a coalition. When a policy is attached, a
/// copy specialized to the minted token (the mint prefix is substituted
/// in every target resource set) is added to the actor's PDP before the
/// share, so the ordinary matching rules carry it into the coalition.
struct ProducerDecl {
    std::string name;
    AgentId actor;
    std::string mint_prefix;
    std::optional<CoalitionId> shares_into;
    std::optional<Policy> attach_policy;
};

/// Resolution context for workflow execution: producers plus the declared
/// identifier universe used to resolve constant terms.
struct OpRegistry {
    std::map<std::string, ProducerDecl> producers;
    std::set<AgentId> agents;
    std::set<CoalitionId> coalitions;
    std::set<Information> infos;

    static const std::set<std::string>& builtin_ops();

    bool is_builtin(const std::string& op) const;
    bool is_registered(const std::string& op) const;
};

/// A runtime configuration: current node, state snapshot, variable
/// bindings, event history and per-prefix mint counters.
struct Config {
    NodeId node;
    CoalitionState state;
    std::map<std::string, Value> bindings;
    std::vector<Event> history;
    std::map<std::string, int> mint_counters;

    bool operator==(const Config& other) const;
};

/// Node reached after a runtime fault; lexically unreachable from
/// scenario files, behaves as an ERROR terminal.
const NodeId& fault_node();

/// Deduplication key: node, canonical state, bindings and mint counters.
/// Event history is deliberately excluded.
std::string config_key(const Config& cfg);

// ---------------------------------------------------------------------
// Workflow validation

struct ValidationIssue {
    enum class Severity { ERROR, WARNING };

    Severity severity = Severity::ERROR;
    std::string code;
    NodeId node;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const;  // no errors (warnings allowed)
    std::vector<ValidationIssue> errors() const;
    std::vector<ValidationIssue> warnings() const;
};

/// Structural checks: entry exists, edges resolve, all nodes reachable,
/// operations registered with plausible argument shapes, and every
/// variable bound on all paths before use. Conditions lacking a branch
/// are reported as MISSING_BRANCH warnings.
ValidationReport validate_workflow(const Workflow& workflow, const OpRegistry& registry);

// ---------------------------------------------------------------------
// Execution

/// A resolved request made while evaluating a guard, with its outcome.
struct GuardEval {
    AgentId subject;
    CoalitionId coalition;
    Action action = Action::READ;
    std::set<Information> infos;
    Effect actual = Effect::NOT_APPLICABLE;
};

class EngineError : public std::runtime_error {
public:
    explicit EngineError(const std::string& what) : std::runtime_error(what) {}
};

class SortMismatchError : public EngineError {
public:
    explicit SortMismatchError(const std::string& what) : EngineError(what) {}
};

/// Maps a term to its value, or nullopt when unknown.
using TermResolver = std::function<std::optional<Value>(const Term&)>;

struct ExprEvalOptions {
    /// Formulas treat a request that violates the request_info
    /// preconditions as a false atom; guards propagate the error.
    bool illposed_request_is_false = false;
    /// Formulas treat an unresolvable constant as a false atom; guards
    /// propagate the error.
    bool unresolved_is_false = false;
};

/// Evaluates a boolean expression over a state snapshot and an event
/// history. Every atom is evaluated (no short-circuiting); request atoms
/// are appended to `evals` in evaluation order when non-null.
bool eval_expr(const ExprPtr& expr, const CoalitionState& state,
               const std::vector<Event>& history, const TermResolver& resolve,
               std::vector<GuardEval>* evals, const ExprEvalOptions& options);

/// One trace line: what happened when the run visited `node`.
struct TraceStep {
    int index = 0;
    NodeId node;
    NodeKind kind = NodeKind::TERMINAL;

    std::optional<Event> event;           // UPDATE
    std::optional<std::string> result_var;
    std::vector<GuardEval> guard_evals;   // CONDITION
    std::optional<bool> guard_value;      // CONDITION
    std::optional<NodeId> branch;         // CONDITION; nullopt when stuck
    std::optional<std::string> fault;     // CONDITION whose guard errored
    std::optional<TerminalOutcome> terminal;
    std::string message;                  // TERMINAL
};

struct RunOutcome {
    enum class Kind { COMPLETED_SUCCESS, COMPLETED_ERROR, DEADLOCK, STEP_LIMIT };

    Kind kind = Kind::COMPLETED_SUCCESS;
    NodeId at;

    bool operator==(const RunOutcome&) const = default;
};

std::string to_string(const RunOutcome& outcome);

struct Trace {
    std::vector<TraceStep> steps;
    RunOutcome outcome;
    Config final_config;
};

Config make_initial_config(const Workflow& workflow, CoalitionState init);

/// Executes one update node: built-ins delegate to the coalition
/// operations, producers mint and share. A coalition error or an
/// unresolvable argument does not throw; it records a fault event and
/// moves the configuration to the implicit error terminal.
Config apply_update(const Config& cfg, const WorkflowNode& node, const OpRegistry& registry);

struct GuardResult {
    bool value = false;
    std::vector<GuardEval> evals;
};

/// Evaluates a guard against the configuration. Pure. Throws
/// CoalitionError when a request atom is ill-posed and EngineError for
/// unresolvable terms.
GuardResult eval_guard(const Config& cfg, const ExprPtr& guard, const OpRegistry& registry);

/// Successor set of a configuration: singleton for updates and branching
/// conditions, empty for terminals (legitimate end) and for conditions
/// whose required branch is absent (stuck).
std::vector<Config> step(const Config& cfg, const Workflow& workflow,
                         const OpRegistry& registry);

/// Successor plus the trace line describing the visit. `next` is empty
/// for terminal, stuck and guard-faulted configurations; `stuck` marks
/// the conditions whose required branch is absent.
struct StepResult {
    std::optional<Config> next;
    TraceStep trace;
    bool stuck = false;
    bool guard_fault = false;
};

StepResult step_with_trace(const Config& cfg, const Workflow& workflow,
                           const OpRegistry& registry, int step_index);

/// Runs the workflow from a fresh configuration until it terminates,
/// sticks or exceeds `max_steps`. The workflow must validate without
/// errors.
Trace run(const Workflow& workflow, const CoalitionState& init, const OpRegistry& registry,
          int max_steps = 10000);

// ---------------------------------------------------------------------
// Plain-text rendering (stable; golden tests depend on every byte)

std::string render_step(const TraceStep& step);
std::string render_trace(const Trace& trace);

}  // namespace dcv
