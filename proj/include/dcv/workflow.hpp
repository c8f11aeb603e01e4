// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcv/expr.hpp"

namespace dcv {

struct NodeId {
    std::string value;

    auto operator<=>(const NodeId&) const = default;
};

enum class NodeKind { UPDATE, CONDITION, TERMINAL };

enum class TerminalOutcome { SUCCESS, ERROR };

std::string to_string(NodeKind kind);

/// An argument expression of an update node: a plain term, an information
/// set literal `{i1, i2}` or an action literal.
struct ArgExpr {
    enum class Kind { TERM, SET, ACTION };

    Kind kind = Kind::TERM;
    Term term;                    // TERM
    std::vector<Term> items;      // SET
    Action action = Action::READ; // ACTION

    static ArgExpr of_term(Term t);
    static ArgExpr of_set(std::vector<Term> items);
    static ArgExpr of_action(Action a);

    auto operator<=>(const ArgExpr&) const = default;
};

/// One workflow node. `kind` selects which of the field groups below is
/// meaningful; the scenario grammar guarantees the shape invariants
/// (updates carry exactly one outgoing edge, terminals none).
struct WorkflowNode {
    NodeId id;
    NodeKind kind = NodeKind::TERMINAL;

    // UPDATE
    std::string op;
    std::vector<ArgExpr> args;
    std::optional<std::string> result_var;
    std::optional<NodeId> next;

    // CONDITION
    ExprPtr guard;
    std::optional<NodeId> yes;
    std::optional<NodeId> no;

    // TERMINAL
    TerminalOutcome outcome = TerminalOutcome::SUCCESS;
    std::string message;
};

struct Workflow {
    std::map<NodeId, WorkflowNode> nodes;
    NodeId entry;
};

WorkflowNode make_update(NodeId id, std::string op, std::vector<ArgExpr> args,
                         std::optional<std::string> result_var, NodeId next);
WorkflowNode make_condition(NodeId id, ExprPtr guard, std::optional<NodeId> yes,
                            std::optional<NodeId> no);
WorkflowNode make_terminal(NodeId id, TerminalOutcome outcome, std::string message = "");

}  // namespace dcv
