// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "dcv/workflow.hpp"

namespace dcv {

std::string to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::UPDATE: return "UPDATE";
        case NodeKind::CONDITION: return "CONDITION";
        case NodeKind::TERMINAL: return "TERMINAL";
    }
    return "?";
}

ArgExpr ArgExpr::of_term(Term t) {
    ArgExpr a;
    a.kind = Kind::TERM;
    a.term = std::move(t);
    return a;
}

ArgExpr ArgExpr::of_set(std::vector<Term> items) {
    ArgExpr a;
    a.kind = Kind::SET;
    a.items = std::move(items);
    return a;
}

ArgExpr ArgExpr::of_action(Action act) {
    ArgExpr a;
    a.kind = Kind::ACTION;
    a.action = act;
    return a;
}

WorkflowNode make_update(NodeId id, std::string op, std::vector<ArgExpr> args,
                         std::optional<std::string> result_var, NodeId next) {
    WorkflowNode n;
    n.id = std::move(id);
    n.kind = NodeKind::UPDATE;
    n.op = std::move(op);
    n.args = std::move(args);
    n.result_var = std::move(result_var);
    n.next = std::move(next);
    return n;
}

WorkflowNode make_condition(NodeId id, ExprPtr guard, std::optional<NodeId> yes,
                            std::optional<NodeId> no) {
    WorkflowNode n;
    n.id = std::move(id);
    n.kind = NodeKind::CONDITION;
    n.guard = std::move(guard);
    n.yes = std::move(yes);
    n.no = std::move(no);
    return n;
}

WorkflowNode make_terminal(NodeId id, TerminalOutcome outcome, std::string message) {
    WorkflowNode n;
    n.id = std::move(id);
    n.kind = NodeKind::TERMINAL;
    n.outcome = outcome;
    n.message = std::move(message);
    return n;
}

}  // namespace dcv
