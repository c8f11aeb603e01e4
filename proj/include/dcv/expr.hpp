// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcv/policy.hpp"

namespace dcv {

/// An identifier occurrence in a guard, formula or argument list. Whether
/// it denotes a bound workflow variable, a quantified formula variable or
/// a declared constant is decided at evaluation time; `_` is an anonymous
/// wildcard in event patterns.
struct Term {
    std::string text;

    bool is_wildcard() const { return text == "_"; }

    auto operator<=>(const Term&) const = default;
};

/// `request(subject, coalition, ACTION, {info...}) == EFFECT`
struct RequestAtom {
    Term subject;
    Term coalition;
    Action action = Action::READ;
    std::vector<Term> infos;
    Effect expected = Effect::PERMIT;

    auto operator<=>(const RequestAtom&) const = default;
};

/// `event op(arg...) [-> result]`: true iff a matching event occurred.
struct EventAtom {
    std::string op;
    std::vector<Term> args;
    std::optional<Term> result;

    auto operator<=>(const EventAtom&) const = default;
};

class BoolExpr;
using ExprPtr = std::shared_ptr<const BoolExpr>;

/// Immutable boolean expression tree over the two atom kinds.
class BoolExpr {
public:
    enum class Kind { REQUEST, EVENT, NOT, AND, OR, IMPLIES };

    Kind kind;
    std::optional<RequestAtom> request;  // REQUEST
    std::optional<EventAtom> event;      // EVENT
    ExprPtr lhs;                         // NOT operand / left child
    ExprPtr rhs;                         // right child

    static ExprPtr make_request(RequestAtom atom);
    static ExprPtr make_event(EventAtom atom);
    static ExprPtr make_not(ExprPtr operand);
    static ExprPtr make_and(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr make_or(ExprPtr lhs, ExprPtr rhs);
    static ExprPtr make_implies(ExprPtr lhs, ExprPtr rhs);
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// Canonical text; parses back to an equal tree.
std::string to_string(const ExprPtr& expr);

/// Every term occurring in the expression, in evaluation order. Event
/// operation names are not terms.
std::vector<Term> collect_terms(const ExprPtr& expr);

/// Request atoms in left-to-right evaluation order.
std::vector<RequestAtom> collect_request_atoms(const ExprPtr& expr);

bool contains_event_atom(const ExprPtr& expr);

}  // namespace dcv
