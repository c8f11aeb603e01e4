// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "dcv/expr.hpp"

#include <sstream>

namespace dcv {

namespace {

ExprPtr node(BoolExpr::Kind kind) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = kind;
    return e;
}

// Binding strength: atoms bind tightest, implies loosest.
int precedence(BoolExpr::Kind kind) {
    switch (kind) {
        case BoolExpr::Kind::REQUEST:
        case BoolExpr::Kind::EVENT: return 5;
        case BoolExpr::Kind::NOT: return 4;
        case BoolExpr::Kind::AND: return 3;
        case BoolExpr::Kind::OR: return 2;
        case BoolExpr::Kind::IMPLIES: return 1;
    }
    return 0;
}

void write(std::ostream& os, const ExprPtr& e);

// Parenthesizes the child whenever it binds weaker than required, so the
// printed text re-parses to a structurally identical tree.
void write_child(std::ostream& os, const ExprPtr& child, int min_prec) {
    bool parens = precedence(child->kind) < min_prec;
    if (parens) os << '(';
    write(os, child);
    if (parens) os << ')';
}

void write(std::ostream& os, const ExprPtr& e) {
    switch (e->kind) {
        case BoolExpr::Kind::REQUEST: {
            const RequestAtom& a = *e->request;
            os << "request(" << a.subject.text << ", " << a.coalition.text << ", "
               << to_string(a.action) << ", {";
            for (size_t i = 0; i < a.infos.size(); ++i) {
                os << (i ? ", " : "") << a.infos[i].text;
            }
            os << "}) == " << to_string(a.expected);
            break;
        }
        case BoolExpr::Kind::EVENT: {
            const EventAtom& a = *e->event;
            os << "event " << a.op << '(';
            for (size_t i = 0; i < a.args.size(); ++i) {
                os << (i ? ", " : "") << a.args[i].text;
            }
            os << ')';
            if (a.result.has_value()) os << " -> " << a.result->text;
            break;
        }
        case BoolExpr::Kind::NOT:
            os << "not ";
            write_child(os, e->lhs, 4);
            break;
        case BoolExpr::Kind::AND:  // left-associative
            write_child(os, e->lhs, 3);
            os << " and ";
            write_child(os, e->rhs, 4);
            break;
        case BoolExpr::Kind::OR:  // left-associative
            write_child(os, e->lhs, 2);
            os << " or ";
            write_child(os, e->rhs, 3);
            break;
        case BoolExpr::Kind::IMPLIES:  // right-associative
            write_child(os, e->lhs, 2);
            os << " implies ";
            write_child(os, e->rhs, 1);
            break;
    }
}

}  // namespace

ExprPtr BoolExpr::make_request(RequestAtom atom) {
    auto e = node(Kind::REQUEST);
    std::const_pointer_cast<BoolExpr>(e)->request = std::move(atom);
    return e;
}

ExprPtr BoolExpr::make_event(EventAtom atom) {
    auto e = node(Kind::EVENT);
    std::const_pointer_cast<BoolExpr>(e)->event = std::move(atom);
    return e;
}

ExprPtr BoolExpr::make_not(ExprPtr operand) {
    auto e = node(Kind::NOT);
    std::const_pointer_cast<BoolExpr>(e)->lhs = std::move(operand);
    return e;
}

ExprPtr BoolExpr::make_and(ExprPtr lhs, ExprPtr rhs) {
    auto e = node(Kind::AND);
    auto* m = std::const_pointer_cast<BoolExpr>(e).get();
    m->lhs = std::move(lhs);
    m->rhs = std::move(rhs);
    return e;
}

ExprPtr BoolExpr::make_or(ExprPtr lhs, ExprPtr rhs) {
    auto e = node(Kind::OR);
    auto* m = std::const_pointer_cast<BoolExpr>(e).get();
    m->lhs = std::move(lhs);
    m->rhs = std::move(rhs);
    return e;
}

ExprPtr BoolExpr::make_implies(ExprPtr lhs, ExprPtr rhs) {
    auto e = node(Kind::IMPLIES);
    auto* m = std::const_pointer_cast<BoolExpr>(e).get();
    m->lhs = std::move(lhs);
    m->rhs = std::move(rhs);
    return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case BoolExpr::Kind::REQUEST: return a->request == b->request;
        case BoolExpr::Kind::EVENT: return a->event == b->event;
        case BoolExpr::Kind::NOT: return expr_equal(a->lhs, b->lhs);
        default: return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    }
}

std::string to_string(const ExprPtr& expr) {
    std::ostringstream os;
    write(os, expr);
    return os.str();
}

namespace {

template <typename Fn>
void visit(const ExprPtr& e, Fn&& fn) {
    if (!e) return;
    fn(*e);
    visit(e->lhs, fn);
    visit(e->rhs, fn);
}

}  // namespace

std::vector<Term> collect_terms(const ExprPtr& expr) {
    std::vector<Term> out;
    visit(expr, [&](const BoolExpr& e) {
        if (e.kind == BoolExpr::Kind::REQUEST) {
            out.push_back(e.request->subject);
            out.push_back(e.request->coalition);
            for (const Term& t : e.request->infos) out.push_back(t);
        } else if (e.kind == BoolExpr::Kind::EVENT) {
            for (const Term& t : e.event->args) out.push_back(t);
            if (e.event->result.has_value()) out.push_back(*e.event->result);
        }
    });
    return out;
}

std::vector<RequestAtom> collect_request_atoms(const ExprPtr& expr) {
    std::vector<RequestAtom> out;
    visit(expr, [&](const BoolExpr& e) {
        if (e.kind == BoolExpr::Kind::REQUEST) out.push_back(*e.request);
    });
    return out;
}

bool contains_event_atom(const ExprPtr& expr) {
    bool found = false;
    visit(expr, [&](const BoolExpr& e) {
        if (e.kind == BoolExpr::Kind::EVENT) found = true;
    });
    return found;
}

}  // namespace dcv
