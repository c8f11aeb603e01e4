// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "dcv/formula.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dcv {

std::string to_string(Sort sort) {
    switch (sort) {
        case Sort::INFORMATION: return "INFORMATION";
        case Sort::AGENT: return "AGENT";
        case Sort::COALITION: return "COALITION";
    }
    return "?";
}

std::optional<Sort> sort_from_string(const std::string& s) {
    if (s == "INFORMATION") return Sort::INFORMATION;
    if (s == "AGENT") return Sort::AGENT;
    if (s == "COALITION") return Sort::COALITION;
    return std::nullopt;
}

Formula negate(const Formula& formula) {
    Formula out;
    out.prefix = formula.prefix;
    out.body = BoolExpr::make_not(formula.body);
    out.mode = formula.mode == Formula::Mode::EXISTS ? Formula::Mode::FORALL
                                                     : Formula::Mode::EXISTS;
    return out;
}

bool formula_equal(const Formula& a, const Formula& b) {
    return a.prefix == b.prefix && a.mode == b.mode && expr_equal(a.body, b.body);
}

std::string to_string(const Formula& formula) {
    if (formula.mode != Formula::Mode::EXISTS) {
        throw std::invalid_argument("only existential formulas have a surface syntax");
    }
    std::ostringstream os;
    for (const Quantifier& q : formula.prefix) {
        os << "exists " << q.var << ':' << to_string(q.sort) << " . ";
    }
    os << to_string(formula.body);
    return os.str();
}

namespace {

void note_use(std::map<std::string, Sort>& uses, std::optional<std::string>& error,
              const Term& term, Sort required) {
    if (term.is_wildcard() || error.has_value()) return;
    auto [it, inserted] = uses.emplace(term.text, required);
    if (!inserted && it->second != required) {
        error = "'" + term.text + "' is used both as " + to_string(it->second) + " and as " +
                to_string(required);
    }
}

}  // namespace

std::optional<std::string> check_sorts(const Formula& formula) {
    std::map<std::string, Sort> required;
    std::optional<std::string> error;

    std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& e) {
        if (!e || error.has_value()) return;
        if (e->kind == BoolExpr::Kind::REQUEST) {
            note_use(required, error, e->request->subject, Sort::AGENT);
            note_use(required, error, e->request->coalition, Sort::COALITION);
            for (const Term& t : e->request->infos) {
                note_use(required, error, t, Sort::INFORMATION);
            }
        }
        walk(e->lhs);
        walk(e->rhs);
    };
    walk(formula.body);
    if (error.has_value()) return error;

    for (const Quantifier& q : formula.prefix) {
        auto it = required.find(q.var);
        if (it != required.end() && it->second != q.sort) {
            return "'" + q.var + "' is quantified as " + to_string(q.sort) + " but used as " +
                   to_string(it->second);
        }
    }
    return std::nullopt;
}

std::vector<std::string> free_identifiers(const Formula& formula) {
    std::set<std::string> quantified;
    for (const Quantifier& q : formula.prefix) quantified.insert(q.var);
    std::set<std::string> seen;
    std::vector<std::string> out;
    for (const Term& term : collect_terms(formula.body)) {
        if (term.is_wildcard() || quantified.count(term.text) != 0) continue;
        if (seen.insert(term.text).second) out.push_back(term.text);
    }
    return out;
}

}  // namespace dcv
