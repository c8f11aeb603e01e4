// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcv/expr.hpp"

namespace dcv {

enum class Sort { INFORMATION, AGENT, COALITION };

std::string to_string(Sort sort);
std::optional<Sort> sort_from_string(const std::string& s);

struct Quantifier {
    std::string var;
    Sort sort = Sort::INFORMATION;

    auto operator<=>(const Quantifier&) const = default;
};

/// A property formula: a quantifier prefix over the finite carriers of a
/// configuration and a boolean body. The surface syntax only writes
/// existential prefixes; the FORALL mode exists so that the negation of a
/// formula is again a formula (forall x. B == not exists x. not B).
struct Formula {
    enum class Mode { EXISTS, FORALL };

    std::vector<Quantifier> prefix;
    ExprPtr body;
    Mode mode = Mode::EXISTS;
};

/// Logical negation with the quantifiers dualized.
Formula negate(const Formula& formula);

bool formula_equal(const Formula& a, const Formula& b);

/// Canonical text of an existential formula (the only serializable mode).
std::string to_string(const Formula& formula);

/// Sort-checks variable uses against the prefix: a quantified variable in
/// a request-atom position must carry that position's sort, and no
/// variable may be used at two conflicting sorts. Returns an error
/// message, or nullopt when consistent.
std::optional<std::string> check_sorts(const Formula& formula);

/// Free identifiers of the body that are not quantified (candidates for
/// scenario constants). Wildcards excluded.
std::vector<std::string> free_identifiers(const Formula& formula);

}  // namespace dcv
