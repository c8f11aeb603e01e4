// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <compare>
#include <string>

namespace dcv {

/// Checks the lexical rules for scenario-declared identifiers:
/// 1..64 characters drawn from [A-Za-z0-9_-].
bool is_valid_identifier(const std::string& s);

/// Checks an information token name: either a declared identifier or a
/// minted token of the form <identifier>#<digits>. The '#' is not part of
/// the declared-identifier charset, so minted tokens can never collide
/// with names written in a scenario file.
bool is_valid_token(const std::string& s);

struct AgentId {
    std::string value;

    auto operator<=>(const AgentId&) const = default;
};

struct CoalitionId {
    std::string value;

    auto operator<=>(const CoalitionId&) const = default;
};

/// Unstructured information item; equality is by identifier only.
struct Information {
    std::string item;

    auto operator<=>(const Information&) const = default;
};

}  // namespace dcv
