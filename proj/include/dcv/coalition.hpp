// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <compare>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "dcv/ids.hpp"
#include "dcv/policy.hpp"

namespace dcv {

struct Agent {
    std::set<Information> info;
    Pdp aac;

    auto operator<=>(const Agent&) const = default;
};

struct Coalition {
    std::set<AgentId> agents;
    std::set<Information> info;
    Pdp cac;

    auto operator<=>(const Coalition&) const = default;
};

/// The global abstract state. Operations below never mutate their input;
/// each returns a fresh state, so snapshots are cheap to keep and safe to
/// share across exploration workers.
struct CoalitionState {
    std::map<CoalitionId, Coalition> coals;
    std::map<AgentId, Agent> agents;

    auto operator<=>(const CoalitionState&) const = default;
};

enum class CoreError {
    DuplicateAgent,
    DuplicateCoalition,
    UnknownAgent,
    UnknownCoalition,
    NotOwned,
    InfoNotInCoalition,
    InvalidRequest,
};

std::string to_string(CoreError code);

class CoalitionError : public std::runtime_error {
public:
    CoalitionError(CoreError code, const std::string& detail);

    CoreError code() const { return code_; }

private:
    CoreError code_;
};

/// Registers a new agent carrying `info` and its own access-control PDP.
CoalitionState create_agent(const CoalitionState& state, const AgentId& aid,
                            const std::set<Information>& info, const Pdp& aac);

/// Registers an empty coalition. Its PDP starts with no policies and
/// DENY_OVERRIDES, so every request evaluates to NOT_APPLICABLE.
CoalitionState create_coalition(const CoalitionState& state, const CoalitionId& cid);

/// Adds a known agent to a known coalition. Joining twice is a no-op.
CoalitionState join(const CoalitionState& state, const AgentId& aid, const CoalitionId& cid);

/// Shares information the agent holds into the coalition. The policies of
/// the agent that match each shared item are attached to the coalition
/// PDP, whose combining algorithm is rebuilt as DENY_OVERRIDES.
CoalitionState share_info(const CoalitionState& state, const AgentId& aid,
                          const CoalitionId& cid, const std::set<Information>& items);

/// Evaluates an access request against the coalition PDP. Pure query: the
/// state is left untouched. The requested items must already be shared in
/// the coalition.
Effect request_info(const CoalitionState& state, const AgentId& aid, const CoalitionId& cid,
                    Action act, const std::set<Information>& items);

/// Every policy of the PDP whose target resources contain `item` or are
/// empty (wildcard). Policies are returned whole.
std::set<Policy> get_matching_policies(const Pdp& pdp, const Information& item);

/// MEMBERSHIP invariant: members of every coalition are registered agents.
bool membership_holds(const CoalitionState& state);

/// Canonical textual form of the whole state, sorted by identifier.
/// Injective on state values; used as the deduplication key during
/// exploration and for bit-identity checks in tests.
std::string canonical_key(const CoalitionState& state);

}  // namespace dcv
