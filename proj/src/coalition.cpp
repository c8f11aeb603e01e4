// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "dcv/coalition.hpp"

#include <algorithm>
#include <sstream>

namespace dcv {

std::string to_string(CoreError code) {
    switch (code) {
        case CoreError::DuplicateAgent: return "DuplicateAgent";
        case CoreError::DuplicateCoalition: return "DuplicateCoalition";
        case CoreError::UnknownAgent: return "UnknownAgent";
        case CoreError::UnknownCoalition: return "UnknownCoalition";
        case CoreError::NotOwned: return "NotOwned";
        case CoreError::InfoNotInCoalition: return "InfoNotInCoalition";
        case CoreError::InvalidRequest: return "InvalidRequest";
    }
    return "?";
}

CoalitionError::CoalitionError(CoreError code, const std::string& detail)
    : std::runtime_error(to_string(code) + ": " + detail), code_(code) {}

namespace {

const Agent& known_agent(const CoalitionState& state, const AgentId& aid) {
    auto it = state.agents.find(aid);
    if (it == state.agents.end()) {
        throw CoalitionError(CoreError::UnknownAgent, aid.value);
    }
    return it->second;
}

const Coalition& known_coalition(const CoalitionState& state, const CoalitionId& cid) {
    auto it = state.coals.find(cid);
    if (it == state.coals.end()) {
        throw CoalitionError(CoreError::UnknownCoalition, cid.value);
    }
    return it->second;
}

}  // namespace

CoalitionState create_agent(const CoalitionState& state, const AgentId& aid,
                            const std::set<Information>& info, const Pdp& aac) {
    if (state.agents.count(aid) != 0) {
        throw CoalitionError(CoreError::DuplicateAgent, aid.value);
    }
    CoalitionState next = state;
    next.agents.emplace(aid, Agent{info, aac});
    return next;
}

CoalitionState create_coalition(const CoalitionState& state, const CoalitionId& cid) {
    if (state.coals.count(cid) != 0) {
        throw CoalitionError(CoreError::DuplicateCoalition, cid.value);
    }
    CoalitionState next = state;
    next.coals.emplace(cid, Coalition{{}, {}, Pdp{{}, CombAlg::DENY_OVERRIDES}});
    return next;
}

CoalitionState join(const CoalitionState& state, const AgentId& aid, const CoalitionId& cid) {
    known_agent(state, aid);
    known_coalition(state, cid);
    CoalitionState next = state;
    next.coals.at(cid).agents.insert(aid);
    return next;
}

CoalitionState share_info(const CoalitionState& state, const AgentId& aid,
                          const CoalitionId& cid, const std::set<Information>& items) {
    const Agent& agent = known_agent(state, aid);
    known_coalition(state, cid);
    for (const Information& item : items) {
        if (agent.info.count(item) == 0) {
            throw CoalitionError(CoreError::NotOwned,
                                 aid.value + " does not hold " + item.item);
        }
    }
    CoalitionState next = state;
    Coalition& coal = next.coals.at(cid);
    coal.info.insert(items.begin(), items.end());
    for (const Information& item : items) {
        std::set<Policy> matching = get_matching_policies(agent.aac, item);
        coal.cac.policies.insert(matching.begin(), matching.end());
    }
    // ShareInfo always rebuilds the coalition PDP with DENY_OVERRIDES,
    // even when the shared set is empty.
    coal.cac.policy_comb_alg = CombAlg::DENY_OVERRIDES;
    return next;
}

Effect request_info(const CoalitionState& state, const AgentId& aid, const CoalitionId& cid,
                    Action act, const std::set<Information>& items) {
    known_agent(state, aid);
    const Coalition& coal = known_coalition(state, cid);
    if (items.empty()) {
        throw CoalitionError(CoreError::InvalidRequest, "empty information set");
    }
    for (const Information& item : items) {
        if (coal.info.count(item) == 0) {
            throw CoalitionError(CoreError::InfoNotInCoalition,
                                 item.item + " not shared in " + cid.value);
        }
    }
    Request request = make_request({aid}, items, {act});
    return evaluate_pdp(request, coal.cac);
}

std::set<Policy> get_matching_policies(const Pdp& pdp, const Information& item) {
    std::set<Policy> result;
    for (const Policy& policy : pdp.policies) {
        if (policy.target.resources.empty() || policy.target.resources.count(item) != 0) {
            result.insert(policy);
        }
    }
    return result;
}

bool membership_holds(const CoalitionState& state) {
    for (const auto& [cid, coal] : state.coals) {
        for (const AgentId& aid : coal.agents) {
            if (state.agents.count(aid) == 0) {
                return false;
            }
        }
    }
    return true;
}

namespace {

void write_ids(std::ostream& os, const std::set<AgentId>& ids) {
    os << '[';
    bool first = true;
    for (const auto& id : ids) {
        os << (first ? "" : ", ") << id.value;
        first = false;
    }
    os << ']';
}

void write_infos(std::ostream& os, const std::set<Information>& items) {
    os << '[';
    bool first = true;
    for (const auto& item : items) {
        os << (first ? "" : ", ") << item.item;
        first = false;
    }
    os << ']';
}

void write_actions(std::ostream& os, const std::set<Action>& actions) {
    os << '[';
    bool first = true;
    for (Action a : actions) {
        os << (first ? "" : ", ") << to_string(a);
        first = false;
    }
    os << ']';
}

void write_target(std::ostream& os, const Target& t) {
    os << "(subjects=";
    write_ids(os, t.subjects);
    os << ", resources=";
    write_infos(os, t.resources);
    os << ", actions=";
    write_actions(os, t.actions);
    os << ')';
}

void write_pdp(std::ostream& os, const Pdp& pdp) {
    os << "pdp{" << to_string(pdp.policy_comb_alg);
    for (const Policy& p : pdp.policies) {
        os << " policy{target=";
        write_target(os, p.target);
        os << " " << to_string(p.rule_comb_alg);
        for (const Rule& r : p.rules) {
            os << " rule{";
            if (r.target.has_value()) {
                write_target(os, *r.target);
                os << ' ';
            }
            os << to_string(r.effect) << '}';
        }
        os << '}';
    }
    os << '}';
}

}  // namespace

std::string canonical_key(const CoalitionState& state) {
    std::ostringstream os;
    os << "agents{";
    for (const auto& [aid, agent] : state.agents) {
        os << aid.value << ":info=";
        write_infos(os, agent.info);
        os << ' ';
        write_pdp(os, agent.aac);
        os << ';';
    }
    os << "} coals{";
    for (const auto& [cid, coal] : state.coals) {
        os << cid.value << ":agents=";
        write_ids(os, coal.agents);
        os << " info=";
        write_infos(os, coal.info);
        os << ' ';
        write_pdp(os, coal.cac);
        os << ';';
    }
    os << '}';
    return os.str();
}

}  // namespace dcv
