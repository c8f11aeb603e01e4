// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// Random valid-scenario generator for the round-trip property tests.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "dcv/scenario.hpp"

namespace dcv::testing {

inline Scenario random_scenario(std::mt19937& rng) {
    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    auto coin = [&] { return pick(0, 1) == 1; };

    Scenario s;
    s.settings.max_steps = pick(1, 10000);
    s.settings.state_cap = static_cast<std::size_t>(pick(1, 1000000));

    // Identifier pools. Kinds get distinct prefixes so the cross-kind
    // uniqueness rules hold by construction.
    int n_agents = pick(1, 4);
    int n_infos = pick(0, 5);
    int n_coals = pick(1, 2);
    std::vector<AgentId> agents;
    for (int i = 0; i < n_agents; ++i) agents.push_back(AgentId{"ag" + std::to_string(i)});
    std::vector<Information> infos;
    for (int i = 0; i < n_infos; ++i) infos.push_back(Information{"doc" + std::to_string(i)});
    std::vector<CoalitionId> coals;
    for (int i = 0; i < n_coals; ++i) coals.push_back(CoalitionId{"co" + std::to_string(i)});

    // Distribute holdings first so policy targets and formulas only name
    // items some agent actually declares.
    std::map<AgentId, std::set<Information>> holdings;
    std::set<Information> held;
    for (const AgentId& a : agents) {
        for (const Information& i : infos) {
            if (coin()) {
                holdings[a].insert(i);
                held.insert(i);
            }
        }
    }
    std::vector<Information> held_list(held.begin(), held.end());

    auto random_target = [&](bool allow_mint) {
        Target t;
        for (const AgentId& a : agents) {
            if (pick(0, 2) == 0) t.subjects.insert(a);
        }
        for (const Information& i : held_list) {
            if (pick(0, 2) == 0) t.resources.insert(i);
        }
        if (allow_mint && coin()) t.resources.insert(Information{"tok0"});
        if (coin()) t.actions.insert(Action::READ);
        if (coin()) t.actions.insert(Action::WRITE);
        return t;
    };

    int n_policies = pick(0, 3);
    for (int i = 0; i < n_policies; ++i) {
        Policy p;
        p.target = random_target(true);
        p.rule_comb_alg = coin() ? CombAlg::PERMIT_OVERRIDES : CombAlg::DENY_OVERRIDES;
        int n_rules = pick(0, 3);
        for (int r = 0; r < n_rules; ++r) {
            Rule rule;
            if (coin()) rule.target = random_target(true);
            rule.effect = coin() ? Effect::PERMIT : Effect::DENY;
            p.rules.insert(rule);
        }
        s.policies.emplace("pol" + std::to_string(i), std::move(p));
    }
    std::vector<std::string> policy_names;
    for (const auto& [name, p] : s.policies) policy_names.push_back(name);

    for (const AgentId& a : agents) {
        AgentDecl decl;
        decl.id = a;
        decl.info = holdings[a];
        if (!policy_names.empty() && coin()) {
            decl.policies.push_back(policy_names[pick(0, (int)policy_names.size() - 1)]);
        }
        s.agents.emplace(a, std::move(decl));
    }

    for (const CoalitionId& c : coals) {
        CoalitionDecl decl;
        decl.id = c;
        for (const AgentId& a : agents) {
            if (coin()) decl.members.insert(a);
        }
        // Shares must come from the agent's declared holdings.
        for (const AgentId& a : agents) {
            const auto& held = s.agents.at(a).info;
            if (held.empty() || !coin()) continue;
            std::set<Information> shared;
            for (const Information& i : held) {
                if (coin()) shared.insert(i);
            }
            if (!shared.empty()) decl.shares.emplace(a, std::move(shared));
        }
        s.coalitions.emplace(c, std::move(decl));
    }

    // One producer so workflows always have an update op available.
    ProducerSpec producer;
    producer.name = "make0";
    producer.actor = agents[static_cast<size_t>(pick(0, n_agents - 1))];
    producer.mints = "tok0";
    if (coin()) producer.shares_into = coals[static_cast<size_t>(pick(0, n_coals - 1))];
    if (!policy_names.empty() && coin()) {
        producer.attach_policy = policy_names[static_cast<size_t>(pick(0, (int)policy_names.size() - 1))];
    }
    s.producers.emplace(producer.name, producer);

    // Linear workflow with an optional final condition. Every variable is
    // bound before use by construction.
    int n_updates = pick(1, 4);
    std::vector<std::string> bound_vars;
    for (int i = 0; i < n_updates; ++i) {
        NodeId id{"n" + std::to_string(i)};
        NodeId next{"n" + std::to_string(i + 1)};
        int shape = pick(0, 3);
        if (shape == 1 && !held_list.empty()) {
            // Built-in share with a set-literal argument.
            const AgentId& owner = agents[static_cast<size_t>(pick(0, n_agents - 1))];
            std::vector<Term> items;
            for (const Information& held_item : s.agents.at(owner).info) {
                if (coin()) items.push_back(Term{held_item.item});
            }
            s.workflow.nodes.emplace(
                id, make_update(id, "share_info",
                                {ArgExpr::of_term(Term{owner.value}),
                                 ArgExpr::of_term(Term{
                                     coals[static_cast<size_t>(pick(0, n_coals - 1))].value}),
                                 ArgExpr::of_set(std::move(items))},
                                std::nullopt, next));
            continue;
        }
        if (shape == 2 && !held_list.empty()) {
            // Built-in decision query with an action literal.
            std::string result = "v" + std::to_string(i);
            s.workflow.nodes.emplace(
                id,
                make_update(
                    id, "request_info",
                    {ArgExpr::of_term(Term{agents[static_cast<size_t>(pick(0, n_agents - 1))].value}),
                     ArgExpr::of_term(
                         Term{coals[static_cast<size_t>(pick(0, n_coals - 1))].value}),
                     ArgExpr::of_action(coin() ? Action::READ : Action::WRITE),
                     ArgExpr::of_set({Term{held_list[static_cast<size_t>(
                                              pick(0, (int)held_list.size() - 1))].item}})},
                    result, next));
            bound_vars.push_back(result);
            continue;
        }
        std::vector<ArgExpr> args;
        if (!bound_vars.empty() && coin()) {
            args.push_back(ArgExpr::of_term(Term{bound_vars.back()}));
        } else if (coin()) {
            args.push_back(ArgExpr::of_term(Term{producer.actor.value}));
        }
        std::optional<std::string> result;
        if (coin()) {
            result = "v" + std::to_string(i);
            bound_vars.push_back(*result);
        }
        s.workflow.nodes.emplace(id, make_update(id, "make0", std::move(args), result, next));
    }
    NodeId tail{"n" + std::to_string(n_updates)};
    if (coin() && !held_list.empty()) {
        RequestAtom atom;
        atom.subject = Term{agents[static_cast<size_t>(pick(0, n_agents - 1))].value};
        atom.coalition = Term{coals[static_cast<size_t>(pick(0, n_coals - 1))].value};
        atom.action = coin() ? Action::READ : Action::WRITE;
        atom.infos = {
            Term{held_list[static_cast<size_t>(pick(0, (int)held_list.size() - 1))].item}};
        atom.expected = coin() ? Effect::PERMIT : Effect::DENY;
        ExprPtr guard = BoolExpr::make_request(atom);
        if (coin()) guard = BoolExpr::make_not(guard);
        if (coin()) guard = BoolExpr::make_or(guard, BoolExpr::make_request(atom));
        NodeId done{"n_done"};
        NodeId failed{"n_fail"};
        s.workflow.nodes.emplace(tail, make_condition(tail, guard, done, failed));
        s.workflow.nodes.emplace(done, make_terminal(done, TerminalOutcome::SUCCESS));
        s.workflow.nodes.emplace(failed,
                                 make_terminal(failed, TerminalOutcome::ERROR, "bad luck"));
    } else {
        s.workflow.nodes.emplace(
            tail, make_terminal(tail, coin() ? TerminalOutcome::SUCCESS : TerminalOutcome::ERROR,
                                "stopped"));
    }
    s.workflow.entry = NodeId{"n0"};

    // Sometimes a property over the declared universe.
    if (coin()) {
        Formula f;
        f.prefix.push_back({"x", Sort::INFORMATION});
        if (coin()) f.prefix.push_back({"y", Sort::AGENT});
        RequestAtom atom;
        atom.subject = f.prefix.size() > 1 ? Term{"y"}
                                           : Term{agents[static_cast<size_t>(
                                                             pick(0, n_agents - 1))].value};
        atom.coalition = Term{coals[static_cast<size_t>(pick(0, n_coals - 1))].value};
        atom.action = coin() ? Action::READ : Action::WRITE;
        atom.infos = {Term{"x"}};
        atom.expected = coin() ? Effect::DENY : Effect::NOT_APPLICABLE;
        ExprPtr body = BoolExpr::make_request(atom);
        if (coin()) {
            EventAtom event;
            event.op = "make0";
            if (coin()) event.args = {Term{coin() ? "_" : producer.actor.value}};
            switch (pick(0, 2)) {
                case 0: event.result = Term{"x"}; break;
                case 1: event.result = Term{"_"}; break;
                default: break;  // no result pattern
            }
            body = coin() ? BoolExpr::make_and(BoolExpr::make_event(event), body)
                          : BoolExpr::make_implies(BoolExpr::make_event(event), body);
        }
        if (coin()) body = BoolExpr::make_not(body);
        f.body = body;
        s.properties.emplace("prop0", PropertySpec{"prop0", std::move(f)});
    }
    return s;
}

}  // namespace dcv::testing
