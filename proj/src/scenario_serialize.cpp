// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <sstream>

#include "dcv/scenario.hpp"

namespace dcv {

namespace {

template <typename Range, typename Fn>
void write_list(std::ostream& os, const Range& range, Fn&& text_of) {
    os << '[';
    bool first = true;
    for (const auto& item : range) {
        os << (first ? "" : ", ") << text_of(item);
        first = false;
    }
    os << ']';
}

void write_target(std::ostream& os, const Target& target) {
    os << "(subjects=";
    write_list(os, target.subjects, [](const AgentId& a) { return a.value; });
    os << ", resources=";
    write_list(os, target.resources, [](const Information& i) { return i.item; });
    os << ", actions=";
    write_list(os, target.actions, [](Action a) { return to_string(a); });
    os << ')';
}

void write_policy(std::ostream& os, const std::string& name, const Policy& policy) {
    os << "policy " << name << " {\n  target = ";
    write_target(os, policy.target);
    os << "\n  combine = " << to_string(policy.rule_comb_alg) << '\n';
    for (const Rule& rule : policy.rules) {
        os << "  rule {";
        if (rule.target.has_value()) {
            os << " target = ";
            write_target(os, *rule.target);
        }
        os << " effect = " << to_string(rule.effect) << " }\n";
    }
    os << "}\n";
}

void write_node(std::ostream& os, const WorkflowNode& node) {
    os << "  node " << node.id.value << ": ";
    switch (node.kind) {
        case NodeKind::UPDATE: {
            os << "update " << node.op << '(';
            for (size_t i = 0; i < node.args.size(); ++i) {
                if (i) os << ", ";
                const ArgExpr& arg = node.args[i];
                switch (arg.kind) {
                    case ArgExpr::Kind::TERM: os << arg.term.text; break;
                    case ArgExpr::Kind::ACTION: os << to_string(arg.action); break;
                    case ArgExpr::Kind::SET: {
                        os << '{';
                        for (size_t j = 0; j < arg.items.size(); ++j) {
                            os << (j ? ", " : "") << arg.items[j].text;
                        }
                        os << '}';
                        break;
                    }
                }
            }
            os << ')';
            if (node.result_var.has_value()) os << " -> " << *node.result_var;
            os << " then " << node.next->value;
            break;
        }
        case NodeKind::CONDITION:
            os << "if " << to_string(node.guard) << " yes " << node.yes->value;
            if (node.no.has_value()) os << " no " << node.no->value;
            break;
        case NodeKind::TERMINAL:
            if (node.outcome == TerminalOutcome::SUCCESS) {
                os << "done";
            } else {
                os << "fail \"" << node.message << '"';
            }
            break;
    }
    os << '\n';
}

}  // namespace

std::string serialize_scenario(const Scenario& scenario) {
    std::ostringstream os;
    os << "settings {\n  max_steps = " << scenario.settings.max_steps
       << "\n  state_cap = " << scenario.settings.state_cap << "\n}\n";

    for (const auto& [name, policy] : scenario.policies) {
        os << '\n';
        write_policy(os, name, policy);
    }

    for (const auto& [aid, decl] : scenario.agents) {
        os << "\nagent " << aid.value << " {\n  info = ";
        write_list(os, decl.info, [](const Information& i) { return i.item; });
        os << '\n';
        std::set<std::string> policies(decl.policies.begin(), decl.policies.end());
        for (const std::string& name : policies) {
            os << "  policy " << name << '\n';
        }
        os << "}\n";
    }

    for (const auto& [cid, decl] : scenario.coalitions) {
        os << "\ncoalition " << cid.value << " {\n  members = ";
        write_list(os, decl.members, [](const AgentId& a) { return a.value; });
        os << '\n';
        for (const auto& [agent, items] : decl.shares) {
            os << "  share " << agent.value << " = ";
            write_list(os, items, [](const Information& i) { return i.item; });
            os << '\n';
        }
        os << "}\n";
    }

    for (const auto& [name, spec] : scenario.producers) {
        os << "\nproducer " << name << " {\n  actor = " << spec.actor.value
           << "\n  mints = " << spec.mints << '\n';
        if (spec.shares_into.has_value()) {
            os << "  shares_into = " << spec.shares_into->value << '\n';
        }
        if (spec.attach_policy.has_value()) {
            os << "  attach_policy = " << *spec.attach_policy << '\n';
        }
        os << "}\n";
    }

    os << "\nworkflow {\n  entry = " << scenario.workflow.entry.value << '\n';
    for (const auto& [id, node] : scenario.workflow.nodes) {
        write_node(os, node);
    }
    os << "}\n";

    for (const auto& [name, spec] : scenario.properties) {
        os << "\nproperty " << name << " forbidden {\n  " << to_string(spec.formula) << "\n}\n";
    }
    return os.str();
}

}  // namespace dcv
