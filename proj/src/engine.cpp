// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "dcv/engine.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace dcv {

Value Value::of_agent(const AgentId& id) { return Value{Kind::AGENT, id.value}; }
Value Value::of_coalition(const CoalitionId& id) { return Value{Kind::COALITION, id.value}; }
Value Value::of_info(const Information& item) { return Value{Kind::INFO, item.item}; }
Value Value::of_effect(Effect e) { return Value{Kind::EFFECT, to_string(e)}; }
Value Value::of_action(Action a) { return Value{Kind::ACTION, to_string(a)}; }

Value Value::of_info_set(const std::set<Information>& items) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const Information& item : items) {
        os << (first ? "" : ", ") << item.item;
        first = false;
    }
    os << '}';
    return Value{Kind::INFO_SET, os.str()};
}

Value Value::of_fault(CoreError code) { return Value{Kind::FAULT, to_string(code)}; }

const std::set<std::string>& OpRegistry::builtin_ops() {
    static const std::set<std::string> ops = {"create_agent", "create_coalition", "join",
                                              "share_info", "request_info"};
    return ops;
}

bool OpRegistry::is_builtin(const std::string& op) const {
    return builtin_ops().count(op) != 0;
}

bool OpRegistry::is_registered(const std::string& op) const {
    return is_builtin(op) || producers.count(op) != 0;
}

bool Config::operator==(const Config& other) const {
    return node == other.node && state == other.state && bindings == other.bindings &&
           history == other.history && mint_counters == other.mint_counters;
}

const NodeId& fault_node() {
    // '#' cannot occur in scenario identifiers, so no workflow node can
    // shadow this one.
    static const NodeId id{"#fault"};
    return id;
}

std::string config_key(const Config& cfg) {
    std::ostringstream os;
    os << cfg.node.value << '|' << canonical_key(cfg.state) << "|bind{";
    for (const auto& [name, value] : cfg.bindings) {
        os << name << '=' << static_cast<int>(value.kind) << ':' << value.text << ';';
    }
    os << "}|mint{";
    for (const auto& [prefix, count] : cfg.mint_counters) {
        os << prefix << '=' << count << ';';
    }
    os << '}';
    return os.str();
}

// ---------------------------------------------------------------------
// Validation

bool ValidationReport::ok() const {
    return errors().empty();
}

std::vector<ValidationIssue> ValidationReport::errors() const {
    std::vector<ValidationIssue> out;
    for (const auto& issue : issues) {
        if (issue.severity == ValidationIssue::Severity::ERROR) out.push_back(issue);
    }
    return out;
}

std::vector<ValidationIssue> ValidationReport::warnings() const {
    std::vector<ValidationIssue> out;
    for (const auto& issue : issues) {
        if (issue.severity == ValidationIssue::Severity::WARNING) out.push_back(issue);
    }
    return out;
}

namespace {

bool is_constant_text(const std::string& text, const OpRegistry& reg) {
    return reg.agents.count(AgentId{text}) != 0 || reg.coalitions.count(CoalitionId{text}) != 0 ||
           reg.infos.count(Information{text}) != 0 || effect_from_string(text).has_value() ||
           action_from_string(text).has_value();
}

/// Variable terms of a node: everything that must come from bindings.
std::vector<std::string> variable_uses(const WorkflowNode& node, const OpRegistry& reg) {
    std::vector<std::string> vars;
    auto add_term = [&](const Term& t, bool fresh_id_position) {
        if (t.is_wildcard() || fresh_id_position) return;
        if (!is_constant_text(t.text, reg)) vars.push_back(t.text);
    };
    if (node.kind == NodeKind::UPDATE) {
        bool creates = node.op == "create_agent" || node.op == "create_coalition";
        for (size_t i = 0; i < node.args.size(); ++i) {
            const ArgExpr& arg = node.args[i];
            bool fresh = creates && i == 0;
            if (arg.kind == ArgExpr::Kind::TERM) add_term(arg.term, fresh);
            if (arg.kind == ArgExpr::Kind::SET) {
                for (const Term& t : arg.items) add_term(t, false);
            }
        }
    } else if (node.kind == NodeKind::CONDITION && node.guard) {
        for (const Term& t : collect_terms(node.guard)) add_term(t, false);
    }
    return vars;
}

std::vector<NodeId> out_edges(const WorkflowNode& node) {
    std::vector<NodeId> out;
    if (node.kind == NodeKind::UPDATE && node.next.has_value()) out.push_back(*node.next);
    if (node.kind == NodeKind::CONDITION) {
        if (node.yes.has_value()) out.push_back(*node.yes);
        if (node.no.has_value()) out.push_back(*node.no);
    }
    return out;
}

}  // namespace

ValidationReport validate_workflow(const Workflow& workflow, const OpRegistry& registry) {
    ValidationReport report;
    auto error = [&](const std::string& code, const NodeId& node, const std::string& message) {
        report.issues.push_back(
            {ValidationIssue::Severity::ERROR, code, node, message});
    };
    auto warning = [&](const std::string& code, const NodeId& node, const std::string& message) {
        report.issues.push_back(
            {ValidationIssue::Severity::WARNING, code, node, message});
    };

    if (workflow.nodes.count(workflow.entry) == 0) {
        error("MISSING_ENTRY", workflow.entry,
              "entry node '" + workflow.entry.value + "' is not defined");
        return report;
    }

    for (const auto& [id, node] : workflow.nodes) {
        for (const NodeId& target : out_edges(node)) {
            if (workflow.nodes.count(target) == 0) {
                error("DANGLING_EDGE", id,
                      "edge from '" + id.value + "' targets unknown node '" + target.value + "'");
            }
        }
        if (node.kind == NodeKind::UPDATE) {
            if (!node.next.has_value()) {
                error("MISSING_SUCCESSOR", id, "update node has no outgoing edge");
            }
            if (!registry.is_registered(node.op)) {
                error("UNREGISTERED_OP", id, "operation '" + node.op + "' is not registered");
            } else if (registry.is_builtin(node.op)) {
                // Shape of the built-in calls.
                auto arity_error = [&](const char* expected) {
                    error("BAD_ARITY", id,
                          std::string("'") + node.op + "' expects " + expected);
                };
                const auto& args = node.args;
                auto all_terms = [&](size_t n) {
                    if (args.size() != n) return false;
                    return std::all_of(args.begin(), args.end(), [](const ArgExpr& a) {
                        return a.kind == ArgExpr::Kind::TERM;
                    });
                };
                if (node.op == "create_agent" || node.op == "create_coalition") {
                    if (!all_terms(1)) arity_error("one identifier");
                } else if (node.op == "join") {
                    if (!all_terms(2)) arity_error("an agent and a coalition");
                } else if (node.op == "share_info") {
                    if (args.size() != 3 || args[0].kind != ArgExpr::Kind::TERM ||
                        args[1].kind != ArgExpr::Kind::TERM ||
                        args[2].kind != ArgExpr::Kind::SET) {
                        arity_error("an agent, a coalition and an information set");
                    }
                } else if (node.op == "request_info") {
                    if (args.size() != 4 || args[0].kind != ArgExpr::Kind::TERM ||
                        args[1].kind != ArgExpr::Kind::TERM ||
                        args[2].kind != ArgExpr::Kind::ACTION ||
                        args[3].kind != ArgExpr::Kind::SET) {
                        arity_error("an agent, a coalition, an action and an information set");
                    }
                }
                if (node.result_var.has_value() && node.op != "request_info") {
                    error("BAD_ARGUMENT", id,
                          "'" + node.op + "' produces no result to bind");
                }
            }
            for (const ArgExpr& arg : node.args) {
                if (arg.kind == ArgExpr::Kind::TERM && arg.term.is_wildcard()) {
                    error("BAD_ARGUMENT", id, "'_' is not allowed in update arguments");
                }
            }
        }
        if (node.kind == NodeKind::CONDITION) {
            if (!node.yes.has_value()) {
                warning("MISSING_BRANCH", id, "condition has no 'yes' branch");
            }
            if (!node.no.has_value()) {
                warning("MISSING_BRANCH", id, "condition has no 'no' branch");
            }
        }
    }
    if (!report.ok()) {
        return report;  // edge problems make the flow analyses unreliable
    }

    // Reachability from the entry.
    std::set<NodeId> reachable_nodes;
    std::deque<NodeId> frontier{workflow.entry};
    while (!frontier.empty()) {
        NodeId id = frontier.front();
        frontier.pop_front();
        if (!reachable_nodes.insert(id).second) continue;
        for (const NodeId& target : out_edges(workflow.nodes.at(id))) {
            frontier.push_back(target);
        }
    }
    for (const auto& [id, node] : workflow.nodes) {
        if (reachable_nodes.count(id) == 0) {
            error("UNREACHABLE_NODE", id, "node '" + id.value + "' is unreachable from entry");
        }
    }

    // Must-bound variable analysis: a variable may be used only when it
    // is bound on every path from the entry.
    std::map<NodeId, std::set<std::string>> bound_in;
    bound_in[workflow.entry] = {};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [id, node] : workflow.nodes) {
            auto in_it = bound_in.find(id);
            if (in_it == bound_in.end()) continue;  // not reached yet
            std::set<std::string> out = in_it->second;
            if (node.kind == NodeKind::UPDATE && node.result_var.has_value()) {
                out.insert(*node.result_var);
            }
            if (node.kind == NodeKind::UPDATE &&
                (node.op == "create_agent" || node.op == "create_coalition") &&
                !node.args.empty() && node.args[0].kind == ArgExpr::Kind::TERM &&
                !is_constant_text(node.args[0].term.text, registry)) {
                // The created id is referable downstream.
                out.insert(node.args[0].term.text);
            }
            for (const NodeId& target : out_edges(node)) {
                auto t = bound_in.find(target);
                if (t == bound_in.end()) {
                    bound_in[target] = out;
                    changed = true;
                } else {
                    std::set<std::string> met;
                    std::set_intersection(t->second.begin(), t->second.end(), out.begin(),
                                          out.end(), std::inserter(met, met.begin()));
                    if (met != t->second) {
                        t->second = std::move(met);
                        changed = true;
                    }
                }
            }
        }
    }
    for (const NodeId& id : reachable_nodes) {
        const WorkflowNode& node = workflow.nodes.at(id);
        const std::set<std::string>& bound = bound_in[id];
        for (const std::string& var : variable_uses(node, registry)) {
            if (bound.count(var) == 0) {
                error("UNBOUND_VARIABLE", id,
                      "'" + var + "' is not bound on every path to '" + id.value + "'");
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------
// Expression evaluation

namespace {

std::optional<Value> resolve_constant(const Term& t, const OpRegistry& reg) {
    if (reg.agents.count(AgentId{t.text}) != 0) return Value::of_agent(AgentId{t.text});
    if (reg.coalitions.count(CoalitionId{t.text}) != 0) {
        return Value::of_coalition(CoalitionId{t.text});
    }
    if (reg.infos.count(Information{t.text}) != 0) return Value::of_info(Information{t.text});
    if (auto e = effect_from_string(t.text)) return Value::of_effect(*e);
    if (auto a = action_from_string(t.text)) return Value::of_action(*a);
    return std::nullopt;
}

struct ExprEvaluator {
    const CoalitionState& state;
    const std::vector<Event>& history;
    const TermResolver& resolve;
    std::vector<GuardEval>* evals;
    const ExprEvalOptions& options;

    bool eval(const ExprPtr& e) const {
        switch (e->kind) {
            case BoolExpr::Kind::REQUEST: return eval_request(*e->request);
            case BoolExpr::Kind::EVENT: return eval_event(*e->event);
            case BoolExpr::Kind::NOT: return !eval(e->lhs);
            case BoolExpr::Kind::AND: {
                bool l = eval(e->lhs);
                bool r = eval(e->rhs);
                return l && r;
            }
            case BoolExpr::Kind::OR: {
                bool l = eval(e->lhs);
                bool r = eval(e->rhs);
                return l || r;
            }
            case BoolExpr::Kind::IMPLIES: {
                bool l = eval(e->lhs);
                bool r = eval(e->rhs);
                return !l || r;
            }
        }
        return false;
    }

    std::optional<Value> lookup(const Term& t, bool* unresolved) const {
        std::optional<Value> v = resolve(t);
        if (!v.has_value()) {
            if (options.unresolved_is_false) {
                *unresolved = true;
                return std::nullopt;
            }
            throw EngineError("unbound identifier '" + t.text + "'");
        }
        return v;
    }

    bool eval_request(const RequestAtom& atom) const {
        bool unresolved = false;
        auto subject = lookup(atom.subject, &unresolved);
        auto coalition = lookup(atom.coalition, &unresolved);
        std::vector<Value> info_values;
        for (const Term& t : atom.infos) {
            auto v = lookup(t, &unresolved);
            if (v.has_value()) info_values.push_back(*v);
        }
        if (unresolved) return false;
        if (subject->kind != Value::Kind::AGENT) {
            throw SortMismatchError("'" + atom.subject.text + "' is not an agent");
        }
        if (coalition->kind != Value::Kind::COALITION) {
            throw SortMismatchError("'" + atom.coalition.text + "' is not a coalition");
        }
        std::set<Information> items;
        for (const Value& v : info_values) {
            if (v.kind != Value::Kind::INFO) {
                throw SortMismatchError("'" + v.text + "' is not an information item");
            }
            items.insert(Information{v.text});
        }
        Effect actual;
        try {
            actual = request_info(state, AgentId{subject->text}, CoalitionId{coalition->text},
                                  atom.action, items);
        } catch (const CoalitionError&) {
            if (options.illposed_request_is_false) return false;
            throw;
        }
        if (evals != nullptr) {
            evals->push_back(GuardEval{AgentId{subject->text}, CoalitionId{coalition->text},
                                       atom.action, items, actual});
        }
        return actual == atom.expected;
    }

    bool eval_event(const EventAtom& atom) const {
        // Resolve the patterns once; an unresolvable constant can never
        // match anything.
        bool unresolved = false;
        std::vector<std::optional<Value>> arg_patterns;
        for (const Term& t : atom.args) {
            if (t.is_wildcard()) {
                arg_patterns.push_back(std::nullopt);
            } else {
                auto v = lookup(t, &unresolved);
                if (!v.has_value()) return false;
                arg_patterns.push_back(v);
            }
        }
        std::optional<std::optional<Value>> result_pattern;  // outer: present at all
        if (atom.result.has_value()) {
            if (atom.result->is_wildcard()) {
                result_pattern = std::optional<Value>{};
            } else {
                auto v = lookup(*atom.result, &unresolved);
                if (!v.has_value()) return false;
                result_pattern = v;
            }
        }
        if (unresolved) return false;
        for (const Event& event : history) {
            if (event.op != atom.op) continue;
            if (event.args.size() != arg_patterns.size()) continue;
            bool match = true;
            for (size_t i = 0; i < arg_patterns.size(); ++i) {
                if (arg_patterns[i].has_value() && !(*arg_patterns[i] == event.args[i])) {
                    match = false;
                    break;
                }
            }
            if (!match) continue;
            if (result_pattern.has_value() && result_pattern->has_value()) {
                if (!event.result.has_value() || !(*event.result == **result_pattern)) {
                    continue;
                }
            }
            return true;
        }
        return false;
    }
};

}  // namespace

bool eval_expr(const ExprPtr& expr, const CoalitionState& state,
               const std::vector<Event>& history, const TermResolver& resolve,
               std::vector<GuardEval>* evals, const ExprEvalOptions& options) {
    ExprEvaluator evaluator{state, history, resolve, evals, options};
    return evaluator.eval(expr);
}

// ---------------------------------------------------------------------
// Update execution

namespace {

std::optional<Value> resolve_config_term(const Term& t, const Config& cfg,
                                         const OpRegistry& reg) {
    auto it = cfg.bindings.find(t.text);
    if (it != cfg.bindings.end()) return it->second;
    return resolve_constant(t, reg);
}

Value resolve_or_throw(const Term& t, const Config& cfg, const OpRegistry& reg) {
    auto v = resolve_config_term(t, cfg, reg);
    if (!v.has_value()) throw EngineError("UnboundVariable: '" + t.text + "'");
    return *v;
}

std::set<Information> resolve_info_set(const std::vector<Term>& items, const Config& cfg,
                                       const OpRegistry& reg) {
    std::set<Information> out;
    for (const Term& t : items) {
        Value v = resolve_or_throw(t, cfg, reg);
        if (v.kind != Value::Kind::INFO) {
            throw EngineError("'" + t.text + "' is not an information item");
        }
        out.insert(Information{v.text});
    }
    return out;
}

std::vector<Value> resolve_args(const WorkflowNode& node, const Config& cfg,
                                const OpRegistry& reg) {
    std::vector<Value> out;
    for (const ArgExpr& arg : node.args) {
        switch (arg.kind) {
            case ArgExpr::Kind::TERM:
                out.push_back(resolve_or_throw(arg.term, cfg, reg));
                break;
            case ArgExpr::Kind::SET:
                out.push_back(Value::of_info_set(resolve_info_set(arg.items, cfg, reg)));
                break;
            case ArgExpr::Kind::ACTION:
                out.push_back(Value::of_action(arg.action));
                break;
        }
    }
    return out;
}

/// For create_agent/create_coalition the first argument introduces a
/// fresh identifier; a bound variable passes its value through.
std::string fresh_id_text(const ArgExpr& arg, const Config& cfg, const OpRegistry& reg) {
    if (arg.kind != ArgExpr::Kind::TERM) throw EngineError("expected an identifier");
    auto v = resolve_config_term(arg.term, cfg, reg);
    std::string text = v.has_value() ? v->text : arg.term.text;
    if (!is_valid_identifier(text)) {
        throw EngineError("'" + text + "' is not a valid identifier");
    }
    return text;
}

Policy specialize_policy(Policy policy, const std::string& prefix, const Information& token) {
    auto substitute = [&](std::set<Information>& resources) {
        if (resources.erase(Information{prefix}) > 0) resources.insert(token);
    };
    substitute(policy.target.resources);
    std::set<Rule> rules;
    for (Rule rule : policy.rules) {
        if (rule.target.has_value()) substitute(rule.target->resources);
        rules.insert(std::move(rule));
    }
    policy.rules = std::move(rules);
    return policy;
}

Config fault_transition(const Config& cfg, const WorkflowNode& node, std::vector<Value> args,
                        const std::string& detail) {
    Config next = cfg;
    next.history.push_back(
        Event{node.id, node.op, std::move(args), Value{Value::Kind::FAULT, detail}});
    next.node = fault_node();
    return next;
}

}  // namespace

Config apply_update(const Config& cfg, const WorkflowNode& node, const OpRegistry& registry) {
    if (node.kind != NodeKind::UPDATE) throw EngineError("apply_update on a non-update node");

    Config next = cfg;
    std::vector<Value> args;
    std::optional<Value> result;
    try {
        if (node.op == "create_agent") {
            // The first argument introduces a fresh identifier rather
            // than resolving; it becomes referable by later nodes.
            AgentId aid{fresh_id_text(node.args.at(0), cfg, registry)};
            args.push_back(Value::of_agent(aid));
            next.state = create_agent(next.state, aid, {}, Pdp{});
            const Term& term = node.args.at(0).term;
            if (!resolve_config_term(term, cfg, registry).has_value()) {
                next.bindings[term.text] = Value::of_agent(aid);
            }
        } else if (node.op == "create_coalition") {
            CoalitionId cid{fresh_id_text(node.args.at(0), cfg, registry)};
            args.push_back(Value::of_coalition(cid));
            next.state = create_coalition(next.state, cid);
            const Term& term = node.args.at(0).term;
            if (!resolve_config_term(term, cfg, registry).has_value()) {
                next.bindings[term.text] = Value::of_coalition(cid);
            }
        } else if (node.op == "join") {
            args = resolve_args(node, cfg, registry);
            next.state = join(next.state, AgentId{args.at(0).text},
                              CoalitionId{args.at(1).text});
        } else if (node.op == "share_info") {
            args = resolve_args(node, cfg, registry);
            std::set<Information> items = resolve_info_set(node.args.at(2).items, cfg, registry);
            next.state = share_info(next.state, AgentId{args.at(0).text},
                                    CoalitionId{args.at(1).text}, items);
        } else if (node.op == "request_info") {
            args = resolve_args(node, cfg, registry);
            std::set<Information> items = resolve_info_set(node.args.at(3).items, cfg, registry);
            Effect effect =
                request_info(next.state, AgentId{args.at(0).text},
                             CoalitionId{args.at(1).text}, node.args.at(2).action, items);
            result = Value::of_effect(effect);
        } else {
            auto decl_it = registry.producers.find(node.op);
            if (decl_it == registry.producers.end()) {
                throw EngineError("operation '" + node.op + "' is not registered");
            }
            args = resolve_args(node, cfg, registry);
            const ProducerDecl& decl = decl_it->second;
            int counter = ++next.mint_counters[decl.mint_prefix];
            Information token{decl.mint_prefix + "#" + std::to_string(counter)};

            auto agent_it = next.state.agents.find(decl.actor);
            if (agent_it == next.state.agents.end()) {
                throw CoalitionError(CoreError::UnknownAgent, decl.actor.value);
            }
            // The minted token belongs to its creator; the policy copy is
            // specialized to the token so the share below attaches it.
            agent_it->second.info.insert(token);
            if (decl.attach_policy.has_value()) {
                agent_it->second.aac.policies.insert(
                    specialize_policy(*decl.attach_policy, decl.mint_prefix, token));
            }
            if (decl.shares_into.has_value()) {
                next.state = share_info(next.state, decl.actor, *decl.shares_into, {token});
            }
            result = Value::of_info(token);
        }
    } catch (const CoalitionError& e) {
        return fault_transition(cfg, node, std::move(args), e.what());
    } catch (const EngineError& e) {
        return fault_transition(cfg, node, std::move(args), e.what());
    }

    next.history.push_back(Event{node.id, node.op, std::move(args), result});
    if (node.result_var.has_value() && result.has_value()) {
        next.bindings[*node.result_var] = *result;
    }
    next.node = *node.next;
    return next;
}

GuardResult eval_guard(const Config& cfg, const ExprPtr& guard, const OpRegistry& registry) {
    GuardResult result;
    TermResolver resolver = [&](const Term& t) { return resolve_config_term(t, cfg, registry); };
    result.value = eval_expr(guard, cfg.state, cfg.history, resolver, &result.evals,
                             ExprEvalOptions{});
    return result;
}

// ---------------------------------------------------------------------
// Stepping

Config make_initial_config(const Workflow& workflow, CoalitionState init) {
    Config cfg;
    cfg.node = workflow.entry;
    cfg.state = std::move(init);
    return cfg;
}

StepResult step_with_trace(const Config& cfg, const Workflow& workflow,
                           const OpRegistry& registry, int step_index) {
    StepResult result;
    result.trace.index = step_index;
    result.trace.node = cfg.node;

    if (cfg.node == fault_node()) {
        result.trace.kind = NodeKind::TERMINAL;
        result.trace.terminal = TerminalOutcome::ERROR;
        std::string message = "runtime fault";
        if (!cfg.history.empty() && cfg.history.back().result.has_value() &&
            cfg.history.back().result->kind == Value::Kind::FAULT) {
            message = cfg.history.back().result->text;
        }
        result.trace.message = message;
        return result;
    }

    auto it = workflow.nodes.find(cfg.node);
    if (it == workflow.nodes.end()) {
        throw EngineError("configuration at unknown node '" + cfg.node.value + "'");
    }
    const WorkflowNode& node = it->second;
    result.trace.kind = node.kind;

    switch (node.kind) {
        case NodeKind::TERMINAL:
            result.trace.terminal = node.outcome;
            result.trace.message = node.message;
            break;
        case NodeKind::UPDATE: {
            Config next = apply_update(cfg, node, registry);
            result.trace.event = next.history.back();
            result.trace.result_var = node.result_var;
            result.next = std::move(next);
            break;
        }
        case NodeKind::CONDITION: {
            try {
                GuardResult guard = eval_guard(cfg, node.guard, registry);
                result.trace.guard_evals = std::move(guard.evals);
                result.trace.guard_value = guard.value;
                const std::optional<NodeId>& target = guard.value ? node.yes : node.no;
                if (target.has_value()) {
                    result.trace.branch = *target;
                    Config next = cfg;
                    next.node = *target;
                    result.next = std::move(next);
                } else {
                    result.stuck = true;  // required branch absent
                }
            } catch (const CoalitionError& e) {
                result.trace.fault = e.what();
                result.guard_fault = true;
            } catch (const EngineError& e) {
                result.trace.fault = e.what();
                result.guard_fault = true;
            }
            break;
        }
    }
    return result;
}

std::vector<Config> step(const Config& cfg, const Workflow& workflow,
                         const OpRegistry& registry) {
    StepResult result = step_with_trace(cfg, workflow, registry, 0);
    std::vector<Config> out;
    if (result.next.has_value()) out.push_back(std::move(*result.next));
    return out;
}

Trace run(const Workflow& workflow, const CoalitionState& init, const OpRegistry& registry,
          int max_steps) {
    ValidationReport report = validate_workflow(workflow, registry);
    if (!report.ok()) {
        throw EngineError("workflow failed validation: " + report.errors().front().message);
    }

    Trace trace;
    Config cfg = make_initial_config(workflow, init);
    for (int index = 0;; ++index) {
        if (index >= max_steps) {
            trace.outcome = {RunOutcome::Kind::STEP_LIMIT, cfg.node};
            break;
        }
        StepResult step_result = step_with_trace(cfg, workflow, registry, index);
        trace.steps.push_back(step_result.trace);
        if (step_result.trace.terminal.has_value()) {
            trace.outcome = {*step_result.trace.terminal == TerminalOutcome::SUCCESS
                                 ? RunOutcome::Kind::COMPLETED_SUCCESS
                                 : RunOutcome::Kind::COMPLETED_ERROR,
                             cfg.node};
            break;
        }
        if (step_result.guard_fault) {
            trace.outcome = {RunOutcome::Kind::COMPLETED_ERROR, cfg.node};
            break;
        }
        if (step_result.stuck) {
            trace.outcome = {RunOutcome::Kind::DEADLOCK, cfg.node};
            break;
        }
        cfg = std::move(*step_result.next);
    }
    trace.final_config = std::move(cfg);
    return trace;
}

// ---------------------------------------------------------------------
// Rendering

std::string to_string(const RunOutcome& outcome) {
    switch (outcome.kind) {
        case RunOutcome::Kind::COMPLETED_SUCCESS: return "COMPLETED(SUCCESS)";
        case RunOutcome::Kind::COMPLETED_ERROR: return "COMPLETED(ERROR)";
        case RunOutcome::Kind::DEADLOCK: return "DEADLOCK(" + outcome.at.value + ")";
        case RunOutcome::Kind::STEP_LIMIT: return "STEP_LIMIT";
    }
    return "?";
}

namespace {

void render_guard_eval(std::ostream& os, const GuardEval& eval) {
    os << "request_info(" << eval.subject.value << ", " << eval.coalition.value << ", "
       << to_string(eval.action) << ", {";
    bool first = true;
    for (const Information& item : eval.infos) {
        os << (first ? "" : ", ") << item.item;
        first = false;
    }
    os << "}) = " << to_string(eval.actual);
}

}  // namespace

std::string render_step(const TraceStep& step) {
    std::ostringstream os;
    os << "STEP " << step.index << ' ' << step.node.value << ' ' << to_string(step.kind) << ' ';
    switch (step.kind) {
        case NodeKind::UPDATE: {
            const Event& event = *step.event;
            os << event.op << '(';
            for (size_t i = 0; i < event.args.size(); ++i) {
                os << (i ? ", " : "") << event.args[i].text;
            }
            os << ')';
            if (event.result.has_value() && event.result->kind == Value::Kind::FAULT) {
                os << " fault = " << event.result->text;
            } else {
                if (step.result_var.has_value()) os << " -> " << *step.result_var;
                if (event.result.has_value()) os << " = " << event.result->text;
            }
            break;
        }
        case NodeKind::CONDITION: {
            for (const GuardEval& eval : step.guard_evals) {
                render_guard_eval(os, eval);
                os << "; ";
            }
            if (step.fault.has_value()) {
                os << "guard fault = " << *step.fault;
            } else {
                os << "guard = " << (step.guard_value.value_or(false) ? "true" : "false");
                os << "; branch = "
                   << (step.branch.has_value() ? step.branch->value : std::string("none"));
            }
            break;
        }
        case NodeKind::TERMINAL:
            if (step.terminal == TerminalOutcome::SUCCESS) {
                os << "SUCCESS";
            } else {
                os << "ERROR \"" << step.message << '"';
            }
            break;
    }
    return os.str();
}

std::string render_trace(const Trace& trace) {
    std::ostringstream os;
    for (const TraceStep& step : trace.steps) {
        os << render_step(step) << '\n';
    }
    os << "OUTCOME: " << to_string(trace.outcome) << '\n';
    return os.str();
}

}  // namespace dcv
