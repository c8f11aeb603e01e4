// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "dcv/checker.hpp"

#include <algorithm>
#include <deque>
#include <future>
#include <sstream>
#include <unordered_map>

namespace dcv {

namespace {

/// Internal BFS bookkeeping: visit annotations for stuck/terminal
/// configs live beside the space during construction.
struct BfsItem {
    std::size_t index;
    int depth;
};

}  // namespace

bool ExplorationSpace::is_terminal(std::size_t index) const {
    return std::find(terminal.begin(), terminal.end(), index) != terminal.end();
}

bool ExplorationSpace::is_stuck(std::size_t index) const {
    return std::find(stuck.begin(), stuck.end(), index) != stuck.end();
}

std::vector<TraceStep> ExplorationSpace::trace_to(std::size_t index) const {
    std::vector<TraceStep> steps;
    std::size_t cursor = index;
    while (parent[cursor].has_value()) {
        steps.push_back(parent[cursor]->second);
        cursor = parent[cursor]->first;
    }
    std::reverse(steps.begin(), steps.end());
    for (std::size_t i = 0; i < steps.size(); ++i) {
        steps[i].index = static_cast<int>(i);
    }
    return steps;
}

ExplorationSpace reachable(const Workflow& workflow, const CoalitionState& init,
                           const OpRegistry& registry,
                           const std::vector<PolicyVariant>& variants,
                           const ExploreLimits& limits) {
    ValidationReport report = validate_workflow(workflow, registry);
    if (!report.ok()) {
        throw EngineError("workflow failed validation: " + report.errors().front().message);
    }

    ExplorationSpace space;
    std::unordered_map<std::string, std::size_t> seen;  // canonical key -> index
    std::vector<std::optional<TraceStep>> final_visit;

    auto add_config = [&](Config cfg, const std::string& variant) -> std::pair<std::size_t, bool> {
        std::string key = config_key(cfg);
        auto it = seen.find(key);
        if (it != seen.end()) return {it->second, false};
        std::size_t index = space.configs.size();
        if (index >= limits.state_cap) throw StateLimitExceeded(limits.state_cap);
        seen.emplace(std::move(key), index);
        space.configs.push_back(std::move(cfg));
        space.successors.emplace_back();
        space.parent.emplace_back(std::nullopt);
        space.variant_of.push_back(variant);
        final_visit.emplace_back(std::nullopt);
        return {index, true};
    };

    std::deque<BfsItem> frontier;
    auto [base_index, base_new] = add_config(make_initial_config(workflow, init), "");
    space.initial.push_back(base_index);
    if (base_new) frontier.push_back({base_index, 0});
    for (const PolicyVariant& variant : variants) {
        auto [index, inserted] =
            add_config(make_initial_config(workflow, variant.init), variant.name);
        space.initial.push_back(index);
        if (inserted) frontier.push_back({index, 0});
    }

    while (!frontier.empty()) {
        // Expand one BFS level at a time so multi-worker runs stay
        // byte-identical: results are merged in frontier order.
        std::vector<BfsItem> level(frontier.begin(), frontier.end());
        frontier.clear();

        std::vector<StepResult> results(level.size());
        auto expand_range = [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                results[i] = step_with_trace(space.configs[level[i].index], workflow, registry,
                                             /*step_index=*/0);
            }
        };
        int workers = std::max(1, limits.workers);
        if (workers == 1 || level.size() < 2) {
            expand_range(0, level.size());
        } else {
            std::size_t chunk = (level.size() + workers - 1) / workers;
            std::vector<std::future<void>> tasks;
            for (std::size_t begin = 0; begin < level.size(); begin += chunk) {
                std::size_t end = std::min(begin + chunk, level.size());
                tasks.push_back(
                    std::async(std::launch::async, [&, begin, end] { expand_range(begin, end); }));
            }
            for (auto& task : tasks) task.get();
        }

        for (std::size_t i = 0; i < level.size(); ++i) {
            std::size_t from = level[i].index;
            StepResult& result = results[i];
            if (result.trace.terminal.has_value() || result.guard_fault) {
                space.terminal.push_back(from);
                final_visit[from] = result.trace;
                continue;
            }
            if (result.stuck) {
                space.stuck.push_back(from);
                final_visit[from] = result.trace;
                continue;
            }
            auto [to, inserted] = add_config(std::move(*result.next), space.variant_of[from]);
            space.successors[from].push_back(to);
            if (inserted) {
                space.parent[to] = {from, result.trace};
                if (level[i].depth + 1 < limits.max_steps) {
                    frontier.push_back({to, level[i].depth + 1});
                }
            }
        }
    }

    space.final_visit = std::move(final_visit);
    return space;
}

std::string to_string(CheckReport::Verdict verdict) {
    return verdict == CheckReport::Verdict::HOLDS ? "HOLDS" : "VIOLATED";
}

CheckReport check_liveness(const ExplorationSpace& space) {
    CheckReport report;
    for (std::size_t index : space.stuck) {
        report.verdict = CheckReport::Verdict::VIOLATED;
        report.witness = index;
        report.witness_node = space.configs[index].node;
        report.witness_trace = space.trace_to(index);
        if (space.final_visit[index].has_value()) {
            TraceStep last = *space.final_visit[index];
            last.index = static_cast<int>(report.witness_trace.size());
            report.witness_trace.push_back(last);
        }
        report.witness_variant = space.variant_of[index];
        return report;
    }
    report.verdict = CheckReport::Verdict::HOLDS;
    return report;
}

namespace {

std::vector<Value> carrier(Sort sort, const Config& cfg, const OpRegistry& registry) {
    std::vector<Value> out;
    switch (sort) {
        case Sort::AGENT:
            for (const auto& [aid, agent] : cfg.state.agents) out.push_back(Value::of_agent(aid));
            break;
        case Sort::COALITION:
            for (const auto& [cid, coal] : cfg.state.coals) {
                out.push_back(Value::of_coalition(cid));
            }
            break;
        case Sort::INFORMATION: {
            std::set<Information> items;
            for (const auto& [aid, agent] : cfg.state.agents) {
                items.insert(agent.info.begin(), agent.info.end());
            }
            for (const auto& [cid, coal] : cfg.state.coals) {
                items.insert(coal.info.begin(), coal.info.end());
            }
            for (const Event& event : cfg.history) {
                for (const Value& arg : event.args) {
                    if (arg.kind == Value::Kind::INFO) items.insert(Information{arg.text});
                }
                if (event.result.has_value() && event.result->kind == Value::Kind::INFO) {
                    items.insert(Information{event.result->text});
                }
            }
            for (const Information& item : items) out.push_back(Value::of_info(item));
            break;
        }
    }
    (void)registry;
    return out;
}

}  // namespace

FormulaEval eval_formula(const Formula& formula, const Config& cfg,
                         const OpRegistry& registry) {
    if (auto sort_error = check_sorts(formula)) {
        throw SortMismatchError(*sort_error);
    }

    std::vector<std::vector<Value>> carriers;
    carriers.reserve(formula.prefix.size());
    for (const Quantifier& q : formula.prefix) {
        carriers.push_back(carrier(q.sort, cfg, registry));
    }

    const bool universal = formula.mode == Formula::Mode::FORALL;
    for (const auto& c : carriers) {
        if (c.empty()) {
            // Empty carrier: no assignment exists.
            return FormulaEval{universal, {}};
        }
    }

    std::map<std::string, Value> assignment;
    ExprEvalOptions options;
    options.illposed_request_is_false = true;
    options.unresolved_is_false = true;
    TermResolver resolver = [&](const Term& t) -> std::optional<Value> {
        auto it = assignment.find(t.text);
        if (it != assignment.end()) return it->second;
        if (registry.agents.count(AgentId{t.text}) != 0) {
            return Value::of_agent(AgentId{t.text});
        }
        if (registry.coalitions.count(CoalitionId{t.text}) != 0) {
            return Value::of_coalition(CoalitionId{t.text});
        }
        if (registry.infos.count(Information{t.text}) != 0) {
            return Value::of_info(Information{t.text});
        }
        if (auto e = effect_from_string(t.text)) return Value::of_effect(*e);
        if (auto a = action_from_string(t.text)) return Value::of_action(*a);
        return std::nullopt;
    };

    // Odometer over the carriers, last variable fastest: yields
    // assignments in canonical (lexicographic) order.
    std::vector<std::size_t> indices(formula.prefix.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < formula.prefix.size(); ++i) {
            assignment[formula.prefix[i].var] = carriers[i][indices[i]];
        }
        bool value = eval_expr(formula.body, cfg.state, cfg.history, resolver, nullptr, options);
        if (!universal && value) {
            return FormulaEval{true, assignment};
        }
        if (universal && !value) {
            return FormulaEval{false, assignment};  // counterexample
        }
        // Advance.
        std::size_t pos = formula.prefix.size();
        while (pos > 0) {
            --pos;
            if (++indices[pos] < carriers[pos].size()) break;
            indices[pos] = 0;
            if (pos == 0) return FormulaEval{universal, {}};
        }
        if (formula.prefix.empty()) {
            // No quantifiers: single evaluation decides.
            return FormulaEval{value, {}};
        }
    }
}

CheckReport check_safety(const Formula& formula, const ExplorationSpace& space,
                         const OpRegistry& registry) {
    CheckReport report;
    for (std::size_t index = 0; index < space.size(); ++index) {
        FormulaEval eval = eval_formula(formula, space.configs[index], registry);
        if (eval.value) {
            report.verdict = CheckReport::Verdict::VIOLATED;
            report.witness = index;
            report.witness_node = space.configs[index].node;
            report.witness_trace = space.trace_to(index);
            for (const auto& [var, value] : eval.assignment) {
                report.witness_assignment[var] = value.text;
            }
            report.witness_variant = space.variant_of[index];
            return report;
        }
    }
    report.verdict = CheckReport::Verdict::HOLDS;
    return report;
}

std::string render_report(const std::string& title, const CheckReport& report) {
    std::ostringstream os;
    os << title << ": " << to_string(report.verdict) << '\n';
    if (report.verdict == CheckReport::Verdict::VIOLATED) {
        if (!report.witness_variant.empty()) {
            os << "VARIANT: " << report.witness_variant << '\n';
        }
        if (!report.witness_assignment.empty()) {
            os << "WITNESS";
            for (const auto& [var, value] : report.witness_assignment) {
                os << ' ' << var << '=' << value;
            }
            os << '\n';
        }
        for (const TraceStep& step : report.witness_trace) {
            os << render_step(step) << '\n';
        }
        if (report.witness_node.has_value()) {
            os << "AT: " << report.witness_node->value << '\n';
        }
    }
    return os.str();
}

}  // namespace dcv
