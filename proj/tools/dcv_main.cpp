// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// dcv: scenario runner and property checker for dynamic-coalition
// workflows. Exit codes: 0 all checks hold / run completed successfully,
// 1 a property was violated or the run deadlocked or errored, 2 usage or
// parse errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcv/scenario.hpp"

namespace {

using nlohmann::json;

enum ExitCode { kOk = 0, kViolated = 1, kUsage = 2 };

struct CommonOpts {
    std::string path;
    std::string format = "plain";
    int max_steps = 0;      // 0 = use scenario settings
    std::size_t state_cap = 0;
    int workers = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("scenario", opts.path, "Scenario file (.dcs)")->required();
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"plain", "json-lines"}));
    cmd->add_option("--max-steps", opts.max_steps, "Step limit override");
    cmd->add_option("--state-cap", opts.state_cap, "Explored-state cap override");
    cmd->add_option("--workers", opts.workers, "Parallel exploration workers")
        ->check(CLI::PositiveNumber);
}

std::optional<dcv::Scenario> load_scenario(const CommonOpts& opts) {
    std::ifstream in(opts.path);
    if (!in) {
        std::cerr << "error: cannot open '" << opts.path << "'\n";
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    dcv::ParseResult parsed = dcv::parse_scenario(buffer.str());
    std::cerr << dcv::render_diagnostics(parsed.diagnostics);
    if (!parsed.ok()) {
        return std::nullopt;
    }
    return std::move(*parsed.scenario);
}

int effective_max_steps(const CommonOpts& opts, const dcv::Scenario& scenario) {
    return opts.max_steps > 0 ? opts.max_steps : scenario.settings.max_steps;
}

std::size_t effective_state_cap(const CommonOpts& opts, const dcv::Scenario& scenario) {
    return opts.state_cap > 0 ? opts.state_cap : scenario.settings.state_cap;
}

json step_json(const dcv::TraceStep& step) {
    json obj;
    obj["type"] = "step";
    obj["index"] = step.index;
    obj["node"] = step.node.value;
    obj["kind"] = dcv::to_string(step.kind);
    obj["text"] = dcv::render_step(step);
    return obj;
}

int cmd_run(const CommonOpts& opts) {
    auto scenario = load_scenario(opts);
    if (!scenario.has_value()) return kUsage;
    dcv::OpRegistry registry = dcv::build_registry(*scenario);
    dcv::CoalitionState init = dcv::initial_state(*scenario);
    dcv::Trace trace =
        dcv::run(scenario->workflow, init, registry, effective_max_steps(opts, *scenario));

    if (opts.format == "plain") {
        std::cout << dcv::render_trace(trace);
    } else {
        for (const dcv::TraceStep& step : trace.steps) {
            std::cout << step_json(step).dump() << '\n';
        }
        json outcome;
        outcome["type"] = "outcome";
        outcome["outcome"] = dcv::to_string(trace.outcome);
        std::cout << outcome.dump() << '\n';
    }
    return trace.outcome.kind == dcv::RunOutcome::Kind::COMPLETED_SUCCESS ? kOk : kViolated;
}

json report_json(const std::string& check, const dcv::CheckReport& report) {
    json obj;
    obj["type"] = "report";
    obj["check"] = check;
    obj["verdict"] = dcv::to_string(report.verdict);
    if (report.verdict == dcv::CheckReport::Verdict::VIOLATED) {
        json witness = json::array();
        for (const dcv::TraceStep& step : report.witness_trace) {
            witness.push_back(dcv::render_step(step));
        }
        obj["witness"] = witness;
        obj["assignment"] = report.witness_assignment;
        if (report.witness_node.has_value()) obj["at"] = report.witness_node->value;
    }
    return obj;
}

int cmd_check(const CommonOpts& opts, bool liveness, const std::vector<std::string>& safety) {
    auto scenario = load_scenario(opts);
    if (!scenario.has_value()) return kUsage;

    // Resolve requested safety properties before doing any work.
    std::vector<std::string> property_names;
    bool safety_all = false;
    for (const std::string& name : safety) {
        if (name == "all") {
            safety_all = true;
            continue;
        }
        if (scenario->properties.count(name) == 0) {
            std::cerr << "error: no such property '" << name << "'\n";
            return kUsage;
        }
        property_names.push_back(name);
    }
    if (safety_all || (!liveness && safety.empty())) {
        property_names.clear();
        for (const auto& [name, spec] : scenario->properties) property_names.push_back(name);
    }
    bool run_liveness = liveness || (!liveness && safety.empty());

    dcv::OpRegistry registry = dcv::build_registry(*scenario);
    dcv::CoalitionState init = dcv::initial_state(*scenario);
    dcv::ExploreLimits limits;
    limits.max_steps = effective_max_steps(opts, *scenario);
    limits.state_cap = effective_state_cap(opts, *scenario);
    limits.workers = opts.workers;

    dcv::ExplorationSpace space;
    try {
        space = dcv::reachable(scenario->workflow, init, registry, {}, limits);
    } catch (const dcv::StateLimitExceeded& e) {
        if (opts.format == "plain") {
            std::cout << "STATE_LIMIT_EXCEEDED: " << e.what() << '\n';
        } else {
            json obj;
            obj["type"] = "error";
            obj["error"] = e.what();
            std::cout << obj.dump() << '\n';
        }
        return kViolated;
    }

    bool all_hold = true;
    auto emit = [&](const std::string& title, const std::string& key,
                    const dcv::CheckReport& report) {
        if (opts.format == "plain") {
            std::cout << dcv::render_report(title, report);
        } else {
            std::cout << report_json(key, report).dump() << '\n';
        }
        all_hold = all_hold && report.verdict == dcv::CheckReport::Verdict::HOLDS;
    };

    if (opts.format == "plain") {
        std::cout << "SPACE: " << space.size() << " configs\n";
    } else {
        json obj;
        obj["type"] = "space";
        obj["configs"] = space.size();
        std::cout << obj.dump() << '\n';
    }
    if (run_liveness) {
        emit("LIVENESS", "liveness", dcv::check_liveness(space));
    }
    for (const std::string& name : property_names) {
        dcv::CheckReport report =
            dcv::check_safety(scenario->properties.at(name).formula, space, registry);
        emit("SAFETY " + name, "safety:" + name, report);
    }
    return all_hold ? kOk : kViolated;
}

int cmd_eval(const CommonOpts& opts, const std::string& agent, const std::string& coalition,
             const std::string& action_text, const std::string& info_list) {
    auto scenario = load_scenario(opts);
    if (!scenario.has_value()) return kUsage;

    auto action = dcv::action_from_string(action_text);
    if (!action.has_value()) {
        std::cerr << "error: --action must be READ or WRITE\n";
        return kUsage;
    }
    std::set<dcv::Information> items;
    std::stringstream splitter(info_list);
    std::string item;
    while (std::getline(splitter, item, ',')) {
        if (!item.empty()) items.insert(dcv::Information{item});
    }

    dcv::Effect effect;
    try {
        dcv::CoalitionState init = dcv::initial_state(*scenario);
        effect = dcv::request_info(init, dcv::AgentId{agent}, dcv::CoalitionId{coalition},
                                   *action, items);
    } catch (const dcv::CoalitionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }

    if (opts.format == "plain") {
        std::cout << "EFFECT: " << dcv::to_string(effect) << '\n';
    } else {
        json obj;
        obj["type"] = "effect";
        obj["effect"] = dcv::to_string(effect);
        std::cout << obj.dump() << '\n';
    }
    return effect == dcv::Effect::PERMIT ? kOk : kViolated;
}

int cmd_validate(const CommonOpts& opts) {
    auto scenario = load_scenario(opts);
    if (!scenario.has_value()) return kUsage;
    dcv::OpRegistry registry = dcv::build_registry(*scenario);
    dcv::ValidationReport report = dcv::validate_workflow(scenario->workflow, registry);

    if (opts.format == "plain") {
        std::cout << "VALIDATION: " << (report.ok() ? "OK" : "FAILED") << " ("
                  << report.errors().size() << " errors, " << report.warnings().size()
                  << " warnings)\n";
        for (const dcv::ValidationIssue& issue : report.issues) {
            std::cout << (issue.severity == dcv::ValidationIssue::Severity::ERROR ? "ERROR "
                                                                                  : "WARNING ")
                      << issue.node.value << ": " << issue.code << ": " << issue.message << '\n';
        }
    } else {
        json obj;
        obj["type"] = "validation";
        obj["ok"] = report.ok();
        json issues = json::array();
        for (const dcv::ValidationIssue& issue : report.issues) {
            json entry;
            entry["severity"] =
                issue.severity == dcv::ValidationIssue::Severity::ERROR ? "error" : "warning";
            entry["node"] = issue.node.value;
            entry["code"] = issue.code;
            entry["message"] = issue.message;
            issues.push_back(entry);
        }
        obj["issues"] = issues;
        std::cout << obj.dump() << '\n';
    }
    return report.ok() ? kOk : kUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dcv, a dynamic-coalition workflow verifier"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "Execute a scenario workflow");
    add_common(run_cmd, run_opts);

    CommonOpts check_opts;
    bool liveness = false;
    std::vector<std::string> safety;
    CLI::App* check_cmd =
        app.add_subcommand("check", "Check liveness/safety over the reachable space");
    add_common(check_cmd, check_opts);
    check_cmd->add_flag("--liveness", liveness, "Check deadlock freedom");
    check_cmd->add_option("--safety", safety,
                          "Check a forbidden-state property by name, or 'all'");

    CommonOpts eval_opts;
    std::string agent;
    std::string coalition;
    std::string action_text;
    std::string info_list;
    CLI::App* eval_cmd =
        app.add_subcommand("eval", "Evaluate one access request on the initial state");
    add_common(eval_cmd, eval_opts);
    eval_cmd->add_option("--agent", agent, "Requesting agent")->required();
    eval_cmd->add_option("--coalition", coalition, "Coalition holding the information")
        ->required();
    eval_cmd->add_option("--action", action_text, "READ or WRITE")->required();
    eval_cmd->add_option("--info", info_list, "Comma-separated information items")->required();

    CommonOpts validate_opts;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Structural workflow report");
    add_common(validate_cmd, validate_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_opts);
        if (check_cmd->parsed()) return cmd_check(check_opts, liveness, safety);
        if (eval_cmd->parsed()) {
            return cmd_eval(eval_opts, agent, coalition, action_text, info_list);
        }
        if (validate_cmd->parsed()) return cmd_validate(validate_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
