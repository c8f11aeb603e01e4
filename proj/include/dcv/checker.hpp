// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcv/engine.hpp"
#include "dcv/formula.hpp"

namespace dcv {

/// An alternative initial state, typically the scenario state rebuilt
/// with different agent policies. Exploration seeds one configuration per
/// variant in addition to the base state.
struct PolicyVariant {
    std::string name;
    CoalitionState init;
};

struct ExploreLimits {
    int max_steps = 10000;
    std::size_t state_cap = 1000000;
    int workers = 1;
};

class StateLimitExceeded : public std::runtime_error {
public:
    explicit StateLimitExceeded(std::size_t cap)
        : std::runtime_error("exploration exceeded the state cap of " + std::to_string(cap)) {}
};

/// The reachable configuration space: breadth-first closure of the step
/// relation, deduplicated by (node, canonical state, bindings). Edge
/// annotations keep the trace line of each transition so witnesses can be
/// rendered exactly like run traces.
struct ExplorationSpace {
    std::vector<Config> configs;
    std::vector<std::vector<std::size_t>> successors;
    /// BFS tree edge into each config: (parent index, transition line).
    std::vector<std::optional<std::pair<std::size_t, TraceStep>>> parent;
    std::vector<std::size_t> initial;
    std::vector<std::string> variant_of;  // per config; "" = base scenario
    std::vector<std::size_t> stuck;       // non-terminal, no successor
    std::vector<std::size_t> terminal;    // terminal or guard-faulted
    /// The visit line of each stuck or terminal config (the guard
    /// evaluation that failed, or the terminal outcome).
    std::vector<std::optional<TraceStep>> final_visit;

    std::size_t size() const { return configs.size(); }

    bool is_terminal(std::size_t index) const;
    bool is_stuck(std::size_t index) const;

    /// Trace prefix from the initial config to `index`, renumbered from 0.
    std::vector<TraceStep> trace_to(std::size_t index) const;
};

ExplorationSpace reachable(const Workflow& workflow, const CoalitionState& init,
                           const OpRegistry& registry,
                           const std::vector<PolicyVariant>& variants = {},
                           const ExploreLimits& limits = {});

struct CheckReport {
    enum class Verdict { HOLDS, VIOLATED };

    Verdict verdict = Verdict::HOLDS;
    std::optional<std::size_t> witness;           // config index
    std::optional<NodeId> witness_node;
    std::vector<TraceStep> witness_trace;         // incl. the stuck visit, for liveness
    std::map<std::string, std::string> witness_assignment;
    std::string witness_variant;
};

std::string to_string(CheckReport::Verdict verdict);

/// HOLDS iff every non-terminal reachable configuration has a successor.
/// A violation carries the stuck configuration, its trace prefix and the
/// guard evaluation that failed there.
CheckReport check_liveness(const ExplorationSpace& space);

struct FormulaEval {
    bool value = false;
    std::map<std::string, Value> assignment;  // first satisfying, canonical order
};

/// Evaluates a formula on one configuration. Quantifiers range over the
/// finite carriers of the configuration: information items present in the
/// state or minted in the history, registered agents and coalitions.
/// Constants resolve against the registry declarations.
FormulaEval eval_formula(const Formula& formula, const Config& cfg, const OpRegistry& registry);

/// Treats `formula` as a forbidden-state description: HOLDS iff it is
/// false in every reachable configuration.
CheckReport check_safety(const Formula& formula, const ExplorationSpace& space,
                         const OpRegistry& registry);

/// Plain-text report block: verdict line plus witness trace, stable for
/// golden tests.
std::string render_report(const std::string& title, const CheckReport& report);

}  // namespace dcv
