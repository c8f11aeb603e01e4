// Copyright (c) 2026 The dcv Authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dcv/scenario.hpp"

namespace dcv::testing {

inline std::string scenario_dir() {
#ifdef DCV_SCENARIO_DIR
    return DCV_SCENARIO_DIR;
#else
    return "scenarios";
#endif
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline std::string scenario_text(const std::string& name) {
    return read_file(scenario_dir() + "/" + name);
}

/// Parses a shipped scenario; throws with the diagnostics on failure so
/// broken fixtures fail loudly.
inline Scenario load_scenario(const std::string& name) {
    ParseResult result = parse_scenario(scenario_text(name));
    if (!result.ok()) {
        throw std::runtime_error("fixture " + name + " failed to parse:\n" +
                                 render_diagnostics(result.diagnostics));
    }
    return std::move(*result.scenario);
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs the dcv binary with the given arguments, capturing both streams.
inline CliResult run_cli(const std::string& args) {
#ifdef DCV_CLI_PATH
    const std::string binary = DCV_CLI_PATH;
#else
    const std::string binary = "./dcv";
#endif
    static int counter = 0;
    std::string out_path = "/tmp/dcv_test_out_" + std::to_string(++counter);
    std::string err_path = "/tmp/dcv_test_err_" + std::to_string(counter);
    std::string command = binary + " " + args + " > " + out_path + " 2> " + err_path;
    int status = std::system(command.c_str());
    CliResult result;
    if (status == -1) {
        result.exit_code = -1;
    } else {
        result.exit_code = WEXITSTATUS(status);
    }
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return result;
}

inline std::string golden(const std::string& name) {
    return scenario_dir() + "/" + name;
}

}  // namespace dcv::testing
