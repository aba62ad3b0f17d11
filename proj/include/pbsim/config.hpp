// Experiment configuration: a small line-oriented "key = value" format with
// [section] headers, plus canonical serialization. The exact grammar is
// documented in the README.
#pragma once

#include "pbsim/sweep.hpp"
#include "pbsim/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace pbsim {

enum class TaskKind { steady, sweep, g2tau, validate, fockpop };

const char* to_string(TaskKind task);

/// Uniform 1-D grid used by the g2tau/validate/fockpop tasks.
struct GridSpec {
    double start{};
    double stop{};
    int steps{2};

    void validate(const std::string& what) const;
    double value(int i) const { return start + (stop - start) * double(i) / double(steps - 1); }
};

struct ExperimentConfig {
    SystemParams params;
    int dim{16};
    SolverConfig solver;
    TaskKind task{TaskKind::steady};

    // task.sweep
    SweepSpec sweep;  // base/dim mirrored from params/dim during parsing

    // task.g2tau
    GridSpec tau{0.0, 20.0, 201};

    // task.validate / task.fockpop
    GridSpec delta_range;
    int fock_levels{6};
};

/// One "--section.key value" style override applied on top of the file.
struct ConfigOverride {
    std::string key;  // dotted path, e.g. "params.kappa2"
    std::string value;
};

/// Parses config text. Malformed syntax raises ParseError with a line
/// number; invariant violations raise ValidationError naming the key.
ExperimentConfig parse_config(std::string_view text, const std::vector<ConfigOverride>& overrides = {});

/// Canonical serialization; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a 64-bit hash of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace pbsim
