// Task execution: runs the configured computation and writes its output
// files (CSV grids plus JSON metadata sidecars, or a JSON report).
#pragma once

#include "pbsim/config.hpp"

#include <filesystem>

namespace pbsim {

struct RunOptions {
    std::filesystem::path out_dir{"."};
    int workers{1};
    bool quiet{false};
};

/// Executes the task. Returns exit status 0 on success and 2 on solver
/// failure (a diagnostic goes to stderr); configuration problems throw
/// before any computation starts. Partial sweep failures are not fatal:
/// they produce marker rows and a warning count in the metadata.
int run_task(const ExperimentConfig& config, const RunOptions& options = {});

/// The sweep CSV body: axis-name columns, then one g<n> column per
/// requested order, then n_mean and residual; 17-significant-digit decimal
/// formatting, '\n' line endings, byte-stable for a given result.
std::string sweep_csv(const SweepResult& result);

}  // namespace pbsim
