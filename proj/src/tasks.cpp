#include "pbsim/tasks.hpp"

#include "pbsim/io.hpp"
#include "pbsim/pbsim.hpp"

#include <json.hpp>

#include <chrono>
#include <iostream>

namespace pbsim {

namespace {

using nlohmann::json;

json params_json(const SystemParams& p) {
    return {{"delta_a", p.delta_a}, {"g", p.g},         {"theta0", p.theta0},
            {"omega", p.omega},     {"kappa", p.kappa}, {"kappa2", p.kappa2}};
}

json metadata_json(const ExperimentConfig& cfg, double wall_seconds, long warnings = 0) {
    return {{"dim", cfg.dim},
            {"residual_tol", cfg.solver.residual_tol},
            {"ode_rel_tol", cfg.solver.ode_rel_tol},
            {"ode_abs_tol", cfg.solver.ode_abs_tol},
            {"max_steps", cfg.solver.max_steps},
            {"config_hash", config_hash(cfg)},
            {"version", kVersion},
            {"wall_seconds", wall_seconds},
            {"warnings", warnings}};
}

void write_sidecar(const std::filesystem::path& dir, const std::string& task,
                   const json& meta) {
    write_file(dir / (task + ".meta.json"), meta.dump(2) + "\n");
}

// The weak-drive comparison is only meaningful well inside omega << kappa.
constexpr double kWeakDriveLimit = 0.05;

struct StopWatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

int run_steady(const ExperimentConfig& cfg, const RunOptions& opt) {
    StopWatch watch;
    const FockSpace space(cfg.dim);
    const auto l = liouvillian(cfg.params, space);
    const auto rho = steady_state(l, cfg.solver);
    const auto a = annihilation(space);

    json report;
    report["task"] = "steady";
    report["params"] = params_json(cfg.params);
    const double nbar = mean_photon(rho, a);
    report["mean_photon"] = nbar;
    for (int n = 2; n <= 4; ++n) {
        const std::string key = "g" + std::to_string(n);
        try {
            report[key] = gn_zero(rho, n, a);
        } catch (const ZeroOccupation&) {
            report[key] = nullptr;
        }
    }
    const auto pops = fock_populations(rho);
    report["fock_populations"] = std::vector<double>(pops.data(), pops.data() + pops.size());
    report["residual"] = steady_state_residual(l, rho);

    if (cfg.params.omega > 0 && cfg.params.omega <= kWeakDriveLimit * cfg.params.kappa) {
        const auto amps = analytic_amplitudes(cfg.params);
        json analytic;
        analytic["c1_abs"] = std::abs(amps.c1);
        analytic["c2_abs"] = std::abs(amps.c2);
        analytic["mean_photon"] = analytic_mean_photon(cfg.params);
        try {
            analytic["g2"] = analytic_g2(cfg.params);
        } catch (const ZeroOccupation&) {
            analytic["g2"] = nullptr;
        }
        report["analytic"] = analytic;
    } else {
        report["analytic"] = nullptr;
    }
    report["metadata"] = metadata_json(cfg, watch.seconds());
    write_file(opt.out_dir / "steady.json", report.dump(2) + "\n");
    if (!opt.quiet)
        std::cout << "wrote " << (opt.out_dir / "steady.json").string() << "\n";
    return 0;
}

int run_sweep_task(const ExperimentConfig& cfg, const RunOptions& opt) {
    StopWatch watch;
    const SweepResult result = run_sweep(cfg.sweep, cfg.solver, opt.workers);
    write_file(opt.out_dir / "sweep.csv", sweep_csv(result));

    json meta = metadata_json(cfg, watch.seconds(), result.failed_points);
    meta["points"] = result.grid.size();
    meta["failed_points"] = result.failed_points;
    meta["threshold"] = cfg.sweep.threshold;
    if (cfg.sweep.axes.size() == 2) {
        json areas;
        for (int n : cfg.sweep.orders)
            areas["g" + std::to_string(n)] = effective_area(result, n, cfg.sweep.threshold);
        meta["effective_area"] = areas;
    }
    write_sidecar(opt.out_dir, "sweep", meta);

    bool has_delta_axis = false;
    for (const auto& ax : cfg.sweep.axes)
        if (ax.name == AxisName::delta_a) has_delta_axis = true;
    if (has_delta_axis) {
        std::string overlay = "delta_a,g_opt,theta0_opt\n";
        for (const auto& pt : optimum_overlay(cfg.sweep)) {
            overlay += format_double(pt.delta_a);
            overlay += ',';
            overlay += format_double(pt.g_opt);
            overlay += ',';
            overlay += format_double(pt.theta0_opt);
            overlay += '\n';
        }
        write_file(opt.out_dir / "sweep_overlay.csv", overlay);
    }

    if (!opt.quiet) {
        std::cout << "wrote " << (opt.out_dir / "sweep.csv").string() << " ("
                  << result.grid.size() << " points";
        if (result.failed_points)
            std::cout << ", " << result.failed_points << " failed";
        std::cout << ")\n";
    }
    return 0;
}

int run_g2tau(const ExperimentConfig& cfg, const RunOptions& opt) {
    StopWatch watch;
    std::vector<double> grid(cfg.tau.steps);
    for (int i = 0; i < cfg.tau.steps; ++i) grid[i] = cfg.tau.value(i);
    const auto curve = g2_tau(cfg.params, FockSpace(cfg.dim), grid, cfg.solver);

    std::string csv = "tau,g2_tau\n";
    for (int i = 0; i < cfg.tau.steps; ++i) {
        csv += format_double(grid[i]);
        csv += ',';
        csv += format_double(curve[i]);
        csv += '\n';
    }
    write_file(opt.out_dir / "g2tau.csv", csv);
    write_sidecar(opt.out_dir, "g2tau", metadata_json(cfg, watch.seconds()));
    if (!opt.quiet)
        std::cout << "wrote " << (opt.out_dir / "g2tau.csv").string() << "\n";
    return 0;
}

int run_validate(const ExperimentConfig& cfg, const RunOptions& opt) {
    StopWatch watch;
    const FockSpace space(cfg.dim);
    const auto a = annihilation(space);
    const int steps = cfg.delta_range.steps;

    std::vector<double> numeric(steps), analytic(steps);
    detail::parallel_for(steps, opt.workers, [&](long i) {
        SystemParams p = cfg.params;
        p.delta_a = cfg.delta_range.value(int(i));
        analytic[i] = analytic_g2(p);
        numeric[i] = gn_zero(steady_state(liouvillian(p, space), cfg.solver), 2, a);
    });

    std::string csv = "delta_a,g2_analytic,g2_numeric,abs_diff\n";
    for (int i = 0; i < steps; ++i) {
        csv += format_double(cfg.delta_range.value(i));
        csv += ',';
        csv += format_double(analytic[i]);
        csv += ',';
        csv += format_double(numeric[i]);
        csv += ',';
        csv += format_double(std::abs(numeric[i] - analytic[i]));
        csv += '\n';
    }
    write_file(opt.out_dir / "validate.csv", csv);
    write_sidecar(opt.out_dir, "validate", metadata_json(cfg, watch.seconds()));
    if (!opt.quiet)
        std::cout << "wrote " << (opt.out_dir / "validate.csv").string() << "\n";
    return 0;
}

int run_fockpop(const ExperimentConfig& cfg, const RunOptions& opt) {
    StopWatch watch;
    const FockSpace space(cfg.dim);
    const int steps = cfg.delta_range.steps;
    const int levels = cfg.fock_levels;

    std::vector<std::vector<double>> rows(steps);
    detail::parallel_for(steps, opt.workers, [&](long i) {
        SystemParams p = cfg.params;
        p.delta_a = cfg.delta_range.value(int(i));
        const auto pops = fock_populations(steady_state(liouvillian(p, space), cfg.solver));
        rows[i].assign(pops.data(), pops.data() + levels);
    });

    std::string csv = "delta_a";
    for (int lv = 0; lv < levels; ++lv) {
        csv += ",P";
        csv += format_int(lv);
    }
    csv += '\n';
    for (int i = 0; i < steps; ++i) {
        csv += format_double(cfg.delta_range.value(i));
        for (double v : rows[i]) {
            csv += ',';
            csv += format_double(v);
        }
        csv += '\n';
    }
    write_file(opt.out_dir / "fockpop.csv", csv);
    write_sidecar(opt.out_dir, "fockpop", metadata_json(cfg, watch.seconds()));
    if (!opt.quiet)
        std::cout << "wrote " << (opt.out_dir / "fockpop.csv").string() << "\n";
    return 0;
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
    std::string csv;
    for (const auto& ax : result.spec.axes) {
        csv += to_string(ax.name);
        csv += ',';
    }
    for (int n : result.spec.orders) {
        csv += 'g';
        csv += format_int(n);
        csv += ',';
    }
    csv += "n_mean,residual\n";
    for (const auto& pt : result.grid) {
        for (double v : pt.axis_values) {
            csv += format_double(v);
            csv += ',';
        }
        for (double v : pt.gn) {
            csv += format_double(v);
            csv += ',';
        }
        csv += format_double(pt.n_mean);
        csv += ',';
        csv += format_double(pt.residual);
        csv += '\n';
    }
    return csv;
}

int run_task(const ExperimentConfig& cfg, const RunOptions& opt) {
    std::filesystem::create_directories(opt.out_dir);
    try {
        switch (cfg.task) {
            case TaskKind::steady: return run_steady(cfg, opt);
            case TaskKind::sweep: return run_sweep_task(cfg, opt);
            case TaskKind::g2tau: return run_g2tau(cfg, opt);
            case TaskKind::validate: return run_validate(cfg, opt);
            case TaskKind::fockpop: return run_fockpop(cfg, opt);
        }
    } catch (const Error& err) {
        std::cerr << "task '" << to_string(cfg.task) << "' failed: " << err.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace pbsim
