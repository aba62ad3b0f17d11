// Grid sweeps of steady-state correlators over the model parameters, plus
// the thresholded "effective area" robustness metric.
#pragma once

#include "pbsim/observables.hpp"
#include "pbsim/version.hpp"
#include "pbsim/weak_drive.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace pbsim {

enum class AxisName { delta_a, g, theta0, omega, kappa2 };

inline const char* to_string(AxisName name) {
    switch (name) {
        case AxisName::delta_a: return "delta_a";
        case AxisName::g: return "g";
        case AxisName::theta0: return "theta0";
        case AxisName::omega: return "omega";
        case AxisName::kappa2: return "kappa2";
    }
    return "?";
}

inline std::optional<AxisName> axis_name_from_string(const std::string& s) {
    if (s == "delta_a") return AxisName::delta_a;
    if (s == "g") return AxisName::g;
    if (s == "theta0") return AxisName::theta0;
    if (s == "omega") return AxisName::omega;
    if (s == "kappa2") return AxisName::kappa2;
    return std::nullopt;
}

enum class AxisSpacing { linear, log };

template <typename Scalar = double>
struct SweepAxisT {
    AxisName name{AxisName::delta_a};
    Scalar start{};
    Scalar stop{};
    int steps{2};
    AxisSpacing spacing{AxisSpacing::linear};

    void validate() const {
        if (!(start < stop))
            throw ValidationError(std::string("axis ") + to_string(name) +
                                  ": start must be < stop");
        if (steps < 2)
            throw ValidationError(std::string("axis ") + to_string(name) + ": steps must be >= 2");
        if (spacing == AxisSpacing::log && !(start > Scalar(0)))
            throw ValidationError(std::string("axis ") + to_string(name) +
                                  ": log spacing requires start > 0");
    }

    /// Grid coordinate of point i (linear in the axis measure).
    Scalar value(int i) const {
        const Scalar f = Scalar(i) / Scalar(steps - 1);
        if (spacing == AxisSpacing::log) {
            const Scalar la = std::log10(start), lb = std::log10(stop);
            return std::pow(Scalar(10), la + f * (lb - la));
        }
        return start + f * (stop - start);
    }

    /// Cell width around point i in the axis measure (log axes are measured
    /// in log10 units). Boundary cells are clipped to the domain, so the
    /// widths sum exactly to the axis span.
    Scalar cell_width(int i) const {
        const Scalar span =
            spacing == AxisSpacing::log ? std::log10(stop) - std::log10(start) : stop - start;
        const Scalar h = span / Scalar(steps - 1);
        return (i == 0 || i == steps - 1) ? h / Scalar(2) : h;
    }
};

using SweepAxis = SweepAxisT<double>;

template <typename Scalar = double>
struct SweepSpecT {
    SystemParamsT<Scalar> base;
    std::vector<SweepAxisT<Scalar>> axes;  // 1 to 3, distinct names
    int dim{16};
    std::vector<int> orders{2, 3, 4};  // subset of {2,3,4}, ascending
    Scalar threshold{Scalar(0.1)};     // effective-area cutoff

    void validate() const {
        base.validate();
        if (axes.empty() || axes.size() > 3)
            throw ValidationError("sweep needs 1 to 3 axes");
        for (std::size_t i = 0; i < axes.size(); ++i) {
            axes[i].validate();
            for (std::size_t j = i + 1; j < axes.size(); ++j)
                if (axes[i].name == axes[j].name)
                    throw ValidationError(std::string("duplicate sweep axis ") +
                                          to_string(axes[i].name));
        }
        if (dim < 3) throw ValidationError("dim must be >= 3");
        if (orders.empty()) throw ValidationError("orders must be non-empty");
        for (std::size_t i = 0; i < orders.size(); ++i) {
            if (orders[i] < 2 || orders[i] > kMaxCorrelatorOrder)
                throw ValidationError("orders must be within {2,3,4}");
            if (i > 0 && orders[i] <= orders[i - 1])
                throw ValidationError("orders must be strictly ascending");
        }
        if (!(threshold > Scalar(0) && threshold < Scalar(1)))
            throw ValidationError("threshold must lie in (0, 1)");
    }

    long point_count() const {
        long n = 1;
        for (const auto& ax : axes) n *= ax.steps;
        return n;
    }
};

using SweepSpec = SweepSpecT<double>;

/// One grid record. On solver failure ok=false and the numeric fields are
/// quiet NaNs (error marker).
template <typename Scalar = double>
struct SweepPointT {
    std::vector<Scalar> axis_values;
    std::vector<Scalar> gn;  // one value per requested order
    Scalar n_mean{};
    Scalar residual{};
    bool ok{false};
};

using SweepPoint = SweepPointT<double>;

template <typename Scalar = double>
struct SweepResultT {
    SweepSpecT<Scalar> spec;
    std::vector<SweepPointT<Scalar>> grid;  // lexicographic, last axis fastest
    long failed_points{0};
    double wall_seconds{0};
    SolverConfigT<Scalar> solver;
    std::string version{kVersion};
};

using SweepResult = SweepResultT<double>;

namespace detail {

// Decompose a flat grid index (last axis fastest) into per-axis indices.
template <typename Scalar>
std::array<int, 3> grid_indices(const SweepSpecT<Scalar>& spec, long flat) {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = int(spec.axes.size()) - 1; a >= 0; --a) {
        idx[a] = int(flat % spec.axes[a].steps);
        flat /= spec.axes[a].steps;
    }
    return idx;
}

template <typename Scalar>
SystemParamsT<Scalar> point_params(const SweepSpecT<Scalar>& spec,
                                   const std::array<int, 3>& idx) {
    SystemParamsT<Scalar> p = spec.base;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        const Scalar v = spec.axes[a].value(idx[a]);
        switch (spec.axes[a].name) {
            case AxisName::delta_a: p.delta_a = v; break;
            case AxisName::g: p.g = v; break;
            case AxisName::theta0: p.theta0 = v; break;
            case AxisName::omega: p.omega = v; break;
            case AxisName::kappa2: p.kappa2 = v; break;
        }
    }
    return p;
}

// Static block partition over [0, count); identical results for any worker
// count because every point writes only its own slot. The first exception
// raised by any worker is rethrown on the calling thread.
inline void parallel_for(long count, int workers, const std::function<void(long)>& body) {
    if (workers <= 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::mutex error_mutex;
    std::exception_ptr first_error;
    const long chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body, &error_mutex, &first_error] {
            try {
                for (long i = lo; i < hi; ++i) body(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

/// Evaluates the requested correlators on every grid point. Points are
/// independent; a failed point is recorded as a NaN marker instead of
/// aborting the sweep. Results are identical for any worker count.
template <typename Scalar = double>
SweepResultT<Scalar> run_sweep(const SweepSpecT<Scalar>& spec,
                               const SolverConfigT<Scalar>& cfg = {}, int workers = 1) {
    spec.validate();
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const long count = spec.point_count();
    const FockSpace space(spec.dim);
    const ComplexMatrix<Scalar> a = annihilation<Scalar>(space);
    const Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();

    SweepResultT<Scalar> result;
    result.spec = spec;
    result.solver = cfg;
    result.grid.resize(count);

    detail::parallel_for(count, workers, [&](long flat) {
        const auto idx = detail::grid_indices(spec, flat);
        SweepPointT<Scalar>& pt = result.grid[flat];
        pt.axis_values.resize(spec.axes.size());
        for (std::size_t ax = 0; ax < spec.axes.size(); ++ax)
            pt.axis_values[ax] = spec.axes[ax].value(idx[ax]);
        try {
            const SystemParamsT<Scalar> p = detail::point_params(spec, idx);
            const SuperoperatorT<Scalar> l = liouvillian(p, space);
            const DensityMatrixT<Scalar> rho = steady_state(l, cfg);
            pt.gn.reserve(spec.orders.size());
            for (int n : spec.orders) pt.gn.push_back(gn_zero(rho, n, a));
            pt.n_mean = mean_photon(rho, a);
            pt.residual = steady_state_residual(l, rho);
            pt.ok = true;
        } catch (const Error&) {
            pt.gn.assign(spec.orders.size(), nan);
            pt.n_mean = nan;
            pt.residual = nan;
            pt.ok = false;
        }
    });

    for (const auto& pt : result.grid)
        if (!pt.ok) ++result.failed_points;
    if (result.failed_points == count)
        throw AllPointsFailed("run_sweep: every grid point failed to solve");
    result.wall_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    return result;
}

/// Area of the region where g^(order)(0) < threshold on a 2-axis sweep,
/// midpoint-cell counting (log axes measured in log10 units). Error-marked
/// points count as above threshold.
template <typename Scalar = double>
Scalar effective_area(const SweepResultT<Scalar>& result, int order, Scalar threshold) {
    if (result.spec.axes.size() != 2)
        throw WrongArity("effective_area: result must have exactly 2 axes");
    std::size_t col = 0;
    for (; col < result.spec.orders.size(); ++col)
        if (result.spec.orders[col] == order) break;
    if (col == result.spec.orders.size())
        throw std::invalid_argument("effective_area: order not present in sweep result");

    const auto& ax0 = result.spec.axes[0];
    const auto& ax1 = result.spec.axes[1];
    Scalar area(0);
    for (int i = 0; i < ax0.steps; ++i)
        for (int j = 0; j < ax1.steps; ++j) {
            const auto& pt = result.grid[long(i) * ax1.steps + j];
            const Scalar v = pt.gn[col];
            if (pt.ok && v < threshold)  // NaN compares false
                area += ax0.cell_width(i) * ax1.cell_width(j);
        }
    return area;
}

template <typename Scalar>
Scalar effective_area(const SweepResultT<Scalar>& result, int order) {
    return effective_area(result, order, result.spec.threshold);
}

template <typename Scalar = double>
struct OptimumPointT {
    Scalar delta_a;
    Scalar g_opt;
    Scalar theta0_opt;
};

using OptimumPoint = OptimumPointT<double>;

/// For each grid value of the sweep's delta_a axis, the (g_opt, theta0_opt)
/// pair cancelling the two-photon amplitude, for annotation files.
template <typename Scalar = double>
std::vector<OptimumPointT<Scalar>> optimum_overlay(const SweepSpecT<Scalar>& spec) {
    const SweepAxisT<Scalar>* delta_axis = nullptr;
    for (const auto& ax : spec.axes)
        if (ax.name == AxisName::delta_a) delta_axis = &ax;
    if (!delta_axis)
        throw std::invalid_argument("optimum_overlay: sweep has no delta_a axis");
    std::vector<OptimumPointT<Scalar>> out;
    out.reserve(delta_axis->steps);
    for (int i = 0; i < delta_axis->steps; ++i) {
        const Scalar d = delta_axis->value(i);
        const auto opt = optimal_conditions(d, spec.base.omega, spec.base.kappa);
        out.push_back({d, opt.g_opt, opt.theta0_opt});
    }
    return out;
}

}  // namespace pbsim
