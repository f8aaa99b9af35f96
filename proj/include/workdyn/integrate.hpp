#pragma once

#include <cstddef>
#include <vector>

#include "workdyn/model.hpp"

namespace workdyn {

struct IntegrationConfig {
    double t0{0.0};
    double t_end{200.0};
    double dt{0.01};
    bool adaptive{false};
    double tol{1e-8};      // local error tolerance (adaptive mode)
    int record_every{1};   // output decimation factor

    void validate() const;
};

struct Trajectory {
    std::vector<double> times;        // strictly increasing, first = t0, last = t_end
    std::vector<StateVector> states;  // same length as times
    ModelParams params;

    std::size_t size() const { return times.size(); }
    std::vector<double> component(char which) const;  // 'u' | 'v' | 'w'
};

/// Piecewise-constant per-month observational scales. Value index for time t
/// is floor(t - t0), clamped into range; all three streams share one length.
struct ScaleStreams {
    double t0{0.0};
    std::vector<double> u0;
    std::vector<double> v0;
    std::vector<double> w0;

    bool empty() const { return u0.empty(); }
    void validate() const;
};

/// States above this max-norm count as blown up.
inline constexpr double kBlowupNorm = 1e12;

/// Classic RK4. Adaptive mode halves the step until the step-doubling error
/// estimate is within tol, then re-grows it geometrically (factor 2, capped
/// at dt). Throws NonFiniteState with the last finite time on blow-up.
Trajectory integrate(const ModelParams& params, const StateVector& initial,
                     const IntegrationConfig& config);

/// Same, with time-varying scales: u0/v0/w0 are read from the streams at
/// each stage-evaluation time instead of from params.
Trajectory integrate(const ModelParams& params, const StateVector& initial,
                     const IntegrationConfig& config, const ScaleStreams& scales);

/// Empirical convergence order from fixed-step runs at dt = t_span/64 and
/// dt/2, each compared against a dt/8 reference: p = log2(err(dt)/err(dt/2)).
double order_check(const ModelParams& params, const StateVector& initial, double t_span);

}  // namespace workdyn
