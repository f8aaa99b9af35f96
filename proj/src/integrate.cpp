#include "workdyn/integrate.hpp"

#include <cmath>
#include <limits>

namespace workdyn {

void IntegrationConfig::validate() const {
    if (!std::isfinite(t0)) throw InvalidConfig("t0", "must be finite");
    if (!std::isfinite(t_end) || t_end <= t0) throw InvalidConfig("t_end", "must be > t0");
    if (!std::isfinite(dt) || dt <= 0.0) throw InvalidConfig("dt", "must be > 0");
    if (!std::isfinite(tol) || tol <= 0.0) throw InvalidConfig("tol", "must be > 0");
    if (record_every < 1) throw InvalidConfig("record_every", "must be >= 1");
}

void ScaleStreams::validate() const {
    if (u0.size() != v0.size() || u0.size() != w0.size())
        throw InvalidConfig("scales", "streams must share one length");
    if (u0.empty()) throw InvalidConfig("scales", "streams must be non-empty");
    for (std::size_t i = 0; i < u0.size(); ++i) {
        if (!(u0[i] > 0.0) || !(v0[i] > 0.0) || !(w0[i] > 0.0))
            throw InvalidConfig("scales", "stream values must be > 0");
    }
}

std::vector<double> Trajectory::component(char which) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states)
        out.push_back(which == 'u' ? s.u : which == 'v' ? s.v : s.w);
    return out;
}

namespace {

StateVector axpy(const StateVector& y, double h, const StateVector& d) {
    return {y.u + h * d.u, y.v + h * d.v, y.w + h * d.w};
}

// RHS with scales substituted per evaluation time when streams are present.
struct Rhs {
    const ModelParams& params;
    const ScaleStreams* scales;  // nullable

    StateVector operator()(double t, const StateVector& s) const {
        if (!scales) return derivative(params, s);
        const auto n = static_cast<long long>(scales->u0.size());
        long long idx = static_cast<long long>(std::floor(t - scales->t0));
        if (idx < 0) idx = 0;
        if (idx >= n) idx = n - 1;
        ModelParams p = params;
        p.u0 = scales->u0[static_cast<std::size_t>(idx)];
        p.v0 = scales->v0[static_cast<std::size_t>(idx)];
        p.w0 = scales->w0[static_cast<std::size_t>(idx)];
        return derivative(p, s);
    }
};

StateVector rk4_step(const Rhs& rhs, double t, const StateVector& y, double h) {
    try {
        const StateVector k1 = rhs(t, y);
        const StateVector k2 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k1));
        const StateVector k3 = rhs(t + 0.5 * h, axpy(y, 0.5 * h, k2));
        const StateVector k4 = rhs(t + h, axpy(y, h, k3));
        return {y.u + h / 6.0 * (k1.u + 2.0 * (k2.u + k3.u) + k4.u),
                y.v + h / 6.0 * (k1.v + 2.0 * (k2.v + k3.v) + k4.v),
                y.w + h / 6.0 * (k1.w + 2.0 * (k2.w + k3.w) + k4.w)};
    } catch (const DegenerateDenominator& e) {
        throw DegenerateDenominator(std::string(e.what()) + " in step starting at t = " +
                                    std::to_string(t));
    }
}

bool blown_up(const StateVector& s) { return !all_finite(s) || max_norm(s) > kBlowupNorm; }

void check_state(const StateVector& s, double last_good_time) {
    if (blown_up(s))
        throw NonFiniteState("state blew up (non-finite or max-norm > 1e12)", last_good_time);
}

Trajectory integrate_impl(const ModelParams& params, const StateVector& initial,
                          const IntegrationConfig& config, const ScaleStreams* scales) {
    params.validate();
    config.validate();
    if (scales) scales->validate();
    if (!all_finite(initial)) throw InvalidConfig("initial", "must be finite");

    const Rhs rhs{params, scales};
    Trajectory traj;
    traj.params = params;
    traj.times.push_back(config.t0);
    traj.states.push_back(initial);

    StateVector y = initial;
    double t = config.t0;
    const double span = config.t_end - config.t0;
    long long accepted = 0;

    auto record = [&](double time, const StateVector& state, bool force) {
        if (force || accepted % config.record_every == 0) {
            if (traj.times.back() < time) {
                traj.times.push_back(time);
                traj.states.push_back(state);
            }
        }
    };

    if (!config.adaptive) {
        const long long n_full = static_cast<long long>(std::floor(span / config.dt + 1e-9));
        for (long long i = 1; i <= n_full; ++i) {
            const double t_next = (i == n_full && config.t0 + n_full * config.dt >= config.t_end)
                                      ? config.t_end
                                      : config.t0 + static_cast<double>(i) * config.dt;
            y = rk4_step(rhs, t, y, t_next - t);
            check_state(y, t);
            t = t_next;
            ++accepted;
            record(t, y, false);
        }
        if (t < config.t_end) {  // short closing step onto t_end
            y = rk4_step(rhs, t, y, config.t_end - t);
            check_state(y, t);
            t = config.t_end;
            ++accepted;
        }
        record(config.t_end, y, true);
        return traj;
    }

    double h = config.dt;
    const double h_floor = config.dt * 0x1p-40;
    while (t < config.t_end) {
        const double remaining = config.t_end - t;
        h = std::min(h, remaining);
        const bool final_step = h == remaining;
        const StateVector one = rk4_step(rhs, t, y, h);
        const StateVector half = rk4_step(rhs, t + 0.5 * h, rk4_step(rhs, t, y, 0.5 * h), 0.5 * h);
        const bool finite = !blown_up(one) && !blown_up(half);
        const double err =
            finite ? max_norm({half.u - one.u, half.v - one.v, half.w - one.w}) / 15.0
                   : std::numeric_limits<double>::infinity();
        if (err <= config.tol) {
            y = half;
            check_state(y, t);
            t = final_step ? config.t_end : t + h;
            ++accepted;
            record(t, y, false);
            h = std::min(2.0 * h, config.dt);
        } else {
            h *= 0.5;
            if (h < h_floor)
                throw NonFiniteState("adaptive step size underflow", t);
        }
    }
    record(config.t_end, y, true);
    return traj;
}

}  // namespace

Trajectory integrate(const ModelParams& params, const StateVector& initial,
                     const IntegrationConfig& config) {
    return integrate_impl(params, initial, config, nullptr);
}

Trajectory integrate(const ModelParams& params, const StateVector& initial,
                     const IntegrationConfig& config, const ScaleStreams& scales) {
    return integrate_impl(params, initial, config, &scales);
}

double order_check(const ModelParams& params, const StateVector& initial, double t_span) {
    if (!(t_span > 0.0) || !std::isfinite(t_span))
        throw InvalidConfig("t_span", "must be > 0");
    auto final_state = [&](int steps) {
        IntegrationConfig cfg;
        cfg.t0 = 0.0;
        cfg.t_end = t_span;
        cfg.dt = t_span / steps;
        cfg.record_every = steps;  // only endpoints
        return integrate(params, initial, cfg).states.back();
    };
    const StateVector ref = final_state(512);
    const StateVector coarse = final_state(64);
    const StateVector fine = final_state(128);
    const double err_coarse =
        max_norm({coarse.u - ref.u, coarse.v - ref.v, coarse.w - ref.w});
    const double err_fine = max_norm({fine.u - ref.u, fine.v - ref.v, fine.w - ref.w});
    return std::log2(err_coarse / err_fine);
}

}  // namespace workdyn
