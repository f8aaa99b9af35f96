#include "workdyn/equilibrium.hpp"

#include <cmath>
#include <limits>

namespace workdyn {

EquilibriumPoint equilibrium_lv(const ModelParams& p) {
    p.validate();
    if (p.response1 != FunctionalResponseKind::LotkaVolterra ||
        p.response2 != FunctionalResponseKind::LotkaVolterra)
        throw InvalidResponse("analytic equilibrium requires both responses Lotka-Volterra");
    if (std::abs(p.alpha1) < kSingularGuard)
        throw SingularEquilibrium("alpha1 = 0: prey equilibrium undefined");

    const double v_star = p.a / (p.alpha1 * p.v0);

    const double den_w = p.c * p.w0 - p.alpha2 * p.v0 * p.w0 * v_star;
    if (std::abs(den_w) < kSingularGuard)
        throw SingularEquilibrium("c*w0 - alpha2*v0*w0*v* = 0");
    const double w_star = p.c * p.w_dag / den_w;

    const double den_u = p.alpha1 * p.c - p.alpha2 * p.a;
    if (std::abs(den_u) < kSingularGuard)
        throw SingularEquilibrium("alpha1*c = alpha2*a resonance");
    const double u_star =
        (p.alpha1 * p.alpha2 * p.c * p.w_dag + p.b * den_u) / (p.alpha1 * p.u0 * den_u);

    EquilibriumPoint point;
    point.state = {u_star, v_star, w_star};
    point.method = EquilibriumMethod::AnalyticLV;
    point.residual = verify_equilibrium(p, point.state);
    return point;
}

EquilibriumPoint equilibrium_holling_k2zero(const ModelParams& p, const StateVector& seed,
                                            int max_iter, double tol, double residual_tol) {
    p.validate();
    if (p.response1 != FunctionalResponseKind::HollingII ||
        p.response2 != FunctionalResponseKind::HollingII)
        throw InvalidResponse("cyclic equilibrium requires both responses Holling II");
    if (p.k2 != 0.0)
        throw InvalidResponse("cyclic equilibrium is derived for k2 = 0 only");
    if (max_iter < 1) throw InvalidConfig("max_iter", "must be >= 1");
    if (!(tol > 0.0)) throw InvalidConfig("tol", "must be > 0");
    if (std::abs(p.u0 * p.a * p.k1) < kSingularGuard)
        throw SingularEquilibrium("u0*a*k1 = 0: u(v) relation degenerates");
    if (std::abs(p.alpha2 * p.w0) < kSingularGuard)
        throw SingularEquilibrium("alpha2*w0 = 0: w(u) relation degenerates");

    StateVector x = seed;
    EquilibriumPoint best;
    best.state = x;
    best.method = EquilibriumMethod::FixedPointHolling;
    best.residual = std::numeric_limits<double>::infinity();

    double damping = 1.0;
    double prev_change = std::numeric_limits<double>::infinity();

    for (int iter = 1; iter <= max_iter; ++iter) {
        // One sweep of the cyclic relations: u from v, w from u, v from w.
        const double u_next = (p.alpha1 * x.v * p.v0 - p.a) / (p.u0 * p.a * p.k1);
        const double den1 = 1.0 + p.k1 * u_next * p.u0;
        if (std::abs(den1) < kSingularGuard)
            throw SingularEquilibrium("1 + k1*u*u0 = 0 at iterate");
        const double w_next =
            (p.alpha1 * u_next * p.u0 / den1 - p.b) / (p.alpha2 * p.w0);
        if (std::abs(w_next * p.w0) < kSingularGuard)
            throw SingularEquilibrium("w = 0 at iterate: v(w) relation degenerates");
        const double v_next =
            p.c * (w_next * p.w0 - p.w_dag) / (p.alpha2 * p.v0 * w_next * p.w0);

        const StateVector target{u_next, v_next, w_next};
        if (!all_finite(target))
            throw SingularEquilibrium("cyclic relations produced a non-finite iterate");

        const double change =
            max_norm({target.u - x.u, target.v - x.v, target.w - x.w});
        if (change >= prev_change) damping = std::max(damping * 0.5, 0x1p-20);
        prev_change = change;

        x = {x.u + damping * (target.u - x.u), x.v + damping * (target.v - x.v),
             x.w + damping * (target.w - x.w)};

        const double residual = verify_equilibrium(p, x);
        if (residual < best.residual) {
            best.state = x;
            best.residual = residual;
            best.iterations = iter;
        }

        // convergence is judged on the undamped map displacement: near the
        // root |G(x) - x| bounds the distance to it, damping or not
        if (change < tol) {
            if (best.residual < residual_tol) return best;
            throw NoConvergence("iterate stalled with residual above tolerance", best);
        }
    }
    if (best.residual < residual_tol) return best;
    throw NoConvergence("max iterations reached", best);
}

double verify_equilibrium(const ModelParams& params, const StateVector& state) {
    return max_norm(derivative(params, state));
}

}  // namespace workdyn
