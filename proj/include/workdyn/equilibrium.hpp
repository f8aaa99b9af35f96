#pragma once

#include "workdyn/model.hpp"

namespace workdyn {

enum class EquilibriumMethod { AnalyticLV, FixedPointHolling };

struct EquilibriumPoint {
    StateVector state;
    double residual{0.0};  // max-norm of derivative at state
    EquilibriumMethod method{EquilibriumMethod::AnalyticLV};
    int iterations{0};  // fixed-point path only

    /// Sign diagnostic: true when any component is negative. Such points
    /// are reported as-is; the algebra admits them even though the
    /// dissimilarity reading of the states does not.
    bool has_negative_component() const { return state.u < 0 || state.v < 0 || state.w < 0; }
};

/// Fixed-point iteration failed to reach a stationary point; carries the
/// best iterate seen and its residual.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, EquilibriumPoint best)
        : Error(what), best_(best) {}
    const EquilibriumPoint& best() const { return best_; }

private:
    EquilibriumPoint best_;
};

inline constexpr double kSingularGuard = 1e-12;
inline constexpr double kResidualTol = 1e-8;

/// Closed-form stationary point for Lotka-Volterra responses:
///   v* = a/(alpha1*v0)
///   w* = c*w_dag / (c*w0 - alpha2*v0*w0*v*)
///   u* = [alpha1*alpha2*c*w_dag + b*(alpha1*c - alpha2*a)]
///        / [alpha1*u0*(alpha1*c - alpha2*a)]
/// Throws InvalidResponse unless both responses are LotkaVolterra and
/// SingularEquilibrium when a guarded denominator is below kSingularGuard.
EquilibriumPoint equilibrium_lv(const ModelParams& params);

/// Stationary point of the Holling/Holling system with k2 = 0, found by
/// iterating the cyclic closed-form relations v -> u -> w -> v from seed,
/// with a sticky 0.5-factor damping fallback once a sweep stops contracting.
/// Converged means successive state change < tol AND residual < residual_tol;
/// otherwise NoConvergence (carrying the best iterate) is thrown.
EquilibriumPoint equilibrium_holling_k2zero(const ModelParams& params, const StateVector& seed,
                                            int max_iter = 200, double tol = 1e-12,
                                            double residual_tol = kResidualTol);

/// Max-norm of derivative(params, state); pure diagnostic.
double verify_equilibrium(const ModelParams& params, const StateVector& state);

}  // namespace workdyn
