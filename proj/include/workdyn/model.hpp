#pragma once

#include <algorithm>
#include <cmath>

#include "workdyn/errors.hpp"

namespace workdyn {

/// Predation term shape: bilinear product or saturating Holling type II.
enum class FunctionalResponseKind { LotkaVolterra, HollingII };

/// Instantaneous dissimilarity state: balance-of-workers (u, resource),
/// workers (v, prey), active employers (w, predator). Components may go
/// negative; the equations do not forbid it and nothing here clamps.
struct StateVector {
    double u{0.0};
    double v{0.0};
    double w{0.0};
};

inline double max_norm(const StateVector& s) {
    return std::max({std::abs(s.u), std::abs(s.v), std::abs(s.w)});
}

inline bool all_finite(const StateVector& s) {
    return std::isfinite(s.u) && std::isfinite(s.v) && std::isfinite(s.w);
}

/// All scalar coefficients of the model.
///
/// The member initializers are the documented default set: conventional
/// values for the sustained-oscillation regime of this family of systems.
/// They are defaults, not measurements — nothing here was fitted to data.
struct ModelParams {
    double a{1.0};       // growth rate of balance-of-workers dissimilarity
    double b{1.0};       // decay rate of worker dissimilarity
    double c{10.0};      // decay rate of employer dissimilarity
    double alpha1{0.2};  // resource-prey coupling
    double alpha2{1.0};  // prey-predator coupling
    double k1{0.05};     // carrying capacity, work market
    double k2{0.0};      // carrying capacity, employers
    double w_dag{0.006}; // predator floor w†
    double u0{1.0};      // observational scale, balance
    double v0{1.0};      // observational scale, workers
    double w0{1.0};      // observational scale, employers
    FunctionalResponseKind response1{FunctionalResponseKind::LotkaVolterra};
    FunctionalResponseKind response2{FunctionalResponseKind::LotkaVolterra};

    /// Throws InvalidConfig naming the offending field.
    void validate() const;
};

/// Guard threshold below which |1 + k*x| counts as a singular denominator.
inline constexpr double kDenominatorGuard = 1e-12;

/// f(x, y) = x*y (LotkaVolterra) or x*y/(1 + k*x) (HollingII).
/// Throws DegenerateDenominator when |1 + k*x| < eps_den in Holling mode.
double functional_response(FunctionalResponseKind kind, double x, double y, double k,
                           double eps_den = kDenominatorGuard);

/// Right-hand side of the scaled system:
///   u' = a*u*u0 - alpha1*f1(u*u0, v*v0, k1)
///   v' = -b*v*v0 + alpha1*f1(u*u0, v*v0, k1) - alpha2*f2(v*v0, w*w0, k2)
///   w' = -c*(w*w0 - w_dag) + alpha2*f2(v*v0, w*w0, k2)
StateVector derivative(const ModelParams& params, const StateVector& state);

/// Same right-hand side with u0 = v0 = w0 forced to 1 (the unscaled
/// reference system). Identical to derivative() when the scales are 1.
StateVector derivative_blasius(const ModelParams& params, const StateVector& state);

}  // namespace workdyn
