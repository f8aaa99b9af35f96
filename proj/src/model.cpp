#include "workdyn/model.hpp"

namespace workdyn {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) throw InvalidConfig(name, "must be finite");
}

}  // namespace

void ModelParams::validate() const {
    require_finite(a, "a");
    require_finite(b, "b");
    require_finite(c, "c");
    require_finite(alpha1, "alpha1");
    require_finite(alpha2, "alpha2");
    if (!(k1 >= 0.0)) throw InvalidConfig("k1", "must be >= 0");
    if (!(k2 >= 0.0)) throw InvalidConfig("k2", "must be >= 0");
    if (!(w_dag >= 0.0)) throw InvalidConfig("w_dag", "must be >= 0");
    if (!(u0 > 0.0) || !std::isfinite(u0)) throw InvalidConfig("u0", "must be > 0");
    if (!(v0 > 0.0) || !std::isfinite(v0)) throw InvalidConfig("v0", "must be > 0");
    if (!(w0 > 0.0) || !std::isfinite(w0)) throw InvalidConfig("w0", "must be > 0");
}

double functional_response(FunctionalResponseKind kind, double x, double y, double k,
                           double eps_den) {
    if (kind == FunctionalResponseKind::LotkaVolterra) return x * y;
    const double den = 1.0 + k * x;
    if (std::abs(den) < eps_den)
        throw DegenerateDenominator("functional response pole: |1 + k*x| < guard");
    return x * y / den;
}

StateVector derivative(const ModelParams& p, const StateVector& s) {
    const double su = s.u * p.u0;
    const double sv = s.v * p.v0;
    const double sw = s.w * p.w0;
    const double f1 = functional_response(p.response1, su, sv, p.k1);
    const double f2 = functional_response(p.response2, sv, sw, p.k2);
    return {p.a * su - p.alpha1 * f1,
            -p.b * sv + p.alpha1 * f1 - p.alpha2 * f2,
            -p.c * (sw - p.w_dag) + p.alpha2 * f2};
}

StateVector derivative_blasius(const ModelParams& p, const StateVector& s) {
    ModelParams unscaled = p;
    unscaled.u0 = 1.0;
    unscaled.v0 = 1.0;
    unscaled.w0 = 1.0;
    return derivative(unscaled, s);
}

}  // namespace workdyn
