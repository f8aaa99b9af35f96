#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "workdyn/analysis.hpp"
#include "workdyn/dissimilarity.hpp"
#include "workdyn/equilibrium.hpp"
#include "workdyn/export.hpp"
#include "workdyn/ingest.hpp"
#include "workdyn/integrate.hpp"
#include "workdyn/model.hpp"

namespace py = pybind11;
using namespace workdyn;

PYBIND11_MODULE(_workdyn, m) {
    m.doc() = "labor-market predator-prey dissimilarity dynamics toolkit";

    auto base = py::register_exception<Error>(m, "WorkdynError", PyExc_RuntimeError);
    py::register_exception<InvalidConfig>(m, "InvalidConfigError", base);
    py::register_exception<DegenerateDenominator>(m, "DegenerateDenominatorError", base);
    py::register_exception<NonFiniteState>(m, "NonFiniteStateError", base);
    py::register_exception<SingularEquilibrium>(m, "SingularEquilibriumError", base);
    py::register_exception<NoConvergence>(m, "NoConvergenceError", base);
    py::register_exception<ParseError>(m, "ParseError", base);

    py::enum_<FunctionalResponseKind>(m, "FunctionalResponseKind")
        .value("LotkaVolterra", FunctionalResponseKind::LotkaVolterra)
        .value("HollingII", FunctionalResponseKind::HollingII);

    py::class_<StateVector>(m, "StateVector")
        .def(py::init<>())
        .def(py::init([](double u, double v, double w) { return StateVector{u, v, w}; }),
             py::arg("u"), py::arg("v"), py::arg("w"))
        .def_readwrite("u", &StateVector::u)
        .def_readwrite("v", &StateVector::v)
        .def_readwrite("w", &StateVector::w)
        .def("__repr__", [](const StateVector& s) {
            return "StateVector(u=" + std::to_string(s.u) + ", v=" + std::to_string(s.v) +
                   ", w=" + std::to_string(s.w) + ")";
        });

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("a", &ModelParams::a)
        .def_readwrite("b", &ModelParams::b)
        .def_readwrite("c", &ModelParams::c)
        .def_readwrite("alpha1", &ModelParams::alpha1)
        .def_readwrite("alpha2", &ModelParams::alpha2)
        .def_readwrite("k1", &ModelParams::k1)
        .def_readwrite("k2", &ModelParams::k2)
        .def_readwrite("w_dag", &ModelParams::w_dag)
        .def_readwrite("u0", &ModelParams::u0)
        .def_readwrite("v0", &ModelParams::v0)
        .def_readwrite("w0", &ModelParams::w0)
        .def_readwrite("response1", &ModelParams::response1)
        .def_readwrite("response2", &ModelParams::response2)
        .def("validate", &ModelParams::validate);

    m.def("functional_response", &functional_response, py::arg("kind"), py::arg("x"),
          py::arg("y"), py::arg("k"), py::arg("eps_den") = kDenominatorGuard);
    m.def("derivative", &derivative, py::arg("params"), py::arg("state"));
    m.def("derivative_blasius", &derivative_blasius, py::arg("params"), py::arg("state"));

    py::class_<IntegrationConfig>(m, "IntegrationConfig")
        .def(py::init<>())
        .def_readwrite("t0", &IntegrationConfig::t0)
        .def_readwrite("t_end", &IntegrationConfig::t_end)
        .def_readwrite("dt", &IntegrationConfig::dt)
        .def_readwrite("adaptive", &IntegrationConfig::adaptive)
        .def_readwrite("tol", &IntegrationConfig::tol)
        .def_readwrite("record_every", &IntegrationConfig::record_every)
        .def("validate", &IntegrationConfig::validate);

    py::class_<ScaleStreams>(m, "ScaleStreams")
        .def(py::init<>())
        .def_readwrite("t0", &ScaleStreams::t0)
        .def_readwrite("u0", &ScaleStreams::u0)
        .def_readwrite("v0", &ScaleStreams::v0)
        .def_readwrite("w0", &ScaleStreams::w0);

    py::class_<Trajectory>(m, "Trajectory")
        .def(py::init<>())
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("params", &Trajectory::params)
        .def("__len__", &Trajectory::size)
        .def("component", [](const Trajectory& t, const std::string& which) {
            if (which != "u" && which != "v" && which != "w")
                throw InvalidConfig("component", "must be u, v or w");
            return t.component(which[0]);
        });

    m.def("integrate",
          py::overload_cast<const ModelParams&, const StateVector&, const IntegrationConfig&>(
              &integrate),
          py::arg("params"), py::arg("initial"), py::arg("config"));
    m.def("integrate",
          py::overload_cast<const ModelParams&, const StateVector&, const IntegrationConfig&,
                            const ScaleStreams&>(&integrate),
          py::arg("params"), py::arg("initial"), py::arg("config"), py::arg("scales"));
    m.def("order_check", &order_check, py::arg("params"), py::arg("initial"),
          py::arg("t_span"));

    py::enum_<EquilibriumMethod>(m, "EquilibriumMethod")
        .value("AnalyticLV", EquilibriumMethod::AnalyticLV)
        .value("FixedPointHolling", EquilibriumMethod::FixedPointHolling);

    py::class_<EquilibriumPoint>(m, "EquilibriumPoint")
        .def_readonly("state", &EquilibriumPoint::state)
        .def_readonly("residual", &EquilibriumPoint::residual)
        .def_readonly("method", &EquilibriumPoint::method)
        .def_readonly("iterations", &EquilibriumPoint::iterations)
        .def("has_negative_component", &EquilibriumPoint::has_negative_component);

    m.def("equilibrium_lv", &equilibrium_lv, py::arg("params"));
    m.def("equilibrium_holling_k2zero", &equilibrium_holling_k2zero, py::arg("params"),
          py::arg("seed"), py::arg("max_iter") = 200, py::arg("tol") = 1e-12,
          py::arg("residual_tol") = kResidualTol);
    m.def("verify_equilibrium", &verify_equilibrium, py::arg("params"), py::arg("state"));

    py::class_<YearMonth>(m, "YearMonth")
        .def(py::init([](int year, int month) { return YearMonth{year, month}; }),
             py::arg("year"), py::arg("month"))
        .def_readwrite("year", &YearMonth::year)
        .def_readwrite("month", &YearMonth::month)
        .def("__str__", &YearMonth::str)
        .def("__eq__", [](const YearMonth& a, const YearMonth& b) { return a == b; });

    py::class_<LaborRecord>(m, "LaborRecord")
        .def(py::init<>())
        .def(py::init([](YearMonth period, long long balance, long long workers,
                         long long employers) {
                 return LaborRecord{period, balance, workers, employers};
             }),
             py::arg("period"), py::arg("balance"), py::arg("workers"), py::arg("employers"))
        .def_readwrite("period", &LaborRecord::period)
        .def_readwrite("balance", &LaborRecord::balance)
        .def_readwrite("workers", &LaborRecord::workers)
        .def_readwrite("employers", &LaborRecord::employers);

    py::enum_<NumberLocale>(m, "NumberLocale")
        .value("Brazilian", NumberLocale::Brazilian)
        .value("Plain", NumberLocale::Plain);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("records", &Dataset::records)
        .def_readonly("source", &Dataset::source)
        .def_readonly("gaps", &Dataset::gaps);

    py::class_<BalanceDiscrepancy>(m, "BalanceDiscrepancy")
        .def_readonly("period", &BalanceDiscrepancy::period)
        .def_readonly("discrepancy", &BalanceDiscrepancy::discrepancy);

    m.def(
        "parse_dataset",
        [](const std::string& text, NumberLocale locale, bool allow_gaps) {
            return parse_dataset(text, {locale, allow_gaps});
        },
        py::arg("text"), py::arg("locale") = NumberLocale::Brazilian,
        py::arg("allow_gaps") = false);
    m.def(
        "load_dataset",
        [](const std::string& path, NumberLocale locale, bool allow_gaps) {
            return load_dataset(path, {locale, allow_gaps});
        },
        py::arg("path"), py::arg("locale") = NumberLocale::Brazilian,
        py::arg("allow_gaps") = false);
    m.def("validate_balances", &validate_balances, py::arg("dataset"));
    m.def("to_csv", &to_csv, py::arg("dataset"));
    m.def("caged_sample", &caged_sample, py::return_value_policy::reference);

    py::enum_<SeriesComponent>(m, "SeriesComponent")
        .value("Balance", SeriesComponent::Balance)
        .value("Workers", SeriesComponent::Workers)
        .value("Employers", SeriesComponent::Employers);

    py::class_<DissimilarityMatrix>(m, "DissimilarityMatrix")
        .def_readonly("n", &DissimilarityMatrix::n)
        .def_readonly("r", &DissimilarityMatrix::r)
        .def_readonly("normalized", &DissimilarityMatrix::normalized)
        .def_readonly("values", &DissimilarityMatrix::values)
        .def("at", [](const DissimilarityMatrix& m_, std::size_t i, std::size_t j) {
            if (i >= m_.n || j >= m_.n) throw py::index_error();
            return m_.at(i, j);
        });

    py::class_<DissimilaritySeries>(m, "DissimilaritySeries")
        .def_readonly("component", &DissimilaritySeries::component)
        .def_readonly("values", &DissimilaritySeries::values)
        .def_readonly("lag", &DissimilaritySeries::lag);

    m.def(
        "minkowski_distance",
        [](const std::vector<double>& x, const std::vector<double>& y, double r) {
            return minkowski_distance(x, y, r);
        },
        py::arg("x"), py::arg("y"), py::arg("r") = 2.0);
    m.def(
        "build_matrix",
        [](const std::vector<LaborRecord>& records, double r, bool normalize) {
            return build_matrix(records, r, normalize);
        },
        py::arg("records"), py::arg("r") = 2.0, py::arg("normalize") = false);
    m.def(
        "series_from_records",
        [](const std::vector<LaborRecord>& records, SeriesComponent component, int lag,
           double r) { return series_from_records(records, component, lag, r); },
        py::arg("records"), py::arg("component"), py::arg("lag") = 1, py::arg("r") = 2.0);
    m.def(
        "scale_streams",
        [](const std::vector<LaborRecord>& records, int lag, double r, double t0) {
            return scale_streams(records, lag, r, t0);
        },
        py::arg("records"), py::arg("lag") = 1, py::arg("r") = 2.0, py::arg("t0") = 0.0);

    py::class_<PeakSet>(m, "PeakSet")
        .def_readonly("indices", &PeakSet::indices)
        .def_readonly("prominence_min", &PeakSet::prominence_min);

    py::class_<RelaxationReport>(m, "RelaxationReport")
        .def_readonly("split_index", &RelaxationReport::split_index)
        .def_readonly("early_amplitude", &RelaxationReport::early_amplitude)
        .def_readonly("late_amplitude", &RelaxationReport::late_amplitude)
        .def_readonly("ratio", &RelaxationReport::ratio);

    m.def(
        "find_peaks",
        [](const std::vector<double>& series, int smoothing_window,
           std::optional<double> prominence_min) {
            return find_peaks(series, smoothing_window, prominence_min);
        },
        py::arg("series"), py::arg("smoothing_window") = 3,
        py::arg("prominence_min") = py::none());
    m.def(
        "phase_lag",
        [](const std::vector<double>& a, const std::vector<double>& b, int max_lag) {
            return phase_lag(a, b, max_lag);
        },
        py::arg("series_a"), py::arg("series_b"), py::arg("max_lag"));
    m.def(
        "relaxation_metric",
        [](const std::vector<double>& series, double split_fraction) {
            return relaxation_metric(series, split_fraction);
        },
        py::arg("series"), py::arg("split_fraction") = 0.5);
    m.def(
        "sign_changes",
        [](const std::vector<double>& series) { return sign_changes(series); },
        py::arg("series"));

    py::enum_<Component>(m, "Component")
        .value("U", Component::U)
        .value("V", Component::V)
        .value("W", Component::W);

    py::enum_<PlotKind>(m, "PlotKind")
        .value("TimeseriesOverlay", PlotKind::TimeseriesOverlay)
        .value("PhasePortrait2D", PlotKind::PhasePortrait2D)
        .value("PhasePortrait3DProjection", PlotKind::PhasePortrait3DProjection);

    py::class_<PlotSpec>(m, "PlotSpec")
        .def(py::init<>())
        .def_readwrite("kind", &PlotSpec::kind)
        .def_readwrite("components", &PlotSpec::components)
        .def_readwrite("projection", &PlotSpec::projection)
        .def_readwrite("title", &PlotSpec::title)
        .def_readwrite("x_label", &PlotSpec::x_label)
        .def_readwrite("y_label", &PlotSpec::y_label)
        .def("validate", &PlotSpec::validate);

    m.def("trajectory_csv", &trajectory_csv, py::arg("trajectory"));
    m.def(
        "trajectory_from_csv",
        [](const std::string& text) { return trajectory_from_csv(text); }, py::arg("text"));
    m.def("matrix_csv", &matrix_csv, py::arg("matrix"));
    m.def("series_csv", &series_csv, py::arg("series"));
    m.def("render_svg", &render_svg, py::arg("trajectory"), py::arg("spec"));
}
