#include "workdyn/dissimilarity.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace workdyn {

double minkowski_distance(std::span<const double> x, std::span<const double> y, double r) {
    if (x.size() != y.size())
        throw DimensionMismatch("vectors have lengths " + std::to_string(x.size()) + " and " +
                                std::to_string(y.size()));
    if (x.empty()) throw DimensionMismatch("vectors must have length >= 1");
    if (!(r >= 1.0)) throw InvalidExponent("Minkowski exponent must be >= 1");
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) acc += std::pow(std::abs(x[k] - y[k]), r);
    return std::pow(acc, 1.0 / r);
}

namespace {

std::array<double, 3> features(const LaborRecord& rec) {
    return {static_cast<double>(rec.balance), static_cast<double>(rec.workers),
            static_cast<double>(rec.employers)};
}

double component_value(const LaborRecord& rec, SeriesComponent component) {
    switch (component) {
        case SeriesComponent::Balance: return static_cast<double>(rec.balance);
        case SeriesComponent::Workers: return static_cast<double>(rec.workers);
        default: return static_cast<double>(rec.employers);
    }
}

}  // namespace

DissimilarityMatrix build_matrix(std::span<const LaborRecord> records, double r,
                                 bool normalize) {
    if (records.size() < 2) throw EmptyInput("need at least 2 records");
    if (!(r >= 1.0)) throw InvalidExponent("Minkowski exponent must be >= 1");

    const std::size_t n = records.size();
    std::vector<std::array<double, 3>> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = features(records[i]);

    if (normalize) {
        for (std::size_t k = 0; k < 3; ++k) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            for (const auto& row : rows) {
                lo = std::min(lo, row[k]);
                hi = std::max(hi, row[k]);
            }
            const double span = hi - lo;
            for (auto& row : rows) row[k] = span > 0.0 ? (row[k] - lo) / span : 0.0;
        }
    }

    DissimilarityMatrix m;
    m.n = n;
    m.r = r;
    m.normalized = normalize;
    m.values.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = minkowski_distance(rows[i], rows[j], r);
            m.at(i, j) = d;
            m.at(j, i) = d;
        }
    }
    return m;
}

DissimilaritySeries series_from_records(std::span<const LaborRecord> records,
                                        SeriesComponent component, int lag, double r) {
    if (records.empty()) throw EmptyInput("no records");
    if (lag < 1) throw InvalidLag("lag must be >= 1");
    if (records.size() <= static_cast<std::size_t>(lag))
        throw InvalidLag("lag must be smaller than the record count");
    if (!(r >= 1.0)) throw InvalidExponent("Minkowski exponent must be >= 1");

    DissimilaritySeries series;
    series.component = component;
    series.lag = lag;
    const std::size_t count = records.size() - static_cast<std::size_t>(lag);
    series.values.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        const double a = component_value(records[t], component);
        const double b = component_value(records[t + static_cast<std::size_t>(lag)], component);
        series.values.push_back(std::abs(b - a));
    }
    return series;
}

ScaleStreams scale_streams(std::span<const LaborRecord> records, int lag, double r, double t0) {
    ScaleStreams streams;
    streams.t0 = t0;
    streams.u0 = series_from_records(records, SeriesComponent::Balance, lag, r).values;
    streams.v0 = series_from_records(records, SeriesComponent::Workers, lag, r).values;
    streams.w0 = series_from_records(records, SeriesComponent::Employers, lag, r).values;
    return streams;
}

double series_mean(const DissimilaritySeries& series) {
    if (series.values.empty()) throw EmptyInput("empty series");
    double acc = 0.0;
    for (double v : series.values) acc += v;
    return acc / static_cast<double>(series.values.size());
}

}  // namespace workdyn
