#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "workdyn/errors.hpp"
#include "workdyn/ingest.hpp"
#include "workdyn/integrate.hpp"

namespace workdyn {

/// Symmetric n x n matrix of pairwise Minkowski distances, row-major.
struct DissimilarityMatrix {
    std::size_t n{0};
    std::vector<double> values;  // n*n, row-major
    double r{2.0};               // Minkowski exponent
    bool normalized{false};

    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
};

enum class SeriesComponent { Balance, Workers, Employers };

/// Stream of consecutive-register dissimilarities for one component.
struct DissimilaritySeries {
    SeriesComponent component{SeriesComponent::Workers};
    std::vector<double> values;  // length = record count - lag
    int lag{1};
};

/// (sum_k |x_k - y_k|^r)^(1/r). Requires equal lengths >= 1 and r >= 1.
double minkowski_distance(std::span<const double> x, std::span<const double> y, double r);

/// Pairwise distances over the 3-feature vectors (balance, workers,
/// employers). With normalize, each feature is min-max scaled to [0,1]
/// first (constant features scale to 0).
DissimilarityMatrix build_matrix(std::span<const LaborRecord> records, double r,
                                 bool normalize);

/// Element t = |x_{t+lag} - x_t| of the chosen component (single-feature
/// Minkowski distance; the exponent only gets validated at d = 1).
DissimilaritySeries series_from_records(std::span<const LaborRecord> records,
                                        SeriesComponent component, int lag, double r);

/// The three lag-delta series packaged as per-month u0/v0/w0 streams
/// (balance -> u0, workers -> v0, employers -> w0), starting at t0.
ScaleStreams scale_streams(std::span<const LaborRecord> records, int lag, double r,
                           double t0 = 0.0);

double series_mean(const DissimilaritySeries& series);

}  // namespace workdyn
