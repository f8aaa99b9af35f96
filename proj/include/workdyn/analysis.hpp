#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "workdyn/errors.hpp"

namespace workdyn {

struct PeakSet {
    std::vector<std::size_t> indices;  // strictly increasing
    double prominence_min{0.0};        // threshold actually applied
};

struct RelaxationReport {
    std::size_t split_index{0};
    double early_amplitude{0.0};
    double late_amplitude{0.0};
    double ratio{0.0};  // late / early
};

/// Centered moving average; the window shrinks at the boundaries so the
/// output has the input's length. Window must be odd and >= 1.
std::vector<double> moving_average(std::span<const double> series, int window);

/// Strict local maxima of the smoothed series whose prominence (height above
/// the higher of the two flanking minima) reaches prominence_min. Without an
/// explicit threshold, 5% of the smoothed range is used.
PeakSet find_peaks(std::span<const double> series, int smoothing_window = 3,
                   std::optional<double> prominence_min = std::nullopt);

/// Lag in [-max_lag, max_lag] maximizing the Pearson cross-correlation of the
/// mean-removed series; positive means b trails a. Ties break toward smaller
/// |lag|. Throws ZeroVariance when either input is constant.
int phase_lag(std::span<const double> series_a, std::span<const double> series_b, int max_lag);

/// Amplitude ratio between the late and early parts, split at
/// floor(split_fraction * n); amplitude = standard deviation after linear
/// detrending. A flat series reports ratio 0 with both amplitudes 0.
RelaxationReport relaxation_metric(std::span<const double> series, double split_fraction = 0.5);

/// Post-integration diagnostic: number of strict sign flips (zeros are
/// skipped, not counted). The dynamics permit negative excursions; this
/// flags them without clamping anything.
int sign_changes(std::span<const double> series);

}  // namespace workdyn
