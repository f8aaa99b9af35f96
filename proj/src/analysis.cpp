#include "workdyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace workdyn {

std::vector<double> moving_average(std::span<const double> series, int window) {
    if (window < 1 || window % 2 == 0)
        throw InvalidConfig("smoothing_window", "must be odd and >= 1");
    if (window == 1) return {series.begin(), series.end()};
    const std::size_t n = series.size();
    const std::size_t half = static_cast<std::size_t>(window / 2);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += series[j];
        out[i] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

namespace {

// Height above the higher of the two flanking minima: scan outward from the
// peak until terrain rises above it (or the boundary), take each side's
// minimum, and measure against the larger of the two.
double prominence(std::span<const double> s, std::size_t peak) {
    const double h = s[peak];
    double left_min = h;
    for (std::size_t i = peak; i-- > 0;) {
        if (s[i] > h) break;
        left_min = std::min(left_min, s[i]);
    }
    double right_min = h;
    for (std::size_t i = peak + 1; i < s.size(); ++i) {
        if (s[i] > h) break;
        right_min = std::min(right_min, s[i]);
    }
    return h - std::max(left_min, right_min);
}

double mean(std::span<const double> s) {
    double acc = 0.0;
    for (double v : s) acc += v;
    return acc / static_cast<double>(s.size());
}

// Population standard deviation of the residual after a least-squares line.
double detrended_std(std::span<const double> s) {
    const std::size_t n = s.size();
    if (n < 2) return 0.0;
    const double nd = static_cast<double>(n);
    const double x_mean = (nd - 1.0) / 2.0;
    const double y_mean = mean(s);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - x_mean;
        sxy += dx * (s[i] - y_mean);
        sxx += dx * dx;
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = s[i] - y_mean - slope * (static_cast<double>(i) - x_mean);
        ss += resid * resid;
    }
    return std::sqrt(ss / nd);
}

}  // namespace

PeakSet find_peaks(std::span<const double> series, int smoothing_window,
                   std::optional<double> prominence_min) {
    if (series.size() < 3) throw TooShort("need at least 3 samples");
    const std::vector<double> smooth = moving_average(series, smoothing_window);

    double threshold;
    if (prominence_min) {
        threshold = *prominence_min;
    } else {
        const auto [lo, hi] = std::minmax_element(smooth.begin(), smooth.end());
        threshold = 0.05 * (*hi - *lo);
    }

    PeakSet peaks;
    peaks.prominence_min = threshold;
    for (std::size_t i = 1; i + 1 < smooth.size(); ++i) {
        if (smooth[i] > smooth[i - 1] && smooth[i] > smooth[i + 1] &&
            prominence(smooth, i) >= threshold)
            peaks.indices.push_back(i);
    }
    return peaks;
}

int phase_lag(std::span<const double> a, std::span<const double> b, int max_lag) {
    if (a.size() != b.size())
        throw DimensionMismatch("series lengths differ");
    if (max_lag < 0) throw InvalidConfig("max_lag", "must be >= 0");
    if (a.size() <= 2 * static_cast<std::size_t>(max_lag))
        throw TooShort("series length must exceed 2*max_lag");

    const double ma = mean(a);
    const double mb = mean(b);
    auto variance = [](std::span<const double> s, double m) {
        double acc = 0.0;
        for (double v : s) acc += (v - m) * (v - m);
        return acc;
    };
    if (variance(a, ma) == 0.0 || variance(b, mb) == 0.0)
        throw ZeroVariance("constant series has no phase");

    const std::size_t n = a.size();
    int best_lag = 0;
    double best_corr = -std::numeric_limits<double>::infinity();
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
        // overlap of a[t] with b[t + lag]
        const std::size_t a_start = lag >= 0 ? 0 : static_cast<std::size_t>(-lag);
        const std::size_t b_start = lag >= 0 ? static_cast<std::size_t>(lag) : 0;
        const std::size_t len = n - static_cast<std::size_t>(std::abs(lag));
        double sab = 0.0, saa = 0.0, sbb = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            const double da = a[a_start + i] - ma;
            const double db = b[b_start + i] - mb;
            sab += da * db;
            saa += da * da;
            sbb += db * db;
        }
        if (saa == 0.0 || sbb == 0.0) continue;
        const double corr = sab / std::sqrt(saa * sbb);
        if (corr > best_corr ||
            (corr == best_corr && std::abs(lag) < std::abs(best_lag))) {
            best_corr = corr;
            best_lag = lag;
        }
    }
    return best_lag;
}

RelaxationReport relaxation_metric(std::span<const double> series, double split_fraction) {
    if (series.size() < 8) throw TooShort("need at least 8 samples");
    if (!(split_fraction > 0.0) || !(split_fraction < 1.0))
        throw InvalidConfig("split_fraction", "must be in (0, 1)");

    RelaxationReport report;
    report.split_index =
        static_cast<std::size_t>(std::floor(split_fraction * static_cast<double>(series.size())));
    report.split_index = std::clamp<std::size_t>(report.split_index, 1, series.size() - 1);
    report.early_amplitude = detrended_std(series.first(report.split_index));
    report.late_amplitude = detrended_std(series.subspan(report.split_index));
    if (report.early_amplitude == 0.0) {
        report.ratio =
            report.late_amplitude == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        report.ratio = report.late_amplitude / report.early_amplitude;
    }
    return report;
}

int sign_changes(std::span<const double> series) {
    int flips = 0;
    int last_sign = 0;
    for (double v : series) {
        const int sign = v > 0.0 ? 1 : v < 0.0 ? -1 : 0;
        if (sign == 0) continue;
        if (last_sign != 0 && sign != last_sign) ++flips;
        last_sign = sign;
    }
    return flips;
}

}  // namespace workdyn
