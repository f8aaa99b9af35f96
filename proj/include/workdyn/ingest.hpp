#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "workdyn/errors.hpp"

namespace workdyn {

struct YearMonth {
    int year{0};
    int month{1};  // 1..12

    auto operator<=>(const YearMonth&) const = default;

    /// Calendar successor.
    YearMonth next() const {
        return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
    }

    /// Signed month count from other to this.
    int months_since(const YearMonth& other) const {
        return (year - other.year) * 12 + (month - other.month);
    }

    /// "YYYY-MM".
    std::string str() const;
};

/// One monthly aggregate row: signed net worker flow, worker stock,
/// active-employer count.
struct LaborRecord {
    YearMonth period;
    long long balance{0};
    long long workers{0};
    long long employers{0};

    bool operator==(const LaborRecord&) const = default;
};

enum class NumberLocale {
    Brazilian,  // '.' is a thousands separator: "23.743.110" -> 23743110
    Plain       // '.' is a decimal point; values must be integers
};

struct ParseOptions {
    NumberLocale locale{NumberLocale::Brazilian};
    bool allow_gaps{false};
};

struct Dataset {
    std::vector<LaborRecord> records;  // strictly increasing periods
    std::string source;
    std::vector<YearMonth> gaps;  // months missing between records (allow_gaps only)
};

/// Parses delimiter-separated text (delimiter auto-detected among ';' ',' tab)
/// with the 4-column schema period / balance / workers / employers. A leading
/// header line is skipped. Periods accept MM/YYYY or YYYY-MM.
Dataset parse_dataset(std::string_view text, const ParseOptions& options = {});

/// File wrapper around parse_dataset; records the path as source.
Dataset load_dataset(const std::string& path, const ParseOptions& options = {});

struct BalanceDiscrepancy {
    YearMonth period;
    long long discrepancy;  // (workers_t - workers_{t-1}) - balance_t

    bool operator==(const BalanceDiscrepancy&) const = default;
};

/// Periods where the worker-stock finite difference disagrees with the
/// printed balance. Empty means the dataset satisfies the identity.
std::vector<BalanceDiscrepancy> validate_balances(const Dataset& dataset);

/// Normalized comma-delimited CSV (plain locale, YYYY-MM periods, header).
std::string to_csv(const Dataset& dataset);

/// The bundled 12-month 1996 sample, parsed once.
const Dataset& caged_sample();

/// Raw text of the bundled sample (semicolon-delimited, brazilian locale).
std::string_view caged_sample_text();

}  // namespace workdyn
