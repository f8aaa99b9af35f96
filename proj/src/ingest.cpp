#include "workdyn/ingest.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "workdyn/numfmt.hpp"

namespace workdyn {

namespace {

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<YearMonth> try_parse_period(std::string_view field) {
    field = trim(field);
    // MM/YYYY
    if (field.size() == 7 && field[2] == '/') {
        auto mm = parse_int(field.substr(0, 2));
        auto yyyy = parse_int(field.substr(3, 4));
        if (mm && yyyy && *mm >= 1 && *mm <= 12)
            return YearMonth{static_cast<int>(*yyyy), static_cast<int>(*mm)};
        return std::nullopt;
    }
    // YYYY-MM
    if (field.size() == 7 && field[4] == '-') {
        auto yyyy = parse_int(field.substr(0, 4));
        auto mm = parse_int(field.substr(5, 2));
        if (mm && yyyy && *mm >= 1 && *mm <= 12)
            return YearMonth{static_cast<int>(*yyyy), static_cast<int>(*mm)};
        return std::nullopt;
    }
    return std::nullopt;
}

long long parse_count(std::string_view field, NumberLocale locale, std::size_t line,
                      std::size_t column) {
    field = trim(field);
    if (field.empty()) throw ParseError("empty numeric field", line, column);

    if (locale == NumberLocale::Brazilian) {
        // Sign, then digit groups joined by '.' thousands separators.
        std::string digits;
        std::string_view body = field;
        if (body.front() == '-' || body.front() == '+') {
            digits.push_back(body.front());
            body.remove_prefix(1);
        }
        // accepted shape: digits, optionally followed by .ddd groups
        std::size_t group_len = 0;
        bool first_group = true;
        for (std::size_t i = 0; i <= body.size(); ++i) {
            if (i == body.size() || body[i] == '.') {
                const bool group_ok = first_group ? group_len >= 1 : group_len == 3;
                if (!group_ok)
                    throw ParseError("malformed thousands grouping in '" + std::string(field) + "'",
                                     line, column);
                first_group = false;
                group_len = 0;
                continue;
            }
            if (!std::isdigit(static_cast<unsigned char>(body[i])))
                throw ParseError("non-digit in numeric field '" + std::string(field) + "'", line,
                                 column);
            digits.push_back(body[i]);
            ++group_len;
        }
        auto value = parse_int(digits);
        if (!value) throw ParseError("integer out of range: '" + std::string(field) + "'", line, column);
        return *value;
    }

    // Plain locale: '.' would be a decimal point, and fractional counts are
    // rejected rather than rounded.
    if (auto value = parse_int(field)) return *value;
    if (parse_double(field))
        throw ParseError("non-integer value '" + std::string(field) + "' in plain locale", line,
                         column);
    throw ParseError("unparseable numeric field '" + std::string(field) + "'", line, column);
}

char detect_delimiter(std::string_view line, std::size_t line_no) {
    for (char candidate : {';', ',', '\t'}) {
        if (split(line, candidate).size() == 4) return candidate;
    }
    throw SchemaError("could not detect a delimiter yielding 4 columns", line_no);
}

}  // namespace

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

Dataset parse_dataset(std::string_view text, const ParseOptions& options) {
    Dataset dataset;
    std::optional<char> delim;
    std::size_t line_no = 0;
    bool first_content_line = true;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view raw = (eol == std::string_view::npos) ? text.substr(pos)
                                                               : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (trim(raw).empty()) continue;

        if (!delim) delim = detect_delimiter(raw, line_no);
        const auto fields = split(raw, *delim);
        if (fields.size() != 4)
            throw SchemaError("expected 4 columns, got " + std::to_string(fields.size()), line_no);

        const auto period = try_parse_period(fields[0]);
        if (!period) {
            if (first_content_line) {  // header row
                first_content_line = false;
                continue;
            }
            throw ParseError("unparseable period '" + std::string(trim(fields[0])) + "'", line_no,
                             1);
        }
        first_content_line = false;

        LaborRecord record;
        record.period = *period;
        record.balance = parse_count(fields[1], options.locale, line_no, 2);
        record.workers = parse_count(fields[2], options.locale, line_no, 3);
        record.employers = parse_count(fields[3], options.locale, line_no, 4);
        if (record.workers < 0) throw ParseError("negative worker stock", line_no, 3);
        if (record.employers < 0) throw ParseError("negative employer count", line_no, 4);

        if (!dataset.records.empty()) {
            const YearMonth prev = dataset.records.back().period;
            if (record.period <= prev)
                throw MonotonicityError("period " + record.period.str() +
                                        " is not after " + prev.str());
            const int step = record.period.months_since(prev);
            if (step > 1) {
                if (!options.allow_gaps)
                    throw DataGapError("missing " + std::to_string(step - 1) +
                                       " month(s) between " + prev.str() + " and " +
                                       record.period.str());
                for (YearMonth m = prev.next(); m < record.period; m = m.next())
                    dataset.gaps.push_back(m);
            }
        }
        dataset.records.push_back(record);
    }

    if (dataset.records.empty()) throw EmptyInput("no data rows");
    return dataset;
}

Dataset load_dataset(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Dataset dataset = parse_dataset(buf.str(), options);
    dataset.source = path;
    return dataset;
}

std::vector<BalanceDiscrepancy> validate_balances(const Dataset& dataset) {
    if (dataset.records.size() < 2)
        throw TooFewRecords("balance validation needs at least 2 records");
    std::vector<BalanceDiscrepancy> out;
    for (std::size_t i = 1; i < dataset.records.size(); ++i) {
        const auto& prev = dataset.records[i - 1];
        const auto& cur = dataset.records[i];
        if (cur.period.months_since(prev.period) != 1) continue;  // skip across gaps
        const long long diff = cur.workers - prev.workers;
        if (diff != cur.balance) out.push_back({cur.period, diff - cur.balance});
    }
    return out;
}

std::string to_csv(const Dataset& dataset) {
    std::string out = "period,balance,workers,employers\n";
    for (const auto& rec : dataset.records) {
        out += rec.period.str();
        out += ',';
        out += format_int(rec.balance);
        out += ',';
        out += format_int(rec.workers);
        out += ',';
        out += format_int(rec.employers);
        out += '\n';
    }
    return out;
}

std::string_view caged_sample_text() {
    // 1996 monthly aggregates; same content as data/caged_1996.csv.
    return "Period;Balance workers;Workers;Active employers\n"
           "01/1996;-12.626;23.743.110;336.946\n"
           "02/1996;-4.094;23.739.016;334.349\n"
           "03/1996;10.003;23.749.019;359.248\n"
           "04/1996;118.918;23.867.937;349.273\n"
           "05/1996;172.930;24.040.867;344.896\n"
           "06/1996;115.028;24.155.895;326.832\n"
           "07/1996;68.920;24.224.815;338.098\n"
           "08/1996;46.937;24.271.752;339.688\n"
           "09/1996;88.964;24.360.716;327.525\n"
           "10/1996;19.466;24.380.182;329.672\n"
           "11/1996;-15.899;24.364.283;308.009\n"
           "12/1996;-258.516;24.105.767;298.644\n";
}

const Dataset& caged_sample() {
    static const Dataset dataset = [] {
        Dataset d = parse_dataset(caged_sample_text());
        d.source = "bundled caged 1996 sample";
        return d;
    }();
    return dataset;
}

}  // namespace workdyn
