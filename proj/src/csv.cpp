#include "admatch/csv.hpp"

#include "admatch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace admatch {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "nan"; }

double parse_double(const std::string& s, const char* what, std::size_t row) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("row " + std::to_string(row) + ": cannot parse " + what + " '" + s +
                              "'");
    }
}

long parse_count(const std::string& s, const char* what, std::size_t row) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("row " + std::to_string(row) + ": cannot parse " + what + " '" + s +
                              "'");
    }
}

bool parse_flag(const std::string& s, const char* what, std::size_t row) {
    if (s == "0") return false;
    if (s == "1") return true;
    throw ValidationError("row " + std::to_string(row) + ": " + what + " must be 0 or 1, got '" +
                          s + "'");
}

struct OutcomeColumn {
    std::size_t index;
    StratumKey key;
    bool is_marginal; // either label is "all"
};

} // namespace

DailySeries read_daily_csv(const std::string& path, LoadMode mode) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open input file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty input file '" + path + "'");
    const auto header = split_line(line);
    const std::vector<std::string> fixed = {"date",     "exposure",  "temperature",
                                            "humidity", "influenza", "holiday"};
    if (header.size() < fixed.size()) {
        throw ValidationError("header has " + std::to_string(header.size()) +
                              " columns, expected at least 6");
    }
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (trim(header[i]) != fixed[i]) {
            throw ValidationError("header column " + std::to_string(i + 1) + " is '" +
                                  trim(header[i]) + "', expected '" + fixed[i] + "'");
        }
    }

    std::vector<OutcomeColumn> outcome_cols;
    DailySeries series;
    for (std::size_t i = fixed.size(); i < header.size(); ++i) {
        const std::string name = trim(header[i]);
        std::vector<std::string> parts;
        std::string part;
        std::stringstream ss(name);
        while (std::getline(ss, part, ':')) parts.push_back(part);
        if (parts.size() != 3 || parts[0] != "deaths" || parts[1].empty() || parts[2].empty()) {
            throw ValidationError("unrecognized column '" + name +
                                  "' (outcome columns are deaths:<cause>:<age>)");
        }
        OutcomeColumn col;
        col.index = i;
        col.key = StratumKey{parts[1], parts[2]};
        col.is_marginal = (parts[1] == "all" || parts[2] == "all");
        if (!col.is_marginal) {
            if (std::find(series.strata.begin(), series.strata.end(), col.key) !=
                series.strata.end()) {
                throw ValidationError("duplicate outcome column '" + name + "'");
            }
            series.strata.push_back(col.key);
        }
        outcome_cols.push_back(col);
    }
    const bool read_outcomes = (mode == LoadMode::full);
    if (!read_outcomes) series.strata.clear();

    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != header.size()) {
            throw ValidationError("row " + std::to_string(row) + ": has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()));
        }
        DailyRecord rec;
        rec.date = Date::parse_iso(trim(fields[0]));
        const auto covariate = [&](std::size_t idx, const char* what) {
            const std::string v = trim(fields[idx]);
            if (is_missing(v)) return std::numeric_limits<double>::quiet_NaN();
            return parse_double(v, what, row);
        };
        rec.exposure = covariate(1, "exposure");
        rec.temperature = covariate(2, "temperature");
        rec.humidity = covariate(3, "humidity");
        if (!std::isnan(rec.exposure) && rec.exposure < 0.0) {
            throw ValidationError("row " + std::to_string(row) + ": negative exposure");
        }
        if (!std::isnan(rec.humidity) && (rec.humidity < 0.0 || rec.humidity > 100.0)) {
            throw ValidationError("row " + std::to_string(row) + ": humidity outside [0,100]");
        }
        rec.influenza = parse_flag(trim(fields[4]), "influenza", row);
        rec.holiday = parse_flag(trim(fields[5]), "holiday", row);

        if (read_outcomes) {
            std::map<StratumKey, long> marginals;
            for (const auto& col : outcome_cols) {
                const std::string v = trim(fields[col.index]);
                if (is_missing(v)) {
                    throw ValidationError("row " + std::to_string(row) + " (" + rec.date.to_iso() +
                                          "): missing outcome count for '" + col.key.label() +
                                          "' (outcomes cannot be interpolated)");
                }
                const long count = parse_count(v, "outcome count", row);
                if (count < 0) {
                    throw ValidationError("row " + std::to_string(row) + ": negative count for '" +
                                          col.key.label() + "'");
                }
                if (col.is_marginal) {
                    marginals[col.key] = count;
                } else {
                    rec.outcomes[col.key] = count;
                }
            }
            for (const auto& [key, total] : marginals) {
                long sum = 0;
                for (const auto& cell : series.strata) {
                    if (key.cause != "all" && cell.cause != key.cause) continue;
                    if (key.age != "all" && cell.age != key.age) continue;
                    sum += rec.outcomes.at(cell);
                }
                if (sum != total) {
                    throw ValidationError("row " + std::to_string(row) + " (" + rec.date.to_iso() +
                                          "): marginal 'deaths:" + key.label() + "' is " +
                                          std::to_string(total) + " but cells sum to " +
                                          std::to_string(sum));
                }
            }
        }
        series.records.push_back(std::move(rec));
    }
    if (series.records.empty()) throw ValidationError("input file '" + path + "' has no data rows");
    for (const auto& key : series.strata) {
        if (key.cause == "all" || key.age == "all") {
            throw ValidationError("stratum label 'all' is reserved for marginals");
        }
    }
    return series;
}

void write_daily_csv(const std::string& path, const DailySeries& series) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file '" + path + "'");
    out << "date,exposure,temperature,humidity,influenza,holiday";
    for (const auto& key : series.strata) out << ",deaths:" << key.cause << ":" << key.age;
    out << "\n";
    char buf[64];
    const auto num = [&](double v) {
        if (std::isnan(v)) return std::string("NA");
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        return std::string(buf);
    };
    for (const auto& r : series.records) {
        out << r.date.to_iso() << ',' << num(r.exposure) << ',' << num(r.temperature) << ','
            << num(r.humidity) << ',' << (r.influenza ? 1 : 0) << ',' << (r.holiday ? 1 : 0);
        for (const auto& key : series.strata) out << ',' << r.outcomes.at(key);
        out << "\n";
    }
}

} // namespace admatch
