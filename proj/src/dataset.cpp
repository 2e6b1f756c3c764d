#include "boostkit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "boostkit/common.hpp"

namespace boostkit {

namespace {

// Splits one CSV record. Handles quoted fields with "" escapes. A record may
// span lines only inside quotes, which the caller resolves; here we get one
// logical record.
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& raw, double& out) {
    std::string s = trim(raw);
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n == 0) throw DataError("median of empty column");
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

int Dataset::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == name) return static_cast<int>(j);
    return -1;
}

Dataset Dataset::subset(const std::vector<int>& rows) const {
    Dataset out;
    out.names = names;
    out.unpenalized = unpenalized;
    const auto m = static_cast<Eigen::Index>(rows.size());
    out.predictors.resize(m, predictors.cols());
    for (Eigen::Index i = 0; i < m; ++i) out.predictors.row(i) = predictors.row(rows[i]);
    out.response.kind = response.kind;
    out.response.label_negative = response.label_negative;
    out.response.label_positive = response.label_positive;
    if (response.kind == ResponseKind::Survival) {
        out.response.time.resize(m);
        out.response.status.resize(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            out.response.time[i] = response.time[rows[i]];
            out.response.status[i] = response.status[rows[i]];
        }
    } else {
        out.response.values.resize(m);
        for (Eigen::Index i = 0; i < m; ++i) out.response.values[i] = response.values[rows[i]];
    }
    return out;
}

Dataset parse_csv(const std::string& text, const std::string& origin,
                  const ResponseSpec& spec, const CsvOptions& options) {
    // Assemble logical records (quotes may swallow newlines).
    std::vector<std::string> records;
    {
        std::string cur;
        bool quoted = false;
        for (char c : text) {
            if (c == '"') quoted = !quoted;
            if (c == '\n' && !quoted) {
                if (!cur.empty() && cur.back() == '\r') cur.pop_back();
                records.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty() && cur.back() == '\r') cur.pop_back();
        if (!cur.empty()) records.push_back(cur);
    }
    if (records.empty()) throw DataError(origin + ": empty file (header row required)");

    std::vector<std::string> header = split_record(records[0]);
    for (auto& h : header) h = trim(h);

    auto find_col = [&](const std::string& name) {
        for (std::size_t j = 0; j < header.size(); ++j)
            if (header[j] == name) return static_cast<int>(j);
        throw DataError(origin + ": column '" + name + "' not found in header");
    };

    std::vector<int> response_cols;
    if (spec.kind == ResponseKind::Survival) {
        response_cols.push_back(find_col(spec.time_column));
        response_cols.push_back(find_col(spec.status_column));
    } else {
        response_cols.push_back(find_col(spec.column));
    }

    std::vector<int> pred_cols;
    std::vector<std::string> pred_names;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (std::find(response_cols.begin(), response_cols.end(), static_cast<int>(j)) ==
            response_cols.end()) {
            pred_cols.push_back(static_cast<int>(j));
            pred_names.push_back(header[j]);
        }
    }
    if (pred_names.empty()) throw DataError(origin + ": no predictor columns left");

    const std::size_t n = records.size() - 1;
    if (n == 0) throw DataError(origin + ": no data rows");
    const std::size_t p = pred_cols.size();

    Eigen::MatrixXd x(n, p);
    std::vector<std::vector<int>> missing_cells(p);  // rows with empty field per column
    std::vector<std::string> raw_response(n), raw_time(n), raw_status(n);

    for (std::size_t r = 0; r < n; ++r) {
        std::vector<std::string> fields = split_record(records[r + 1]);
        if (fields.size() != header.size())
            throw DataError(origin + ": row " + std::to_string(r + 1) + " has " +
                            std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(header.size()));
        for (std::size_t jj = 0; jj < p; ++jj) {
            const std::string cell = trim(fields[pred_cols[jj]]);
            if (cell.empty()) {
                if (options.missing == MissingPolicy::Reject)
                    throw DataError(origin + ": missing value at row " + std::to_string(r + 1) +
                                    ", column '" + pred_names[jj] + "'");
                missing_cells[jj].push_back(static_cast<int>(r));
                x(r, jj) = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            double v;
            if (!parse_double(cell, v))
                throw DataError(origin + ": cannot parse '" + cell + "' at row " +
                                std::to_string(r + 1) + ", column '" + pred_names[jj] + "'");
            x(r, jj) = v;
        }
        if (spec.kind == ResponseKind::Survival) {
            raw_time[r] = trim(fields[response_cols[0]]);
            raw_status[r] = trim(fields[response_cols[1]]);
        } else {
            raw_response[r] = trim(fields[response_cols[0]]);
        }
    }

    // Median imputation when requested.
    for (std::size_t jj = 0; jj < p; ++jj) {
        if (missing_cells[jj].empty()) continue;
        std::vector<double> present;
        for (std::size_t r = 0; r < n; ++r)
            if (!std::isnan(x(r, jj))) present.push_back(x(r, jj));
        if (present.empty())
            throw DataError(origin + ": column '" + pred_names[jj] + "' has no observed values");
        const double med = median_of(present);
        for (int r : missing_cells[jj]) x(r, jj) = med;
    }

    Dataset d;
    d.predictors = std::move(x);
    d.names = std::move(pred_names);
    d.response.kind = spec.kind;

    switch (spec.kind) {
        case ResponseKind::Continuous: {
            d.response.values.resize(n);
            for (std::size_t r = 0; r < n; ++r) {
                double v;
                if (!parse_double(raw_response[r], v))
                    throw DataError(origin + ": cannot parse response '" + raw_response[r] +
                                    "' at row " + std::to_string(r + 1));
                d.response.values[r] = v;
            }
            break;
        }
        case ResponseKind::Binary: {
            std::map<std::string, int> labels;
            for (std::size_t r = 0; r < n; ++r) {
                if (raw_response[r].empty())
                    throw DataError(origin + ": missing response at row " + std::to_string(r + 1));
                labels.emplace(raw_response[r], 0);
            }
            if (labels.size() != 2)
                throw DataError(origin + ": binary response needs exactly two distinct labels, found " +
                                std::to_string(labels.size()));
            // Lexicographically larger label becomes +1.
            auto it = labels.begin();
            const std::string neg = it->first;
            const std::string pos = std::next(it)->first;
            d.response.label_negative = neg;
            d.response.label_positive = pos;
            d.response.values.resize(n);
            for (std::size_t r = 0; r < n; ++r)
                d.response.values[r] = raw_response[r] == pos ? 1.0 : -1.0;
            break;
        }
        case ResponseKind::Survival: {
            d.response.time.resize(n);
            d.response.status.resize(n);
            bool any_event = false;
            for (std::size_t r = 0; r < n; ++r) {
                double t, s;
                if (!parse_double(raw_time[r], t))
                    throw DataError(origin + ": cannot parse time '" + raw_time[r] + "' at row " +
                                    std::to_string(r + 1));
                if (!parse_double(raw_status[r], s) || (s != 0.0 && s != 1.0))
                    throw DataError(origin + ": status must be 0 or 1 at row " +
                                    std::to_string(r + 1));
                if (t <= 0.0)
                    throw DataError(origin + ": survival time must be > 0 at row " +
                                    std::to_string(r + 1));
                d.response.time[r] = t;
                d.response.status[r] = static_cast<int>(s);
                any_event = any_event || s == 1.0;
            }
            if (!any_event) throw DataError(origin + ": survival response has no events");
            break;
        }
    }
    return d;
}

std::pair<std::vector<std::string>, Eigen::MatrixXd> load_matrix_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();

    std::vector<std::string> records;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            records.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) records.push_back(cur);
    if (records.size() < 2) throw DataError(path + ": need a header and at least one data row");

    std::vector<std::string> header = split_record(records[0]);
    for (auto& h : header) h = trim(h);
    Eigen::MatrixXd m(records.size() - 1, header.size());
    for (std::size_t r = 1; r < records.size(); ++r) {
        const std::vector<std::string> fields = split_record(records[r]);
        if (fields.size() != header.size())
            throw DataError(path + ": row " + std::to_string(r) + " has " +
                            std::to_string(fields.size()) + " fields");
        for (std::size_t j = 0; j < fields.size(); ++j) {
            // Non-numeric cells become NaN; callers validate the columns
            // they actually use, so unrelated label columns are harmless.
            double v;
            if (!parse_double(fields[j], v)) v = std::numeric_limits<double>::quiet_NaN();
            m(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(j)) = v;
        }
    }
    return {std::move(header), std::move(m)};
}

Dataset load_csv(const std::string& path, const ResponseSpec& spec, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), path, spec, options);
}

std::pair<Dataset, Scaling> standardize(const Dataset& d) {
    const Eigen::Index n = d.n_rows();
    const Eigen::Index p = d.n_cols();
    if (n < 2) throw DataError("standardize requires at least 2 rows");
    Dataset out = d;
    Scaling s;
    s.applied = true;
    s.mean.resize(p);
    s.sd.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double mean = d.predictors.col(j).mean();
        const double ss = (d.predictors.col(j).array() - mean).square().sum();
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (sd <= 0.0)
            throw DataError("constant column '" + d.names[j] + "' cannot be standardized");
        s.mean[j] = mean;
        s.sd[j] = sd;
        out.predictors.col(j) = (d.predictors.col(j).array() - mean) / sd;
    }
    return {std::move(out), std::move(s)};
}

Eigen::MatrixXd destandardize(const Eigen::MatrixXd& x, const Scaling& s) {
    Eigen::MatrixXd out = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        out.col(j) = x.col(j).array() * s.sd[j] + s.mean[j];
    return out;
}

}  // namespace boostkit
