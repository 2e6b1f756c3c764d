#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace boostkit {

enum class ResponseKind { Continuous, Binary, Survival };

/// Response column(s). Binary responses are stored as -1/+1; the original
/// label strings are kept so reports and predictions can use them.
struct ResponseVector {
    ResponseKind kind = ResponseKind::Continuous;
    Eigen::VectorXd values;  // y for Continuous/Binary, unused for Survival
    Eigen::VectorXd time;    // Survival only, strictly positive
    Eigen::VectorXi status;  // Survival only, 0/1
    std::string label_negative;  // Binary: source label mapped to -1
    std::string label_positive;  // Binary: source label mapped to +1

    Eigen::Index size() const {
        return kind == ResponseKind::Survival ? time.size() : values.size();
    }
    int event_count() const {
        return kind == ResponseKind::Survival ? static_cast<int>(status.sum()) : 0;
    }
};

/// Per-column affine transform recorded by standardize() so estimates can be
/// reported on the original scale.
struct Scaling {
    std::vector<double> mean;
    std::vector<double> sd;
    bool applied = false;
};

struct Dataset {
    Eigen::MatrixXd predictors;      // n x p
    std::vector<std::string> names;  // p column names
    ResponseVector response;
    std::vector<int> unpenalized;  // 0-based component indices, may be empty

    Eigen::Index n_rows() const { return predictors.rows(); }
    Eigen::Index n_cols() const { return predictors.cols(); }

    int column_index(const std::string& name) const;  // -1 if absent

    /// Dataset restricted to the given row indices (bootstrap rows may repeat).
    Dataset subset(const std::vector<int>& rows) const;
};

enum class MissingPolicy { Reject, ImputeMedian };

struct ResponseSpec {
    ResponseKind kind = ResponseKind::Continuous;
    std::string column;         // Continuous / Binary
    std::string time_column;    // Survival
    std::string status_column;  // Survival
};

struct CsvOptions {
    MissingPolicy missing = MissingPolicy::Reject;
};

/// Reads an RFC-4180 style CSV (header row required, empty field = missing).
/// Predictor columns keep file order minus the response column(s). Binary
/// responses may use any two distinct labels; the lexicographically larger
/// label maps to +1 and the mapping is recorded in the result.
Dataset load_csv(const std::string& path, const ResponseSpec& spec,
                 const CsvOptions& options = {});

/// Parses CSV text that is already in memory; load_csv delegates here.
Dataset parse_csv(const std::string& text, const std::string& origin,
                  const ResponseSpec& spec, const CsvOptions& options = {});

/// Reads a plain numeric CSV (header + all-numeric cells), e.g. prediction
/// inputs where no response column is needed.
std::pair<std::vector<std::string>, Eigen::MatrixXd> load_matrix_csv(const std::string& path);

/// Centers and scales every predictor column to sample mean 0 / sample
/// standard deviation 1 (n-1 denominator). Constant columns are an error.
std::pair<Dataset, Scaling> standardize(const Dataset& d);

/// Inverse of standardize, used by tests and for reporting.
Eigen::MatrixXd destandardize(const Eigen::MatrixXd& x, const Scaling& s);

}  // namespace boostkit
