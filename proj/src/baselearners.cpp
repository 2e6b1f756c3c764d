#include "boostkit/baselearners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "boostkit/common.hpp"
#include "boostkit/parallel.hpp"

namespace boostkit {

// ---------------------------------------------------------------- linear --

LinearFit fit_linear(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                     const Eigen::VectorXd* w, bool include_intercept) {
    if (x.size() != u.size()) throw DataError("fit_linear: length mismatch");
    const Eigen::Index n = x.size();
    double sw = 0, swx = 0, swxx = 0, swu = 0, swxu = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double wi = w ? (*w)[i] : 1.0;
        sw += wi;
        swx += wi * x[i];
        swxx += wi * x[i] * x[i];
        swu += wi * u[i];
        swxu += wi * x[i] * u[i];
    }
    if (sw <= 0.0) throw NumericError("fit_linear: weights sum to zero");
    LinearFit out;
    if (!include_intercept) {
        if (swxx <= 0.0) throw NumericError("fit_linear: zero weighted second moment");
        out.slope = swxu / swxx;
        return out;
    }
    const double sxx = swxx - swx * swx / sw;  // weighted centered variance * sw
    if (sxx <= 0.0) throw NumericError("fit_linear: zero weighted variance");
    const double sxu = swxu - swx * swu / sw;
    out.slope = sxu / sxx;
    out.intercept = (swu - out.slope * swx) / sw;
    return out;
}

Eigen::MatrixXd linear_hat(const Eigen::VectorXd& x, const Eigen::VectorXd* w,
                           bool include_intercept) {
    const Eigen::Index n = x.size();
    const int k = include_intercept ? 2 : 1;
    Eigen::MatrixXd design(n, k);
    if (include_intercept) {
        design.col(0).setOnes();
        design.col(1) = x;
    } else {
        design.col(0) = x;
    }
    Eigen::VectorXd weights = w ? *w : Eigen::VectorXd::Ones(n);
    Eigen::MatrixXd xtw = design.transpose() * weights.asDiagonal();
    Eigen::MatrixXd gram = xtw * design;
    Eigen::LDLT<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw NumericError("linear_hat: singular design");
    return design * solver.solve(xtw);
}

// --------------------------------------------------------------- pspline --

namespace {

// Nonzero B-spline values at x by the de Boor triangle. The span index k
// satisfies knots[k] <= x < knots[k+1] (right boundary maps to the last
// interval). Writes degree+1 values for basis indices k-degree .. k.
void deboor_values(const Eigen::VectorXd& knots, int degree, double x, int span,
                   double* values) {
    std::vector<double> left(static_cast<std::size_t>(degree) + 1);
    std::vector<double> right(static_cast<std::size_t>(degree) + 1);
    values[0] = 1.0;
    for (int j = 1; j <= degree; ++j) {
        left[static_cast<std::size_t>(j)] = x - knots[span + 1 - j];
        right[static_cast<std::size_t>(j)] = knots[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double denom = right[static_cast<std::size_t>(r + 1)] +
                                 left[static_cast<std::size_t>(j - r)];
            const double temp = values[r] / denom;
            values[r] = saved + right[static_cast<std::size_t>(r + 1)] * temp;
            saved = left[static_cast<std::size_t>(j - r)] * temp;
        }
        values[j] = saved;
    }
}

int find_span(const Eigen::VectorXd& knots, int degree, double x) {
    const int nk = static_cast<int>(knots.size());
    const int lo = degree;
    const int hi = nk - degree - 2;  // last valid interval start
    if (x >= knots[hi + 1]) return hi;
    if (x <= knots[lo]) return lo;
    int span = static_cast<int>(std::upper_bound(knots.data() + lo, knots.data() + hi + 1, x) -
                                knots.data()) - 1;
    return std::clamp(span, lo, hi);
}

// Values and first derivatives of all q basis functions at a point inside
// the knot range.
void basis_point(const Eigen::VectorXd& knots, int degree, int q, double x,
                 Eigen::VectorXd& row, Eigen::VectorXd* deriv) {
    row.setZero(q);
    const int span = find_span(knots, degree, x);
    std::vector<double> vals(static_cast<std::size_t>(degree) + 1);
    deboor_values(knots, degree, x, span, vals.data());
    for (int r = 0; r <= degree; ++r) {
        const int idx = span - degree + r;
        if (idx >= 0 && idx < q) row[idx] = vals[static_cast<std::size_t>(r)];
    }
    if (!deriv) return;
    deriv->setZero(q);
    if (degree == 0) return;
    // Degree-1 lower-order values feed the standard derivative formula.
    std::vector<double> lower(static_cast<std::size_t>(degree));
    deboor_values(knots, degree - 1, x, span, lower.data());
    auto lower_val = [&](int idx) -> double {
        const int r = idx - (span - degree + 1);
        return (r >= 0 && r < degree) ? lower[static_cast<std::size_t>(r)] : 0.0;
    };
    for (int idx = span - degree; idx <= span; ++idx) {
        if (idx < 0 || idx >= q) continue;
        double a = 0.0, b = 0.0;
        const double da = knots[idx + degree] - knots[idx];
        const double db = knots[idx + degree + 1] - knots[idx + 1];
        if (da > 0.0) a = lower_val(idx) / da;
        if (db > 0.0) b = lower_val(idx + 1) / db;
        (*deriv)[idx] = degree * (a - b);
    }
}

}  // namespace

PSpline::PSpline(const Eigen::VectorXd& x, int degree, int inner_knots, int diff_order)
    : degree_(degree), inner_knots_(inner_knots), diff_order_(diff_order) {
    if (x.size() < 2) throw DataError("pspline: need at least 2 observations");
    const double lo = x.minCoeff();
    const double hi = x.maxCoeff();
    if (!(hi > lo)) throw DataError("pspline: column has fewer than 2 distinct values");
    // Equidistant knots over [lo, hi] with `degree` extra knots beyond each
    // boundary; q = inner + degree + 1 basis functions.
    const int nk = inner_knots_ + 2 + 2 * degree_;
    const double h = (hi - lo) / static_cast<double>(inner_knots_ + 1);
    knots_.resize(nk);
    for (int i = 0; i < nk; ++i) knots_[i] = lo + (i - degree_) * h;
    q_ = nk - degree_ - 1;
    build_penalty();
    attach_data(x);
}

PSpline::PSpline(Eigen::VectorXd knots, int degree, int diff_order, double lambda)
    : degree_(degree), diff_order_(diff_order), lambda_(lambda), knots_(std::move(knots)) {
    q_ = static_cast<int>(knots_.size()) - degree_ - 1;
    inner_knots_ = static_cast<int>(knots_.size()) - 2 - 2 * degree_;
    if (q_ < diff_order_ + 1) throw DataError("pspline: too few basis functions");
    build_penalty();
}

void PSpline::build_penalty() {
    Eigen::MatrixXd diff = Eigen::MatrixXd::Identity(q_, q_);
    for (int d = 0; d < diff_order_; ++d) {
        const Eigen::Index rows = diff.rows() - 1;
        Eigen::MatrixXd next(rows, q_);
        for (Eigen::Index r = 0; r < rows; ++r) next.row(r) = diff.row(r + 1) - diff.row(r);
        diff = std::move(next);
    }
    penalty_ = diff.transpose() * diff;
}

void PSpline::attach_data(const Eigen::VectorXd& x) {
    basis_ = basis_matrix(x);
    btb_ = basis_.transpose() * basis_;
}

Eigen::VectorXd PSpline::basis_row(double x) const {
    Eigen::VectorXd row(q_), deriv(q_);
    const double lo = xmin();
    const double hi = xmax();
    if (x < lo) {
        basis_point(knots_, degree_, q_, lo, row, &deriv);
        return row + (x - lo) * deriv;
    }
    if (x > hi) {
        basis_point(knots_, degree_, q_, hi, row, &deriv);
        return row + (x - hi) * deriv;
    }
    basis_point(knots_, degree_, q_, x, row, nullptr);
    return row;
}

Eigen::MatrixXd PSpline::basis_matrix(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd b(x.size(), q_);
    for (Eigen::Index i = 0; i < x.size(); ++i) b.row(i) = basis_row(x[i]);
    return b;
}

double PSpline::df_for_lambda(double lambda) const {
    if (btb_.size() == 0) throw NumericError("pspline: no training data attached");
    Eigen::MatrixXd a = btb_ + lambda * penalty_;
    Eigen::LDLT<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw NumericError("pspline: df system not solvable");
    return solver.solve(btb_).trace();
}

int PSpline::basis_rank() const {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis_);
    return static_cast<int>(qr.rank());
}

double PSpline::calibrate_lambda(double target_df, double tol) {
    const int nullspace = diff_order_;
    const int rank = basis_rank();
    if (!(target_df > nullspace && target_df < rank))
        throw ArgError("target df " + format_number(target_df) + " outside feasible range (" +
                       std::to_string(nullspace) + ", " + std::to_string(rank) + ")");
    double lo = -20.0, hi = 40.0;  // log(lambda) bracket
    double best = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        best = std::exp(mid);
        const double df = df_for_lambda(best);
        if (std::abs(df - target_df) <= tol) break;
        // df decreases in lambda
        if (df > target_df) lo = mid; else hi = mid;
    }
    lambda_ = best;
    return best;
}

Eigen::VectorXd PSpline::fit(const Eigen::VectorXd& u, const Eigen::VectorXd* w) const {
    if (basis_.rows() != u.size()) throw DataError("pspline fit: length mismatch");
    if (!w && uniform_solver_) {
        Eigen::VectorXd g = uniform_solver_->solve(basis_.transpose() * u);
        if (!g.allFinite()) throw NumericError("pspline fit: solve failed");
        return g;
    }
    Eigen::MatrixXd btw = w ? Eigen::MatrixXd(basis_.transpose() * w->asDiagonal())
                            : Eigen::MatrixXd(basis_.transpose());
    Eigen::MatrixXd a = btw * basis_ + lambda_ * penalty_;
    Eigen::LDLT<Eigen::MatrixXd> solver(a);
    Eigen::VectorXd g = solver.solve(btw * u);
    if (solver.info() != Eigen::Success || !g.allFinite()) {
        ridge_used_ = true;
        a += 1e-10 * Eigen::MatrixXd::Identity(q_, q_);
        Eigen::LDLT<Eigen::MatrixXd> retry(a);
        g = retry.solve(btw * u);
        if (retry.info() != Eigen::Success || !g.allFinite())
            throw NumericError("pspline fit: singular penalized system");
    }
    return g;
}

Eigen::MatrixXd PSpline::hat(const Eigen::VectorXd* w) const {
    Eigen::MatrixXd btw = w ? Eigen::MatrixXd(basis_.transpose() * w->asDiagonal())
                            : Eigen::MatrixXd(basis_.transpose());
    Eigen::MatrixXd a = btw * basis_ + lambda_ * penalty_;
    Eigen::LDLT<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw NumericError("pspline hat: singular system");
    return basis_ * solver.solve(btw);
}

void PSpline::freeze_uniform() {
    Eigen::MatrixXd a = btb_ + lambda_ * penalty_;
    uniform_solver_.emplace(a);
    if (uniform_solver_->info() != Eigen::Success) {
        uniform_solver_.reset();
        throw NumericError("pspline: cannot factor penalized system");
    }
}

// ----------------------------------------------------------------- stump --

namespace {

struct StumpCandidate {
    double error = std::numeric_limits<double>::infinity();
    double threshold = 0.0;
    int polarity = 1;
    bool valid = false;
};

// Best stump on a single column. Sweeps thresholds from the constant cut
// below the minimum through all midpoints; the +1-polarity error updates
// incrementally as observations cross the threshold.
StumpCandidate best_stump_for_column(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& w, double total_weight) {
    const Eigen::Index n = x.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return x[a] < x[b]; });

    // Constant cut: everything predicted +1 under polarity +1.
    double err_pos = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (y[i] < 0) err_pos += w[i];

    StumpCandidate best;
    auto consider = [&](double err, double threshold, int polarity) {
        const double norm = err / total_weight;
        if (!best.valid || norm < best.error ||
            (norm == best.error && (threshold < best.threshold ||
                                    (threshold == best.threshold && polarity > best.polarity)))) {
            best.valid = true;
            best.error = norm;
            best.threshold = threshold;
            best.polarity = polarity;
        }
    };

    const double t0 = x[order.front()] - 1.0;
    consider(err_pos, t0, +1);
    consider(total_weight - err_pos, t0, -1);

    std::size_t i = 0;
    while (i < order.size()) {
        const double v = x[order[i]];
        // All observations tied at v flip from +1 to -1 together.
        while (i < order.size() && x[order[i]] == v) {
            const Eigen::Index idx = order[i];
            err_pos += y[idx] > 0 ? w[idx] : -w[idx];
            ++i;
        }
        if (i == order.size()) break;  // no midpoint beyond the largest value
        const double t = 0.5 * (v + x[order[i]]);
        consider(err_pos, t, +1);
        consider(total_weight - err_pos, t, -1);
    }
    return best;
}

}  // namespace

StumpFit fit_stump(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                   int n_threads) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    if (y.size() != n || w.size() != n) throw DataError("fit_stump: length mismatch");
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (w[i] < 0.0) throw DataError("fit_stump: negative weight");
        total += w[i];
    }
    if (total <= 0.0) throw DataError("fit_stump: weights sum to zero");

    std::vector<StumpCandidate> per_component(static_cast<std::size_t>(p));
    parallel_for(static_cast<int>(p), n_threads, [&](int j) {
        per_component[static_cast<std::size_t>(j)] =
            best_stump_for_column(x.col(j), y, w, total);
    });

    StumpFit out;
    bool found = false;
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto& c = per_component[static_cast<std::size_t>(j)];
        if (!c.valid) continue;
        if (!found || c.error < out.weighted_error) {
            found = true;
            out.weighted_error = c.error;
            out.stump = Stump{static_cast<int>(j), c.threshold, c.polarity};
        }
    }
    if (!found) throw NumericError("fit_stump: no fittable component");
    return out;
}

}  // namespace boostkit
