#include <doctest.h>

#include <cmath>

#include "boostkit/common.hpp"
#include "boostkit/losses.hpp"
#include "boostkit/rng.hpp"

using namespace boostkit;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

// Draws a response value compatible with the family.
double random_y(Family f, Rng& rng) {
    switch (f) {
        case Family::Exponential:
        case Family::Logistic: return rng.uniform01() < 0.5 ? -1.0 : 1.0;
        case Family::Gamma: return 0.1 + 5.0 * rng.uniform01();
        default: return rng.uniform(-5.0, 5.0);
    }
}

}  // namespace

TEST_SUITE("losses") {

TEST_CASE("scalar loss values") {
    CHECK(LossFamily(Family::L2).loss(3, 1) == doctest::Approx(2.0));
    CHECK(LossFamily(Family::Exponential).loss(1, 0) == doctest::Approx(1.0));
    CHECK(LossFamily(Family::Laplace).loss(1, 4) == doctest::Approx(3.0));
    CHECK(LossFamily(Family::Logistic).loss(1, 0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("huber piecewise value via independent scalar oracle") {
    auto huber_oracle = [](double y, double f, double delta) {
        const double r = std::abs(y - f);
        if (r <= delta) return 0.5 * r * r;
        return delta * r - 0.5 * delta * delta;
    };
    LossFamily fam(Family::Huber, 1.0);
    CHECK(fam.loss(3, 0) == doctest::Approx(huber_oracle(3, 0, 1.0)));
    CHECK(fam.loss(3, 0) == doctest::Approx(2.5));
    CHECK(fam.loss(0.3, 0) == doctest::Approx(huber_oracle(0.3, 0, 1.0)));
    // continuously differentiable at the junction |y-f| = delta (f = 0 here)
    const double eps = 1e-7;
    const double inner = (fam.loss(1.0, eps) - fam.loss(1.0, 0.0)) / eps;
    const double outer = (fam.loss(1.0, 0.0) - fam.loss(1.0, -eps)) / eps;
    CHECK(inner == doctest::Approx(-1.0).epsilon(1e-5));
    CHECK(outer == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("negative gradient examples") {
    CHECK(LossFamily(Family::L2).negative_gradient(vec({3}), vec({1}))[0] == doctest::Approx(2.0));
    CHECK(LossFamily(Family::Laplace).negative_gradient(vec({1}), vec({4}))[0] ==
          doctest::Approx(-1.0));
    CHECK(LossFamily(Family::Exponential).negative_gradient(vec({1}), vec({0}))[0] ==
          doctest::Approx(1.0));
    CHECK(LossFamily(Family::Logistic).negative_gradient(vec({1}), vec({0}))[0] ==
          doctest::Approx(0.5));
}

TEST_CASE("gradient matches central finite differences") {
    Rng rng(991);
    const double step = 1e-6;
    for (Family f : {Family::L2, Family::Laplace, Family::Huber, Family::Exponential,
                     Family::Logistic, Family::Gamma}) {
        LossFamily fam = f == Family::Huber ? LossFamily(f, 1.3) : LossFamily(f);
        int checked = 0;
        for (int t = 0; t < 1000; ++t) {
            const double y = random_y(f, rng);
            const double fv = rng.uniform(-3.0, 3.0);
            const double r = std::abs(y - fv);
            // skip the non-differentiable kink points
            if (f == Family::Laplace && r < 1e-4) continue;
            if (f == Family::Huber && std::abs(r - 1.3) < 1e-4) continue;
            if (f == Family::Huber && r < 1e-4) continue;
            const double fd = -(fam.loss(y, fv + step) - fam.loss(y, fv - step)) / (2 * step);
            const double g = fam.negative_gradient(vec({y}), vec({fv}))[0];
            const double scale = std::max(1.0, std::abs(fd));
            CHECK(std::abs(g - fd) / scale < 1e-6);
            ++checked;
        }
        CHECK(checked > 900);
    }
}

TEST_CASE("convexity probe") {
    Rng rng(1297);
    for (Family f : {Family::L2, Family::Laplace, Family::Huber, Family::Exponential,
                     Family::Logistic, Family::Gamma}) {
        LossFamily fam = f == Family::Huber ? LossFamily(f, 0.8) : LossFamily(f);
        for (int t = 0; t < 400; ++t) {
            const double y = random_y(f, rng);
            const double f1 = rng.uniform(-3.0, 3.0);
            const double f2 = rng.uniform(-3.0, 3.0);
            const double w = rng.uniform01();
            const double mix = fam.loss(y, w * f1 + (1 - w) * f2);
            CHECK(mix <= w * fam.loss(y, f1) + (1 - w) * fam.loss(y, f2) + 1e-12);
        }
    }
}

TEST_CASE("offset examples") {
    CHECK(LossFamily(Family::L2).offset(vec({1, 2, 3})) == doctest::Approx(2.0));
    CHECK(LossFamily(Family::Laplace).offset(vec({1, 2, 100})) == doctest::Approx(2.0));
    CHECK(LossFamily(Family::Logistic).offset(vec({1, 1, -1, -1})) == doctest::Approx(0.0));
    CHECK(LossFamily(Family::Exponential).offset(vec({1, 1, -1, -1})) == doctest::Approx(0.0));
    CHECK(LossFamily(Family::Gamma).offset(vec({1, 2, 3})) == doctest::Approx(std::log(2.0)));
    // exponential: half log-odds
    CHECK(LossFamily(Family::Exponential).offset(vec({1, 1, 1, -1})) ==
          doctest::Approx(0.5 * std::log(3.0)));
    // logistic: full log-odds
    CHECK(LossFamily(Family::Logistic).offset(vec({1, 1, 1, -1})) ==
          doctest::Approx(std::log(3.0)));
}

TEST_CASE("offset is a local optimum of the empirical risk") {
    // Huber is excluded: its offset is the median (the mboost convention),
    // which is not the exact minimizer of the Huber risk.
    Rng rng(55);
    for (Family f : {Family::L2, Family::Laplace, Family::Exponential,
                     Family::Logistic, Family::Gamma}) {
        LossFamily fam(f);
        for (int t = 0; t < 50; ++t) {
            Eigen::VectorXd y(11);
            for (int i = 0; i < 11; ++i) y[i] = random_y(f, rng);
            if ((f == Family::Exponential || f == Family::Logistic) &&
                std::abs(y.sum()) == 11.0)
                continue;  // single class
            const double c = fam.offset(y);
            const Eigen::VectorXd at = Eigen::VectorXd::Constant(11, c);
            const Eigen::VectorXd up = Eigen::VectorXd::Constant(11, c + 1e-3);
            const Eigen::VectorXd dn = Eigen::VectorXd::Constant(11, c - 1e-3);
            const double risk = fam.empirical_risk(y, at);
            CHECK(risk <= fam.empirical_risk(y, up) + 1e-12);
            CHECK(risk <= fam.empirical_risk(y, dn) + 1e-12);
        }
    }
}

TEST_CASE("one-class binary offset errors") {
    CHECK_THROWS_AS(LossFamily(Family::Logistic).offset(vec({1, 1, 1})), DataError);
    CHECK_THROWS_AS(LossFamily(Family::Exponential).offset(vec({-1, -1})), DataError);
}

TEST_CASE("empirical risk examples") {
    LossFamily l2(Family::L2);
    CHECK(l2.empirical_risk(vec({1, 2}), vec({1, 2})) == doctest::Approx(0.0));
    CHECK(l2.empirical_risk(vec({0, 2}), vec({1, 1})) == doctest::Approx(0.5));
    CHECK(LossFamily(Family::Exponential).empirical_risk(vec({1, -1}), vec({0, 0})) ==
          doctest::Approx(1.0));
    const Eigen::VectorXd w = vec({0, 0});
    CHECK_THROWS_AS(l2.empirical_risk(vec({1, 2}), vec({1, 2}), &w), DataError);
}

TEST_CASE("weighted offset uses weights") {
    const Eigen::VectorXd y = vec({0, 10});
    const Eigen::VectorXd w = vec({3, 1});
    CHECK(LossFamily(Family::L2).offset(y, &w) == doctest::Approx(2.5));
}

TEST_CASE("family/response compatibility") {
    ResponseVector r;
    r.kind = ResponseKind::Continuous;
    r.values = vec({0.5, 2.0});
    CHECK_NOTHROW(LossFamily(Family::L2).check_response(r));
    CHECK_THROWS_AS(LossFamily(Family::Logistic).check_response(r), DataError);
    r.values = vec({-0.5, 2.0});
    CHECK_THROWS_AS(LossFamily(Family::Gamma).check_response(r), DataError);
}

TEST_CASE("family ids round-trip") {
    for (Family f : {Family::L2, Family::Laplace, Family::Huber, Family::Exponential,
                     Family::Logistic, Family::Gamma})
        CHECK(family_from_id(family_id(f)) == f);
    CHECK_THROWS_AS(family_from_id("nope"), ArgError);
}

}  // TEST_SUITE
