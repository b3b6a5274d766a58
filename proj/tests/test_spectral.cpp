#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gridspec/graph.hpp"
#include "gridspec/rearrangement.hpp"
#include "gridspec/sampling.hpp"
#include "gridspec/spectral.hpp"
#include "gridspec/symbol.hpp"

using gridspec::GraphSpec;
using gridspec::GridPolicy;
using gridspec::Rearrangement;
using gridspec::Spectrum;
using gridspec::TrigSymbol;
using std::numbers::pi;

namespace {

GraphSpec quartic_spec(int n) {
    GraphSpec s;
    s.kind = GraphSpec::Kind::Toeplitz;
    s.n = {n};
    s.terms = {{{1}, {1.0}, {}}, {{2}, {-6.0}, {}}, {{3}, {1.0}, {}}, {{4}, {1.0}, {}}};
    return s;
}

/// Sample the spec's symbol with one point per matrix row on the left-closed
/// grid (the convention used for the one-level comparisons).
Rearrangement left_rearrangement(const GraphSpec& s, int n) {
    return Rearrangement::of(
        gridspec::sample_symbol(gridspec::symbol_of(s), {n}, GridPolicy::Left));
}

/// True minimum of a smooth scalar function on [0, pi]: coarse scan followed
/// by golden-section refinement of the bracketing interval (grid values alone
/// overestimate the minimum by more than the localization margin).
double golden_min(const std::function<double(double)>& f) {
    const int coarse = 20001;
    double best_t = 0.0, best = 1e300;
    for (int j = 0; j < coarse; ++j) {
        const double t = pi * j / (coarse - 1);
        const double v = f(t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    double a = std::max(0.0, best_t - pi / (coarse - 1));
    double b = std::min(pi, best_t + pi / (coarse - 1));
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 200; ++it) {
        if (f(c) < f(d)) {
            b = d;
            d = c;
            c = b - gr * (b - a);
        } else {
            a = c;
            c = d;
            d = a + gr * (b - a);
        }
    }
    return std::min({best, f(a), f(b)});
}

double true_min(const TrigSymbol& sym) {
    return golden_min([&](double t) {
        Eigen::VectorXd theta(1);
        theta << t;
        return sym.eval_scalar(theta);
    });
}

double true_max(const TrigSymbol& sym) {
    return -golden_min([&](double t) {
        Eigen::VectorXd theta(1);
        theta << t;
        return -sym.eval_scalar(theta);
    });
}

}  // namespace

TEST_CASE("path graph eigenvalues match the cosine closed form") {
    SUBCASE("four nodes: golden-ratio values") {
        const Spectrum s = gridspec::sym_eigs(gridspec::build_toeplitz(4, {{1, 1.0}}));
        REQUIRE(s.dim() == 4);
        std::vector<double> expected;
        for (int k = 4; k >= 1; --k) expected.push_back(2.0 * std::cos(k * pi / 5.0));
        for (int i = 0; i < 4; ++i)
            CHECK(s.lambda(i) == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-12));
        CHECK(s.lambda(3) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
    }
    SUBCASE("one hundred nodes") {
        const Spectrum s = gridspec::sym_eigs(gridspec::build_toeplitz(100, {{1, 1.0}}));
        for (int k = 1; k <= 100; ++k) {
            const double expected = 2.0 * std::cos((101 - k) * pi / 101.0);
            CHECK(std::abs(s.lambda(k - 1) - expected) <= 1e-8);
        }
    }
}

TEST_CASE("sym_eigs basics: diagonal, two-node, sparse/dense agreement, guards") {
    Eigen::MatrixXd D = Eigen::Vector3d(3.0, 1.0, 2.0).asDiagonal();
    const Spectrum sd = gridspec::sym_eigs(D);
    CHECK(sd.lambda(0) == doctest::Approx(1.0));
    CHECK(sd.lambda(1) == doctest::Approx(2.0));
    CHECK(sd.lambda(2) == doctest::Approx(3.0));

    const double w = 2.5;
    Eigen::MatrixXd T(2, 2);
    T << 0.0, w, w, 0.0;
    const Spectrum st = gridspec::sym_eigs(T);
    CHECK(st.lambda(0) == doctest::Approx(-w).epsilon(1e-14));
    CHECK(st.lambda(1) == doctest::Approx(w).epsilon(1e-14));

    const auto W = gridspec::build_toeplitz(30, {{1, 1.0}, {3, -2.0}});
    const Spectrum sparse = gridspec::sym_eigs(W);
    const Spectrum densed = gridspec::sym_eigs(Eigen::MatrixXd(W));
    CHECK((sparse.lambda - densed.lambda).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXd bad(2, 2);
    bad << 0.0, 1.0, 2.0, 0.0;
    CHECK_THROWS_AS((void)gridspec::sym_eigs(bad), std::invalid_argument);
    CHECK_THROWS_AS((void)gridspec::sym_eigs(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("eigenpairs: residuals, orthogonality and trace preservation") {
    std::mt19937 rng(987654u);
    std::normal_distribution<double> g(0.0, 1.0);
    const int n = 120;
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) A(i, j) = A(j, i) = g(rng);

    const auto pairs = gridspec::sym_eigs_with_vectors(A);
    const double anorm = A.cwiseAbs().maxCoeff();

    // ten spot-checked eigenpairs spread across the spectrum
    for (int t = 0; t < 10; ++t) {
        const int k = t * (n - 1) / 9;
        const Eigen::VectorXd v = pairs.vectors.col(k);
        const double resid = (A * v - pairs.lambda(k) * v).norm();
        CHECK(resid <= 1e-8 * A.norm());
        CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    }
    CHECK((pairs.vectors.transpose() * pairs.vectors - Eigen::MatrixXd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
    CHECK(std::abs(pairs.lambda.sum() - A.trace()) <= 1e-8 * n * anorm);

    // the eigenvalues-only path agrees with the eigenpairs path
    const Spectrum s = gridspec::sym_eigs(A);
    CHECK((s.lambda - pairs.lambda).cwiseAbs().maxCoeff() <= 1e-12 * anorm);
}

TEST_CASE("quantile_index rounds and clamps") {
    CHECK(gridspec::quantile_index(0.0, 10) == 1);
    CHECK(gridspec::quantile_index(1.0, 10) == 10);
    CHECK(gridspec::quantile_index(0.5, 10) == 5);
    CHECK(gridspec::quantile_index(0.54, 10) == 5);
    CHECK(gridspec::quantile_index(0.56, 10) == 6);
    CHECK(gridspec::quantile_index(1e-9, 1000) == 1);
    CHECK(gridspec::quantile_index(0.1, 2000) == 200);
}

TEST_CASE("weyl_errors vanish when the cloud equals the spectrum") {
    // shifted path graph: strictly positive eigenvalues, no zero denominators
    const auto W = gridspec::build_toeplitz(50, {{1, 1.0}});
    Eigen::MatrixXd A = Eigen::MatrixXd(W) + 3.0 * Eigen::MatrixXd::Identity(50, 50);
    const Spectrum s = gridspec::sym_eigs(A);
    std::vector<double> cloud(s.lambda.data(), s.lambda.data() + s.dim());
    const Rearrangement r{cloud};
    const auto errs = gridspec::weyl_errors(s, r, {0.1, 0.3, 0.5, 0.8, 1.0});
    for (const auto& e : errs) {
        CHECK_FALSE(e.absolute);
        CHECK(e.error <= 1e-14);
        CHECK(e.k == gridspec::quantile_index(e.x, 50));
        CHECK(e.lambda == s.lambda(e.k - 1));
    }
}

TEST_CASE("weyl_errors fall back to absolute error on a vanishing prediction") {
    Spectrum s;
    s.lambda = Eigen::Vector3d(0.0, 0.0, 1.0);
    const Rearrangement r{{0.0, 0.0, 1.0}};
    const auto errs = gridspec::weyl_errors(s, r, {0.3});
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].absolute);
    CHECK(errs[0].gtilde == 0.0);
    CHECK(errs[0].error == 0.0);
}

TEST_CASE("extreme_gap scales the top spectral gap by the dimension") {
    Spectrum s;
    s.lambda = Eigen::Vector4d(0.0, 1.0, 2.0, 2.5);
    CHECK(gridspec::extreme_gap(s) == doctest::Approx(4.0 * 0.5).epsilon(1e-15));
    s.lambda = Eigen::Vector3d(1.0, 2.0, 2.0);
    CHECK(gridspec::extreme_gap(s) == 0.0);
    s.lambda = Eigen::VectorXd::Ones(1);
    CHECK_THROWS_AS((void)gridspec::extreme_gap(s), std::invalid_argument);
}

TEST_CASE("gap_ratio: self-consistency, sample-gap denominator, degenerate flag, smooth maps") {
    SUBCASE("spectrum equal to the sample cloud gives ratio one") {
        const auto W = gridspec::build_toeplitz(80, {{1, 1.0}});
        Eigen::MatrixXd A = Eigen::MatrixXd(W) + 3.0 * Eigen::MatrixXd::Identity(80, 80);
        const Spectrum s = gridspec::sym_eigs(A);
        std::vector<double> cloud(s.lambda.data(), s.lambda.data() + s.dim());
        const Rearrangement r{cloud};
        const auto rep = gridspec::gap_ratio(s, r, gridspec::identity_map(), true);
        CHECK_FALSE(rep.degenerate);
        CHECK(rep.sample_gap);
        CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-12));
        // theoretical denominator compares the top gap with the previous gap: close for smooth symbols
        const auto rep2 = gridspec::gap_ratio(s, r, gridspec::identity_map(), false);
        CHECK_FALSE(rep2.degenerate);
        CHECK(rep2.ratio == doctest::Approx(1.0).epsilon(0.2));
    }
    SUBCASE("constant spectrum degenerates") {
        Spectrum s;
        s.lambda = Eigen::Vector3d::Ones();
        const Rearrangement r{{1.0, 1.0, 1.0}};
        const auto rep = gridspec::gap_ratio(s, r, gridspec::identity_map(), true);
        CHECK(rep.degenerate);
        CHECK(rep.raw_gap == 0.0);
    }
    SUBCASE("a smooth map rescales both gap and prediction") {
        Spectrum s;
        s.lambda = Eigen::Vector4d(1.0, 2.0, 3.0, 4.0);
        const Rearrangement r{{1.0, 2.0, 3.0, 4.0}};
        gridspec::SmoothMap square{[](double t) { return t * t; }, [](double t) { return 2.0 * t; }};
        const auto rep = gridspec::gap_ratio(s, r, square, true);
        CHECK(rep.raw_gap == doctest::Approx(4.0 * (16.0 - 9.0)).epsilon(1e-14));
        CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("eigenvalues localize inside the symbol range (random one-level graphs)") {
    std::mt19937 rng(12345u);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_real_distribution<double> wdist(0.5, 3.0);
    const int n = 256;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::pair<std::int64_t, double>> terms;
        for (std::int64_t t = 1; t <= 4; ++t) {
            if (coin(rng) == 0 && t > 1) continue;  // always keep offset 1
            const double w = (coin(rng) ? 1.0 : -1.0) * wdist(rng);
            terms.emplace_back(t, w);
        }
        GraphSpec spec;
        spec.kind = GraphSpec::Kind::Toeplitz;
        spec.n = {n};
        for (const auto& [t, w] : terms) spec.terms.push_back({{t}, {w}, {}});

        const TrigSymbol f = gridspec::symbol_of(spec);
        const double lo = true_min(f), hi = true_max(f);
        const Spectrum s = gridspec::sym_eigs(gridspec::build_adjacency(spec));
        CHECK(s.lambda.minCoeff() >= lo - 1e-9);
        CHECK(s.lambda.maxCoeff() <= hi + 1e-9);
    }
}

TEST_CASE("extreme eigenvalues approach the symbol range monotonically from inside") {
    const TrigSymbol f = gridspec::symbol_of(quartic_spec(10));
    const double lo = true_min(f), hi = true_max(f);
    double prev_min = 1e300, prev_max = -1e300;
    for (int n : {64, 128, 256, 512}) {
        const Spectrum s = gridspec::sym_eigs(gridspec::build_adjacency(quartic_spec(n)));
        const double mn = s.lambda.minCoeff(), mx = s.lambda.maxCoeff();
        CHECK(mn >= lo - 1e-9);
        CHECK(mx <= hi + 1e-9);
        CHECK(mn <= prev_min + 1e-12);
        CHECK(mx >= prev_max - 1e-12);
        prev_min = mn;
        prev_max = mx;
    }
}

TEST_CASE("four-offset graph: quantile errors shrink and the scaled gap decays") {
    std::vector<double> err01, err1, gaps;
    double err05_at_1000 = -1.0;
    for (int n : {100, 500, 1000, 2000}) {
        const GraphSpec spec = quartic_spec(n);
        const Spectrum s = gridspec::sym_eigs(gridspec::build_adjacency(spec));
        const Rearrangement r = left_rearrangement(spec, n);
        const auto errs = gridspec::weyl_errors(s, r, {0.1, 0.5, 1.0});
        err01.push_back(errs[0].error);
        err1.push_back(errs[2].error);
        if (n == 1000) err05_at_1000 = errs[1].error;
        gaps.push_back(gridspec::extreme_gap(s));
    }
    // interior and edge quantiles converge monotonically on this symbol
    for (std::size_t i = 1; i < err01.size(); ++i) {
        CHECK(err01[i] < err01[i - 1]);
        CHECK(err1[i] < err1[i - 1]);
    }
    CHECK(err01.back() <= 2.2e-4);
    CHECK(err1.back() <= 6.0e-6);
    CHECK(err05_at_1000 <= 0.02);
    // the scaled extreme gap decays toward zero with n
    for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] < gaps[i - 1]);
    CHECK(gaps.back() == doctest::Approx(3.8730e-4).epsilon(0.05));
}

TEST_CASE("empirical spectral distribution approaches the sampled sublevel measure") {
    std::vector<double> sups;
    for (int n : {128, 256, 512}) {
        const GraphSpec spec = quartic_spec(n);
        const Spectrum s = gridspec::sym_eigs(gridspec::build_adjacency(spec));
        const Rearrangement r = left_rearrangement(spec, n);
        double sup = 0.0;
        for (int j = 0; j < 1000; ++j) {
            const double t = -15.0 + j * 20.0 / 999.0;
            double ecdf = 0.0;
            for (Eigen::Index i = 0; i < s.lambda.size(); ++i)
                if (s.lambda(i) <= t) ecdf += 1.0;
            ecdf /= static_cast<double>(s.dim());
            sup = std::max(sup, std::abs(ecdf - r.phi(t)));
        }
        CHECK(sup <= 3.0 / n);
        sups.push_back(sup);
    }
    CHECK(sups[1] < sups[0]);
    CHECK(sups[2] < sups[1]);
}

TEST_CASE("branch ranges approximate the image set of one-level symbols") {
    SUBCASE("scalar cosine symbol: one interval [-2, 2]") {
        GraphSpec s;
        s.kind = GraphSpec::Kind::Toeplitz;
        s.n = {5};
        s.terms = {{{1}, {1.0}, {}}};
        const auto iv = gridspec::branch_ranges(gridspec::symbol_of(s));
        REQUIRE(iv.size() == 1);
        CHECK(iv[0].lo == doctest::Approx(-2.0).epsilon(1e-9));
        CHECK(iv[0].hi == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("two separated branches stay separate") {
        GraphSpec s;
        s.kind = GraphSpec::Kind::Diamond;
        s.n = {6};
        s.nu = 2;
        s.mold = Eigen::MatrixXd::Zero(2, 2);
        s.mold(0, 1) = s.mold(1, 0) = 3.0;
        Eigen::MatrixXd L(2, 2);
        L << 1.0, 0.0, 0.0, 0.0;
        s.terms = {{{1}, {}, {L}}};
        // f(theta) = [[2 cos t, 3], [3, 0]] with branches cos t -+ sqrt(cos^2 t + 9)
        const auto iv = gridspec::branch_ranges(gridspec::symbol_of(s));
        REQUIRE(iv.size() == 2);
        const double r10 = std::sqrt(10.0);
        CHECK(iv[0].lo == doctest::Approx(-1.0 - r10).epsilon(1e-8));
        CHECK(iv[0].hi == doctest::Approx(1.0 - r10).epsilon(1e-8));
        CHECK(iv[1].lo == doctest::Approx(r10 - 1.0).epsilon(1e-8));
        CHECK(iv[1].hi == doctest::Approx(r10 + 1.0).epsilon(1e-8));
    }
    SUBCASE("touching branches merge") {
        GraphSpec s;
        s.kind = GraphSpec::Kind::Diamond;
        s.n = {6};
        s.nu = 2;
        s.mold = Eigen::MatrixXd::Zero(2, 2);
        s.mold(0, 1) = s.mold(1, 0) = 1.0;
        Eigen::MatrixXd L(2, 2);
        L << 0.0, 0.5, 0.5, 0.0;
        s.terms = {{{1}, {}, {L}}};
        // f(theta) = [[0, 1 + cos t], [1 + cos t, 0]]: branches [-2,0] and [0,2] touch at 0
        const auto iv = gridspec::branch_ranges(gridspec::symbol_of(s), 10001, 1e-6);
        REQUIRE(iv.size() == 1);
        CHECK(iv[0].lo == doctest::Approx(-2.0).epsilon(1e-8));
        CHECK(iv[0].hi == doctest::Approx(2.0).epsilon(1e-8));
    }
    SUBCASE("only one-dimensional symbols are supported") {
        TrigSymbol f(2, 1);
        Eigen::MatrixXcd C(1, 1);
        C << 1.0;
        f.add_pair({1, 0}, C);
        CHECK_THROWS_AS((void)gridspec::branch_ranges(f), std::invalid_argument);
    }
}

TEST_CASE("outlier_count flags eigenvalues outside every inflated interval") {
    const GraphSpec spec = quartic_spec(60);
    const Spectrum s = gridspec::sym_eigs(gridspec::build_adjacency(spec));
    const auto iv = gridspec::branch_ranges(gridspec::symbol_of(spec));
    CHECK(gridspec::outlier_count(s, iv, 1e-6) == 0);

    Spectrum t;
    t.lambda = Eigen::Vector4d(-3.0, 0.0, 1.0, 5.0);
    const std::vector<gridspec::Interval> unit{{-1.0, 2.0}};
    CHECK(gridspec::outlier_count(t, unit, 0.0) == 2);
    CHECK(gridspec::outlier_count(t, unit, 10.0) == 0);
}
