#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gridspec/graph.hpp"
#include "gridspec/sampling.hpp"
#include "gridspec/symbol.hpp"

using gridspec::GraphSpec;
using gridspec::GridPolicy;
using gridspec::TrigSymbol;
using std::numbers::pi;

namespace {

TrigSymbol cosine_symbol() {
    GraphSpec s;
    s.kind = GraphSpec::Kind::Toeplitz;
    s.n = {5};
    s.terms = {{{1}, {1.0}, {}}};
    return gridspec::symbol_of(s);
}

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("axis_grid realizes the four placements exactly") {
    const int m = 5;
    const Eigen::VectorXd inc = gridspec::axis_grid(m, GridPolicy::Inclusive);
    const Eigen::VectorXd itr = gridspec::axis_grid(m, GridPolicy::Interior);
    const Eigen::VectorXd lft = gridspec::axis_grid(m, GridPolicy::Left);
    const Eigen::VectorXd mid = gridspec::axis_grid(m, GridPolicy::Midpoint);
    for (int j = 0; j < m; ++j) {
        CHECK(inc(j) == doctest::Approx(pi * j / (m - 1)).epsilon(1e-15));
        CHECK(itr(j) == doctest::Approx(pi * (j + 1) / (m + 1)).epsilon(1e-15));
        CHECK(lft(j) == doctest::Approx(pi * j / m).epsilon(1e-15));
        CHECK(mid(j) == doctest::Approx(pi * (j + 0.5) / m).epsilon(1e-15));
    }
    CHECK(inc(0) == 0.0);
    CHECK(inc(m - 1) == pi);
    CHECK(itr(0) > 0.0);
    CHECK(itr(m - 1) < pi);
    CHECK(lft(m - 1) < pi);

    const Eigen::VectorXd full = gridspec::axis_grid(3, GridPolicy::Inclusive, -pi, pi);
    CHECK(full(0) == -pi);
    CHECK(full(1) == 0.0);
    CHECK(full(2) == pi);

    CHECK_THROWS_AS((void)gridspec::axis_grid(1, GridPolicy::Inclusive), std::invalid_argument);
}

TEST_CASE("grid policy names round-trip") {
    for (GridPolicy p : {GridPolicy::Inclusive, GridPolicy::Interior, GridPolicy::Left,
                         GridPolicy::Midpoint})
        CHECK(gridspec::grid_policy_from_string(gridspec::to_string(p)) == p);
    CHECK_THROWS_AS((void)gridspec::grid_policy_from_string("diagonal"), std::invalid_argument);
}

TEST_CASE("five inclusive samples of 2 cos(theta)") {
    const auto cloud = gridspec::sample_symbol(cosine_symbol(), {5}, GridPolicy::Inclusive);
    REQUIRE(cloud.values.size() == 5);
    CHECK(cloud.axis_counts == std::vector<int>{5});
    CHECK(cloud.spatial_points == 1);
    CHECK(cloud.nu == 1);
    const double r2 = std::sqrt(2.0);
    const std::vector<double> expected{2.0, r2, 0.0, -r2, -2.0};
    for (std::size_t j = 0; j < 5; ++j)
        CHECK(cloud.values[j] == doctest::Approx(expected[j]).epsilon(1e-14));
}

TEST_CASE("a constant symbol samples to a constant cloud of the right shape") {
    TrigSymbol c(2, 1);
    Eigen::MatrixXcd C(1, 1);
    C << 3.25;
    c.add_pair({0, 0}, C);
    const auto cloud = gridspec::sample_symbol(c, {4, 7}, GridPolicy::Interior);
    REQUIRE(cloud.values.size() == 28);
    for (double v : cloud.values) CHECK(v == doctest::Approx(3.25).epsilon(1e-15));
}

TEST_CASE("product grid order: first axis most significant, last axis fastest") {
    GraphSpec s;
    s.kind = GraphSpec::Kind::DLevel;
    s.n = {5, 5};
    s.terms = {{{0, 1}, {2.0}, {}}, {{1, 0}, {1.0}, {}}};
    const TrigSymbol f = gridspec::symbol_of(s);  // 2 cos(t1) + 4 cos(t2)

    const std::vector<int> counts{2, 3};
    const auto cloud = gridspec::sample_symbol(f, counts, GridPolicy::Left);
    REQUIRE(cloud.values.size() == 6);
    const Eigen::VectorXd a0 = gridspec::axis_grid(2, GridPolicy::Left);
    const Eigen::VectorXd a1 = gridspec::axis_grid(3, GridPolicy::Left);
    std::size_t k = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j, ++k) {
            const double expected = 2.0 * std::cos(a0(i)) + 4.0 * std::cos(a1(j));
            CHECK(cloud.values[k] == doctest::Approx(expected).epsilon(1e-13));
        }
}

TEST_CASE("matrix symbols contribute every branch, sorted within each grid point") {
    GraphSpec s;
    s.kind = GraphSpec::Kind::Diamond;
    s.n = {6};
    s.nu = 2;
    s.mold = Eigen::MatrixXd::Zero(2, 2);
    s.mold(0, 1) = s.mold(1, 0) = 1.0;
    Eigen::MatrixXd L(2, 2);
    L << 0.0, 1.0, 0.0, 1.0;
    s.terms = {{{1}, {}, {L}}};
    const TrigSymbol f = gridspec::symbol_of(s);

    const int m = 40;
    const auto cloud = gridspec::sample_symbol(f, {m}, GridPolicy::Interior);
    REQUIRE(cloud.values.size() == static_cast<std::size_t>(2 * m));
    CHECK(cloud.nu == 2);
    const Eigen::VectorXd grid = gridspec::axis_grid(m, GridPolicy::Interior);
    for (int j = 0; j < m; ++j) {
        CHECK(cloud.values[2 * j] <= cloud.values[2 * j + 1]);
        const Eigen::VectorXd lam = gridspec::eig_symbol(f, grid.segment(j, 1));
        CHECK(cloud.values[2 * j] == doctest::Approx(lam(0)).epsilon(1e-13));
        CHECK(cloud.values[2 * j + 1] == doctest::Approx(lam(1)).epsilon(1e-13));
    }
}

TEST_CASE("per-branch extraction merges back to the flattened cloud") {
    GraphSpec s;
    s.kind = GraphSpec::Kind::Diamond;
    s.n = {6};
    s.nu = 4;
    s.mold = Eigen::MatrixXd::Zero(4, 4);
    for (int i = 0; i + 1 < 4; ++i) s.mold(i, i + 1) = s.mold(i + 1, i) = 1.0;
    s.mold(0, 3) = s.mold(3, 0) = 1.0;
    Eigen::MatrixXd L1 = Eigen::MatrixXd::Zero(4, 4);
    L1(0, 0) = -2.0;
    Eigen::MatrixXd L2 = Eigen::MatrixXd::Zero(4, 4);
    L2(2, 2) = 0.5;
    L2(3, 2) = 6.0;
    s.terms = {{{1}, {}, {L1}}, {{2}, {}, {L2}}};
    const TrigSymbol f = gridspec::symbol_of(s);

    const int m = 25;
    const auto cloud = gridspec::sample_symbol(f, {m}, GridPolicy::Interior);
    REQUIRE(cloud.values.size() == static_cast<std::size_t>(4 * m));

    std::vector<double> merged;
    for (int b = 0; b < 4; ++b)
        for (int j = 0; j < m; ++j) merged.push_back(cloud.values[4 * j + b]);
    CHECK(sorted(merged) == sorted(cloud.values));
}

TEST_CASE("weighted sampling crosses spatial points with the frequency grid") {
    const TrigSymbol f = cosine_symbol();
    const auto ws = gridspec::laplacian_symbol(f, 2.0, [](const Eigen::VectorXd& x) {
        return x(0);
    });

    Eigen::MatrixXd xs(2, 1);
    xs << 0.5, 2.0;
    const int m = 9;
    const auto cloud = gridspec::sample_weighted(ws, xs, {m}, GridPolicy::Interior);
    REQUIRE(cloud.values.size() == static_cast<std::size_t>(2 * m));
    CHECK(cloud.spatial_points == 2);
    CHECK(cloud.axis_counts == std::vector<int>{m});

    const Eigen::VectorXd grid = gridspec::axis_grid(m, GridPolicy::Interior);
    for (int srow = 0; srow < 2; ++srow)
        for (int j = 0; j < m; ++j) {
            const double expected = xs(srow, 0) * (2.0 - 2.0 * std::cos(grid(j)));
            CHECK(cloud.values[static_cast<std::size_t>(srow) * m + j] ==
                  doctest::Approx(expected).epsilon(1e-13));
        }
}

TEST_CASE("weighted sampling defaults to the open interior grid") {
    const TrigSymbol f = cosine_symbol();
    gridspec::WeightedSymbol ws;
    ws.frequency = f;
    Eigen::MatrixXd xs(1, 1);
    xs << 1.0;
    const auto def = gridspec::sample_weighted(ws, xs, {7});
    const auto itr = gridspec::sample_weighted(ws, xs, {7}, GridPolicy::Interior);
    REQUIRE(def.values.size() == itr.values.size());
    for (std::size_t j = 0; j < def.values.size(); ++j) CHECK(def.values[j] == itr.values[j]);
    // interior grids exclude theta = 0, so the maximum stays strictly below 2
    CHECK(*std::max_element(def.values.begin(), def.values.end()) < 2.0);
}

TEST_CASE("sample counts must match the symbol dimension") {
    const TrigSymbol f = cosine_symbol();
    CHECK_THROWS_AS((void)gridspec::sample_symbol(f, {5, 5}), std::invalid_argument);
    gridspec::WeightedSymbol ws;
    ws.frequency = f;
    Eigen::MatrixXd xs(1, 1);
    xs << 0.0;
    CHECK_THROWS_AS((void)gridspec::sample_weighted(ws, xs, {5, 5}), std::invalid_argument);
}
