#ifndef GRIDSPEC_APPS_HPP
#define GRIDSPEC_APPS_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridspec/graph.hpp"
#include "gridspec/immersion.hpp"
#include "gridspec/rearrangement.hpp"
#include "gridspec/sampling.hpp"
#include "gridspec/spectral.hpp"
#include "gridspec/symbol.hpp"

namespace gridspec {

// ---------------------------------------------------------------------------
// Finite differences: 5-point operator for -div(p grad u) + q u on the disk
// of radius 1/2 centered at (1/2, 1/2), discretized on the n x n interior
// lattice of the unit square and restricted to the disk.
// ---------------------------------------------------------------------------

/// Problem data for the disk discretization. `p` is the diffusion field,
/// `q` the potential field, and `p_bar` extends p continuously outside the
/// disk (constant at the boundary value) so that edges crossing the boundary
/// still carry a well-defined midpoint weight.
struct FDDiskProblem {
    int n = 0;                     ///< interior lattice points per axis
    ScalarField p;                 ///< diffusion field on the disk
    ScalarField q;                 ///< potential field
    ScalarField p_bar;             ///< continuous extension of p to the square
    Eigen::Vector2d center{0.5, 0.5};
    double radius = 0.5;
};

/// The default coefficients: p = 1 + (x-1/2)^2 + (y-1/2)^2, q = e^{xy}, and
/// p extended by its constant boundary value 5/4 outside the disk.
inline FDDiskProblem default_disk_problem(int n) {
    FDDiskProblem prob;
    prob.n = n;
    prob.p = [](const Eigen::VectorXd& x) {
        return 1.0 + (x(0) - 0.5) * (x(0) - 0.5) + (x(1) - 0.5) * (x(1) - 0.5);
    };
    prob.q = [](const Eigen::VectorXd& x) { return std::exp(x(0) * x(1)); };
    const Eigen::Vector2d c = prob.center;
    const double r2 = prob.radius * prob.radius;
    ScalarField p = prob.p;
    prob.p_bar = [p, c, r2](const Eigen::VectorXd& x) {
        const double d2 = (x(0) - c(0)) * (x(0) - c(0)) + (x(1) - c(1)) * (x(1) - c(1));
        return d2 < r2 ? p(x) : 1.0 + r2;
    };
    return prob;
}

/// Everything the disk discretization produces: the immersed mother lattice,
/// its restriction to the disk, the boundary-compensation potential, the
/// assembled operator, and the predicted weighted symbol
/// g(x, theta) = p(x) (4 - 2 cos theta_1 - 2 cos theta_2).
///
/// The mother lattice covers the CLOSED square (it includes the shell of
/// lattice points sitting on the square's boundary, where the Dirichlet data
/// lives). Restricting to the open disk removes that shell together with the
/// exterior points, so the boundary potential compensates every eliminated
/// neighbor — including wall-side ones near the four tangent points — and the
/// assembled operator coincides with the classical 5-point discretization of
/// the Dirichlet problem on the disk.
struct FDDiskResult {
    GraphSpec lattice;             ///< interior n x n nearest-neighbor template
    GridGraph mother;              ///< closed-square immersion, p_bar midpoint weights
    GridGraph restricted;          ///< nodes strictly inside the disk
    BoundaryPotential boundary;    ///< kappa and the removed-edge histogram
    SparseSym laplacian;           ///< Delta = D + K - W on the kept nodes
    WeightedSymbol predicted;      ///< p(x) (4 - 2 cos theta_1 - 2 cos theta_2)
};

inline FDDiskResult fd_disk_laplacian(const FDDiskProblem& prob) {
    if (prob.n < 4) throw std::invalid_argument("fd_disk_laplacian: need n >= 4");
    if (!prob.p || !prob.q || !prob.p_bar)
        throw std::invalid_argument("fd_disk_laplacian: problem fields must be set");

    FDDiskResult out;
    out.lattice.kind = GraphSpec::Kind::DLevel;
    out.lattice.n = {prob.n, prob.n};
    out.lattice.terms = {GraphTerm{{0, 1}, {1.0}, {}}, GraphTerm{{1, 0}, {1.0}, {}}};

    // Mother lattice on the closed square: n + 2 points per axis spaced
    // h = 1/(n + 1), outermost layer on the boundary of the square.
    GraphSpec shell = out.lattice;
    shell.n = {prob.n + 2, prob.n + 2};
    out.mother = immerse_cube_closed(shell, prob.p_bar);
    out.restricted = restrict_domain(out.mother, disk(prob.center, prob.radius));

    const double h = out.mother.h(0);
    out.boundary = boundary_potential(out.restricted, out.mother, prob.q, h * h);
    out.restricted.potential = out.boundary.kappa;
    out.laplacian = graph_laplacian(out.restricted.adjacency, out.restricted.potential);

    out.predicted = laplacian_symbol(symbol_of(out.lattice), 4.0, prob.p);
    return out;
}

// ---------------------------------------------------------------------------
// Finite elements: quadratic C^0 B-spline (Q2 Lagrangian) stiffness matrix
// for -u'' on (0,1), and its exact decomposition (1/n) A_n = K_n - W where W
// is a diamond graph with 2x2 molds.
// ---------------------------------------------------------------------------

/// A stiffness matrix together with the scalar normalization that makes its
/// entries mesh-independent (A = normalization * pattern).
struct StiffnessMatrix {
    Eigen::MatrixXd matrix;
    double normalization = 1.0;
};

/// The diamond decomposition of the normalized Q2 stiffness matrix:
/// (1/n) A = diag(K) - W(spec), exact in floating point up to rounding.
struct FEMDecomposition {
    Eigen::VectorXd K;             ///< alternating diagonal 4/3, 8/3, 4/3, ...
    GraphSpec spec;                ///< diamond graph carrying W
};

/// Assemble the 2n x 2n quadratic-element stiffness matrix: tridiagonal
/// pattern (4 on odd diagonal entries, 8 on even, -2 off-diagonal) plus -2
/// couplings between consecutive even-indexed entries, all scaled by n/3.
inline StiffnessMatrix fem_q2_matrix(int n) {
    if (n < 3) throw std::invalid_argument("fem_quadratic_stiffness: need n >= 3");
    const int dim = 2 * n;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 1; i <= dim; ++i) {  // 1-based index arithmetic mirrors the stencil
        M(i - 1, i - 1) = (i % 2 == 0) ? 8.0 : 4.0;
        if (i + 1 <= dim) M(i - 1, i) = -2.0;
        if (i - 1 >= 1) M(i - 1, i - 2) = -2.0;
        if (i % 2 == 0) {
            if (i + 2 <= dim) M(i - 1, i + 1) = -2.0;
            if (i - 2 >= 1) M(i - 1, i - 3) = -2.0;
        }
    }
    StiffnessMatrix A;
    A.normalization = static_cast<double>(n) / 3.0;
    A.matrix = A.normalization * M;
    return A;
}

/// The quadratic-element stiffness matrix together with its exact graph
/// decomposition and the 2x2 Hermitian matrix symbol of (1/n) A_n.
inline std::tuple<StiffnessMatrix, FEMDecomposition, TrigSymbol> fem_quadratic_stiffness(int n) {
    StiffnessMatrix A = fem_q2_matrix(n);

    FEMDecomposition dec;
    dec.K.resize(2 * n);
    for (int i = 1; i <= 2 * n; ++i) dec.K(i - 1) = (i % 2 == 0) ? 8.0 / 3.0 : 4.0 / 3.0;

    // W = (1/n) diag(K) - (1/n) A has 2x2 block-Toeplitz structure: mold
    // (1/3)[[0,2],[2,0]] on the diagonal blocks and link (1/3)[[0,2],[0,2]]
    // one block below the diagonal.
    dec.spec.kind = GraphSpec::Kind::Diamond;
    dec.spec.n = {n};
    dec.spec.nu = 2;
    dec.spec.mold.resize(2, 2);
    dec.spec.mold << 0.0, 2.0 / 3.0, 2.0 / 3.0, 0.0;
    Eigen::MatrixXd L1(2, 2);
    L1 << 0.0, 2.0 / 3.0, 0.0, 2.0 / 3.0;
    dec.spec.terms = {GraphTerm{{1}, {}, {L1}}};

    // Symbol of (1/n) A_n = K - W: constant block minus the diamond symbol.
    TrigSymbol f(1, 2);
    Eigen::MatrixXcd C0(2, 2);
    C0 << 4.0 / 3.0, -2.0 / 3.0, -2.0 / 3.0, 8.0 / 3.0;
    f.add_pair({0}, C0);
    f.add_pair({1}, -L1.cast<std::complex<double>>());
    return {std::move(A), std::move(dec), std::move(f)};
}

// ---------------------------------------------------------------------------
// Isogeometric analysis: cubic C^2 B-spline stiffness matrix for -u'' on
// (0,1). Toeplitz in the bulk with heptadiagonal stencil
// (-2, -48, -30, 160, -30, -48, -2)/240 and explicit boundary corrections.
// ---------------------------------------------------------------------------

inline StiffnessMatrix iga_c3_matrix(int n) {
    if (n < 9) throw std::invalid_argument("iga_cubic_stiffness: need n >= 9");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    const double band[4] = {160.0, -30.0, -48.0, -2.0};
    for (int i = 0; i < n; ++i)
        for (int k = -3; k <= 3; ++k) {
            const int j = i + k;
            if (j >= 0 && j < n) M(i, j) = band[std::abs(k)];
        }
    // Boundary corrections (1-based upper-triangle entries, mirrored):
    const struct { int i, j; double v; } corner[] = {
        {1, 1, 360.0}, {1, 2, 9.0}, {1, 3, -60.0}, {1, 4, -3.0},
        {2, 2, 162.0}, {2, 3, -8.0}, {2, 4, -47.0},
    };
    for (const auto& c : corner) {
        M(c.i - 1, c.j - 1) = c.v;
        M(c.j - 1, c.i - 1) = c.v;
        M(n - c.i, n - c.j) = c.v;  // persymmetric mirror at the lower-right
        M(n - c.j, n - c.i) = c.v;
    }
    StiffnessMatrix A;
    A.normalization = 1.0 / 240.0;
    A.matrix = A.normalization * M;
    return A;
}

/// The cubic-spline stiffness matrix and its predicted scalar symbol
/// f(theta) = (160 - 60 cos theta - 96 cos 2theta - 4 cos 3theta)/240,
/// the graph-Laplacian symbol of the 3-term Toeplitz graph with weights
/// 30/240, 48/240, 2/240 at offsets 1, 2, 3.
inline std::pair<StiffnessMatrix, TrigSymbol> iga_cubic_stiffness(int n) {
    StiffnessMatrix A = iga_c3_matrix(n);
    TrigSymbol f(1, 1);
    Eigen::MatrixXcd C0(1, 1), C1(1, 1), C2(1, 1), C3(1, 1);
    C0(0, 0) = 160.0 / 240.0;
    C1(0, 0) = -30.0 / 240.0;
    C2(0, 0) = -48.0 / 240.0;
    C3(0, 0) = -2.0 / 240.0;
    f.add_pair({0}, C0);
    f.add_pair({1}, C1);
    f.add_pair({2}, C2);
    f.add_pair({3}, C3);
    return {std::move(A), std::move(f)};
}

// ---------------------------------------------------------------------------
// Validation driver: eigenvalues vs. rearranged symbol samples.
// ---------------------------------------------------------------------------

/// Summary of one matrix-vs-symbol comparison run.
struct ApplicationReport {
    std::int64_t dim = 0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::vector<WeylError> quantile_errors;
    double extreme_gap = 0.0;
    std::vector<Interval> branch_intervals;   ///< d = 1 symbols only
    std::int64_t outliers = -1;               ///< -1 when intervals were not computable
    std::int64_t sample_count = 0;
};

/// Compare a symmetric matrix against a frequency symbol: full spectrum,
/// quantile errors against the rearrangement of `samples`, scaled extreme
/// gap, and (for univariate symbols) the outlier count w.r.t. the branch
/// ranges.
inline ApplicationReport validate_application(const Eigen::MatrixXd& matrix, const TrigSymbol& predicted,
                                              const SampleCloud& samples,
                                              const std::vector<double>& quantiles = {0.1, 0.5, 0.8, 1.0},
                                              double outlier_margin = 1e-6) {
    const Spectrum s = sym_eigs(matrix);
    const Rearrangement r = Rearrangement::of(samples);

    ApplicationReport rep;
    rep.dim = s.dim();
    rep.lambda_min = s.lambda(0);
    rep.lambda_max = s.lambda(s.dim() - 1);
    rep.quantile_errors = weyl_errors(s, r, quantiles);
    rep.extreme_gap = extreme_gap(s);
    rep.sample_count = static_cast<std::int64_t>(samples.values.size());
    if (predicted.dims() == 1) {
        rep.branch_intervals = branch_ranges(predicted);
        rep.outliers = outlier_count(s, rep.branch_intervals, outlier_margin);
    }
    return rep;
}

/// Weighted-symbol variant (spatially varying coefficient): samples are taken
/// over the supplied spatial points times an interior frequency grid.
inline ApplicationReport validate_application(const Eigen::MatrixXd& matrix, const WeightedSymbol& predicted,
                                              const Eigen::MatrixXd& spatial_points,
                                              const std::vector<int>& theta_counts,
                                              const std::vector<double>& quantiles = {0.1, 0.5, 0.8, 1.0}) {
    const Spectrum s = sym_eigs(matrix);
    const SampleCloud cloud = sample_weighted(predicted, spatial_points, theta_counts);
    const Rearrangement r = Rearrangement::of(cloud);

    ApplicationReport rep;
    rep.dim = s.dim();
    rep.lambda_min = s.lambda(0);
    rep.lambda_max = s.lambda(s.dim() - 1);
    rep.quantile_errors = weyl_errors(s, r, quantiles);
    rep.extreme_gap = extreme_gap(s);
    rep.sample_count = static_cast<std::int64_t>(cloud.values.size());
    return rep;
}

}  // namespace gridspec

#endif  // GRIDSPEC_APPS_HPP
