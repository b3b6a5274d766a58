#ifndef GRIDSPEC_SPECTRAL_HPP
#define GRIDSPEC_SPECTRAL_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gridspec/rearrangement.hpp"
#include "gridspec/symbol.hpp"

namespace gridspec {

/// Full ascending spectrum of a symmetric matrix.
struct Spectrum {
    Eigen::VectorXd lambda;
    std::int64_t dim() const { return lambda.size(); }
};

namespace detail {
/// Assembled matrices are symmetric by construction; anything beyond roundoff
/// signals a broken caller, not a numerical issue.
constexpr double SYMMETRY_TOL = 1e-12;
}  // namespace detail

/// Dense symmetric eigensolve (orthogonal reduction to tridiagonal form plus
/// implicitly shifted diagonalization). Input must be symmetric.
inline Spectrum sym_eigs(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols()) throw std::invalid_argument("sym_eigs: matrix not square");
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > detail::SYMMETRY_TOL)
        throw std::invalid_argument("sym_eigs: matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sym_eigs: eigensolver did not converge");
    return {es.eigenvalues()};
}

inline Spectrum sym_eigs(const SparseSym& A) { return sym_eigs(Eigen::MatrixXd(A)); }

/// Eigenpairs variant for residual spot checks.
struct EigenPairs {
    Eigen::VectorXd lambda;
    Eigen::MatrixXd vectors;  ///< columns are eigenvectors
};

inline EigenPairs sym_eigs_with_vectors(const Eigen::MatrixXd& A) {
    if ((A - A.transpose()).cwiseAbs().maxCoeff() > detail::SYMMETRY_TOL)
        throw std::invalid_argument("sym_eigs: matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("sym_eigs: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

/// Quantile index k(n) = round(x d_n), clamped to [1, d_n].
inline std::int64_t quantile_index(double x, std::int64_t d) {
    const auto k = static_cast<std::int64_t>(std::llround(x * static_cast<double>(d)));
    return std::max<std::int64_t>(1, std::min(d, k));
}

/// One eigenvalue-vs-rearrangement comparison.
struct WeylError {
    double x = 0.0;            ///< requested quantile
    std::int64_t k = 0;        ///< eigenvalue index (1-based)
    double lambda = 0.0;       ///< lambda_k
    double gtilde = 0.0;       ///< g~(k / d_n)
    double error = 0.0;        ///< |lambda/g~ - 1|, or |lambda - g~| when flagged
    bool absolute = false;     ///< true when g~ vanished and the error is absolute
};

/// Relative errors |lambda_{k(n)} / g~(k(n)/d_n) - 1| at the given quantiles.
inline std::vector<WeylError> weyl_errors(const Spectrum& s, const Rearrangement& r,
                                          const std::vector<double>& quantiles) {
    const std::int64_t d = s.dim();
    std::vector<WeylError> out;
    out.reserve(quantiles.size());
    for (double x : quantiles) {
        WeylError e;
        e.x = x;
        e.k = quantile_index(x, d);
        e.lambda = s.lambda(e.k - 1);
        e.gtilde = r.quantile(static_cast<double>(e.k) / static_cast<double>(d));
        if (e.gtilde == 0.0) {
            e.absolute = true;
            e.error = std::abs(e.lambda - e.gtilde);
        } else {
            e.error = std::abs(e.lambda / e.gtilde - 1.0);
        }
        out.push_back(e);
    }
    return out;
}

/// Scaled extreme gap d_n (lambda_{d_n} - lambda_{d_n - 1}).
inline double extreme_gap(const Spectrum& s) {
    const std::int64_t d = s.dim();
    if (d < 2) throw std::invalid_argument("extreme_gap: need at least 2 eigenvalues");
    return static_cast<double>(d) * (s.lambda(d - 1) - s.lambda(d - 2));
}

/// A differentiable scalar map together with its derivative.
struct SmoothMap {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

inline SmoothMap identity_map() {
    return {[](double t) { return t; }, [](double) { return 1.0; }};
}

/// Extreme-gap comparison against the rearrangement prediction at
/// x_n = 1 - 1/d_n.
struct GapReport {
    double raw_gap = 0.0;        ///< d_n [tau(lambda_dn) - tau(lambda_{dn-1})]
    double predicted = 0.0;      ///< tau'(g~(x_n)) g~'(x_n), or the sample-gap denominator
    double ratio = 0.0;          ///< raw_gap / predicted when defined
    bool degenerate = false;     ///< predicted vanished; ratio not computed
    bool sample_gap = false;     ///< denominator used consecutive rearrangement samples
};

/// When `use_sample_gap` the denominator is d_n [tau(s_N) - tau(s_{N-1})]
/// (consecutive top rearrangement samples); otherwise the theoretical
/// tau'(g~(x_n)) g~'(x_n).
inline GapReport gap_ratio(const Spectrum& s, const Rearrangement& r, const SmoothMap& tau,
                           bool use_sample_gap = false) {
    const std::int64_t d = s.dim();
    if (d < 2) throw std::invalid_argument("gap_ratio: need at least 2 eigenvalues");
    GapReport rep;
    rep.sample_gap = use_sample_gap;
    rep.raw_gap = static_cast<double>(d) *
                  (tau.value(s.lambda(d - 1)) - tau.value(s.lambda(d - 2)));
    if (use_sample_gap) {
        const auto& sorted = r.sorted();
        const std::size_t N = sorted.size();
        if (N < 2) throw std::invalid_argument("gap_ratio: need at least 2 samples");
        rep.predicted = static_cast<double>(d) *
                        (tau.value(sorted[N - 1]) - tau.value(sorted[N - 2]));
    } else {
        const double xn = 1.0 - 1.0 / static_cast<double>(d);
        rep.predicted = tau.derivative(r.quantile(xn)) * r.derivative_at(xn);
    }
    if (rep.predicted == 0.0 || !std::isfinite(rep.predicted)) {
        rep.degenerate = true;
    } else {
        rep.ratio = rep.raw_gap / rep.predicted;
    }
    return rep;
}

/// Closed interval.
struct Interval {
    double lo = 0.0, hi = 0.0;
};

/// Per-branch ranges of a d=1 symbol from a dense sweep (`points` samples per
/// branch over [0, pi], both endpoints included), merged when closer than
/// `merge_tol`. The union approximates the symbol's image set.
inline std::vector<Interval> branch_ranges(const TrigSymbol& sym, int points = 10000,
                                           double merge_tol = 1e-9) {
    if (sym.dims() != 1) throw std::invalid_argument("branch_ranges: only d = 1 symbols");
    const int nu = sym.block_size();
    std::vector<Interval> ranges(static_cast<std::size_t>(nu),
                                 {std::numeric_limits<double>::infinity(),
                                  -std::numeric_limits<double>::infinity()});
    for (int j = 0; j < points; ++j) {
        Eigen::VectorXd theta(1);
        theta(0) = std::numbers::pi * j / (points - 1);
        const Eigen::VectorXd lam = eig_symbol(sym, theta);
        for (int b = 0; b < nu; ++b) {
            ranges[static_cast<std::size_t>(b)].lo = std::min(ranges[static_cast<std::size_t>(b)].lo, lam(b));
            ranges[static_cast<std::size_t>(b)].hi = std::max(ranges[static_cast<std::size_t>(b)].hi, lam(b));
        }
    }
    std::sort(ranges.begin(), ranges.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const Interval& iv : ranges) {
        if (!merged.empty() && iv.lo <= merged.back().hi + merge_tol)
            merged.back().hi = std::max(merged.back().hi, iv.hi);
        else
            merged.push_back(iv);
    }
    return merged;
}

/// Number of eigenvalues outside every interval inflated by `margin`.
inline std::int64_t outlier_count(const Spectrum& s, const std::vector<Interval>& intervals,
                                  double margin) {
    std::int64_t count = 0;
    for (Eigen::Index i = 0; i < s.lambda.size(); ++i) {
        const double v = s.lambda(i);
        bool inside = false;
        for (const Interval& iv : intervals)
            if (v >= iv.lo - margin && v <= iv.hi + margin) {
                inside = true;
                break;
            }
        if (!inside) ++count;
    }
    return count;
}

}  // namespace gridspec

#endif  // GRIDSPEC_SPECTRAL_HPP
