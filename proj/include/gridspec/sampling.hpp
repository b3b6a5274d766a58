#ifndef GRIDSPEC_SAMPLING_HPP
#define GRIDSPEC_SAMPLING_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridspec/symbol.hpp"
#include "gridspec/threads.hpp"

namespace gridspec {

/// Placement of m equispaced samples on an interval [lo, hi].
enum class GridPolicy {
    Inclusive,  ///< both endpoints: lo + (hi-lo) j/(m-1), j = 0..m-1
    Interior,   ///< open: lo + (hi-lo) j/(m+1), j = 1..m
    Left,       ///< left-closed: lo + (hi-lo) j/m, j = 0..m-1
    Midpoint    ///< cell centers: lo + (hi-lo)(j+1/2)/m, j = 0..m-1
};

inline const char* to_string(GridPolicy p) {
    switch (p) {
        case GridPolicy::Inclusive: return "inclusive";
        case GridPolicy::Interior: return "interior";
        case GridPolicy::Left: return "left";
        case GridPolicy::Midpoint: return "midpoint";
    }
    return "?";
}

inline GridPolicy grid_policy_from_string(const std::string& s) {
    if (s == "inclusive") return GridPolicy::Inclusive;
    if (s == "interior") return GridPolicy::Interior;
    if (s == "left") return GridPolicy::Left;
    if (s == "midpoint") return GridPolicy::Midpoint;
    throw std::invalid_argument("unknown grid policy: " + s);
}

inline Eigen::VectorXd axis_grid(int m, GridPolicy policy, double lo = 0.0,
                                 double hi = std::numbers::pi) {
    if (m < 2) throw std::invalid_argument("axis_grid: need at least 2 samples per axis");
    Eigen::VectorXd g(m);
    switch (policy) {
        case GridPolicy::Inclusive:
            for (int j = 0; j < m; ++j) g(j) = lo + (hi - lo) * j / (m - 1);
            break;
        case GridPolicy::Interior:
            for (int j = 1; j <= m; ++j) g(j - 1) = lo + (hi - lo) * j / (m + 1);
            break;
        case GridPolicy::Left:
            for (int j = 0; j < m; ++j) g(j) = lo + (hi - lo) * j / m;
            break;
        case GridPolicy::Midpoint:
            for (int j = 0; j < m; ++j) g(j) = lo + (hi - lo) * (j + 0.5) / m;
            break;
    }
    return g;
}

/// Flat bag of sampled symbol values (all eigenvalue branches over a product
/// grid, optionally weighted by p over spatial points inside the domain).
struct SampleCloud {
    std::vector<double> values;
    std::vector<int> axis_counts;      ///< frequency-grid samples per axis
    std::int64_t spatial_points = 1;   ///< number of spatial points (1 for pure frequency symbols)
    int nu = 1;
};

namespace detail {

/// All frequency grid points of the product grid, row per point.
inline Eigen::MatrixXd product_grid(const std::vector<int>& counts, GridPolicy policy, double lo,
                                    double hi) {
    const std::size_t d = counts.size();
    std::int64_t total = 1;
    std::vector<Eigen::VectorXd> axes;
    for (int m : counts) {
        axes.push_back(axis_grid(m, policy, lo, hi));
        total *= m;
    }
    Eigen::MatrixXd pts(total, static_cast<Eigen::Index>(d));
    std::vector<int> idx(d, 0);
    for (std::int64_t row = 0; row < total; ++row) {
        for (std::size_t r = 0; r < d; ++r) pts(row, static_cast<Eigen::Index>(r)) = axes[r](idx[r]);
        for (std::size_t r = d; r-- > 0;) {
            if (++idx[r] < counts[r]) break;
            idx[r] = 0;
        }
    }
    return pts;
}

}  // namespace detail

/// Sample every eigenvalue branch of a frequency symbol over a uniform product
/// grid on [0, pi]^d (the canonical half-cube for symbols of undirected
/// graphs; pass lo = -pi for the full cube).
inline SampleCloud sample_symbol(const TrigSymbol& sym, const std::vector<int>& counts,
                                 GridPolicy policy = GridPolicy::Inclusive, double lo = 0.0,
                                 double hi = std::numbers::pi) {
    if (counts.size() != sym.dims())
        throw std::invalid_argument("sample_symbol: need one sample count per axis");
    const Eigen::MatrixXd pts = detail::product_grid(counts, policy, lo, hi);
    const int nu = sym.block_size();

    SampleCloud cloud;
    cloud.axis_counts = counts;
    cloud.nu = nu;
    cloud.values.resize(static_cast<std::size_t>(pts.rows()) * static_cast<std::size_t>(nu));
    parallel_for(pts.rows(), [&](std::int64_t row) {
        const Eigen::VectorXd lam = eig_symbol(sym, pts.row(row).transpose());
        for (int b = 0; b < nu; ++b)
            cloud.values[static_cast<std::size_t>(row) * nu + b] = lam(b);
    });
    return cloud;
}

/// Sample a weighted symbol g(x, theta) over given spatial points (already
/// restricted to the domain) times a uniform frequency product grid.
inline SampleCloud sample_weighted(const WeightedSymbol& ws, const Eigen::MatrixXd& spatial_points,
                                   const std::vector<int>& theta_counts,
                                   GridPolicy policy = GridPolicy::Interior, double lo = 0.0,
                                   double hi = std::numbers::pi) {
    if (theta_counts.size() != ws.frequency.dims())
        throw std::invalid_argument("sample_weighted: need one sample count per frequency axis");
    const Eigen::MatrixXd pts = detail::product_grid(theta_counts, policy, lo, hi);
    const int nu = ws.frequency.block_size();
    const std::int64_t npts = pts.rows();
    const std::int64_t nsp = spatial_points.rows();

    // frequency part first: branch values (after any affine wrap) per grid point
    Eigen::MatrixXd freq(npts, nu);
    parallel_for(npts, [&](std::int64_t row) {
        Eigen::VectorXd lam = eig_symbol(ws.frequency, pts.row(row).transpose());
        if (ws.affine) {
            lam = (ws.c - lam.array()).matrix();
            std::reverse(lam.data(), lam.data() + lam.size());
        }
        freq.row(row) = lam.transpose();
    });

    SampleCloud cloud;
    cloud.axis_counts = theta_counts;
    cloud.spatial_points = nsp;
    cloud.nu = nu;
    cloud.values.resize(static_cast<std::size_t>(nsp) * static_cast<std::size_t>(npts) * nu);
    parallel_for(nsp, [&](std::int64_t s) {
        const double p = ws.spatial ? ws.spatial(spatial_points.row(s).transpose()) : 1.0;
        double* dst = cloud.values.data() + static_cast<std::size_t>(s) * static_cast<std::size_t>(npts) * nu;
        for (std::int64_t row = 0; row < npts; ++row)
            for (int b = 0; b < nu; ++b) *dst++ = p * freq(row, b);
    });
    return cloud;
}

}  // namespace gridspec

#endif  // GRIDSPEC_SAMPLING_HPP
