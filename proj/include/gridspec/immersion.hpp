#ifndef GRIDSPEC_IMMERSION_HPP
#define GRIDSPEC_IMMERSION_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gridspec/graph.hpp"
#include "gridspec/multiindex.hpp"
#include "gridspec/symbol.hpp"

namespace gridspec {

/// Membership test for a (regular) domain inside the unit cube. The caller
/// asserts regularity of the boundary; the predicate itself is opaque.
struct DomainPredicate {
    std::function<bool(const Eigen::VectorXd&)> inside;
    std::string description;
};

inline DomainPredicate whole_cube() {
    return {[](const Eigen::VectorXd&) { return true; }, "unit cube"};
}

/// Open ball {x : |x - center| < radius} (strict inequality: boundary excluded).
inline DomainPredicate disk(const Eigen::VectorXd& center, double radius) {
    return {[center, radius](const Eigen::VectorXd& x) {
                return (x - center).squaredNorm() < radius * radius;
            },
            "disk"};
}

/// Open half-space {x : x_axis < threshold}.
inline DomainPredicate halfspace(int axis, double threshold) {
    return {[axis, threshold](const Eigen::VectorXd& x) { return x(axis) < threshold; }, "halfspace"};
}

/// Planar polygon via the even-odd rule (d = 2); points on an edge follow the
/// crossing parity and are not handled specially.
inline DomainPredicate polygon(const std::vector<Eigen::Vector2d>& verts) {
    return {[verts](const Eigen::VectorXd& x) {
                bool in = false;
                const std::size_t m = verts.size();
                for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
                    const auto& a = verts[i];
                    const auto& b = verts[j];
                    if ((a.y() > x(1)) != (b.y() > x(1)) &&
                        x(0) < (b.x() - a.x()) * (x(1) - a.y()) / (b.y() - a.y()) + a.x())
                        in = !in;
                }
                return in;
            },
            "polygon"};
}

/// A graph immersed in the unit cube: node coordinates, position-weighted
/// adjacency, per-node potential, and the mesh widths. `kept` maps node rows
/// back to the mother graph's node indices after a restriction (identity for
/// un-restricted graphs).
struct GridGraph {
    Eigen::MatrixXd coords;       ///< one row per node, d columns
    SparseSym adjacency;
    Eigen::VectorXd potential;    ///< kappa; zero until boundary_potential fills it
    Eigen::VectorXd h;            ///< mesh width per axis
    std::vector<std::int64_t> kept;
};

namespace detail {

/// Scale every structural edge weight by p evaluated at the edge midpoint.
inline SparseSym midpoint_weighted(const SparseSym& W, const Eigen::MatrixXd& coords,
                                   const ScalarField& p) {
    if (!p) return W;
    SparseSym out = W;
    for (int k = 0; k < out.outerSize(); ++k)
        for (SparseSym::InnerIterator it(out, k); it; ++it) {
            const Eigen::VectorXd mid = 0.5 * (coords.row(it.row()) + coords.row(it.col()));
            it.valueRef() *= p(mid);
        }
    return out;
}

}  // namespace detail

/// Immerse a plain (scalar-weight) graph into the cube: h_r = 1/(n_r + 1),
/// node j sits at j o h, and every edge weight is multiplied by p at the
/// exact edge midpoint.
inline GridGraph immerse_cube(const GraphSpec& spec, const ScalarField& p = {}) {
    validate(spec);
    if (spec.kind == GraphSpec::Kind::Diamond)
        throw std::invalid_argument("immerse_cube: use immerse_diamond_cube for diamond specs");
    const std::size_t d = spec.n.size();
    const std::int64_t D = grid_size(spec.n);

    GridGraph g;
    g.h.resize(static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r) g.h(static_cast<Eigen::Index>(r)) = 1.0 / static_cast<double>(spec.n[r] + 1);
    g.coords.resize(D, static_cast<Eigen::Index>(d));
    for (std::int64_t idx = 0; idx < D; ++idx) {
        const MultiIndex j = delinearize(idx, spec.n);
        for (std::size_t r = 0; r < d; ++r)
            g.coords(idx, static_cast<Eigen::Index>(r)) = static_cast<double>(j[r]) * g.h(static_cast<Eigen::Index>(r));
    }
    g.adjacency = detail::midpoint_weighted(build_dlevel(spec), g.coords, p);
    g.potential = Eigen::VectorXd::Zero(D);
    g.kept.resize(static_cast<std::size_t>(D));
    for (std::int64_t i = 0; i < D; ++i) g.kept[static_cast<std::size_t>(i)] = i;
    return g;
}

/// Immerse a plain graph into the CLOSED cube: h_r = 1/(n_r - 1) and node j
/// sits at (j - 1) o h, so the outermost node layers lie exactly on the cube
/// boundary. Use this for mother lattices whose boundary shell carries
/// Dirichlet data and is meant to be cut away by a later restriction.
inline GridGraph immerse_cube_closed(const GraphSpec& spec, const ScalarField& p = {}) {
    validate(spec);
    if (spec.kind == GraphSpec::Kind::Diamond)
        throw std::invalid_argument("immerse_cube_closed: use immerse_diamond_cube for diamond specs");
    const std::size_t d = spec.n.size();
    for (std::size_t r = 0; r < d; ++r)
        if (spec.n[r] < 2) throw std::invalid_argument("immerse_cube_closed: need n >= 2 per axis");
    const std::int64_t D = grid_size(spec.n);

    GridGraph g;
    g.h.resize(static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r) g.h(static_cast<Eigen::Index>(r)) = 1.0 / static_cast<double>(spec.n[r] - 1);
    g.coords.resize(D, static_cast<Eigen::Index>(d));
    for (std::int64_t idx = 0; idx < D; ++idx) {
        const MultiIndex j = delinearize(idx, spec.n);
        for (std::size_t r = 0; r < d; ++r)
            g.coords(idx, static_cast<Eigen::Index>(r)) = static_cast<double>(j[r] - 1) * g.h(static_cast<Eigen::Index>(r));
    }
    g.adjacency = detail::midpoint_weighted(build_dlevel(spec), g.coords, p);
    g.potential = Eigen::VectorXd::Zero(D);
    g.kept.resize(static_cast<std::size_t>(D));
    for (std::int64_t i = 0; i < D; ++i) g.kept[static_cast<std::size_t>(i)] = i;
    return g;
}

/// Immerse a diamond graph: the diamonds are lined up along the first axis,
/// h = (1/(nu n_1 + 1), 1/(n_2 + 1), ..., 1/(n_d + 1)) and node (j, r) sits at
/// ((nu (j_1 - 1) + r) h_1, j_2 h_2, ..., j_d h_d), so coordinates stay
/// pairwise distinct and fill the axis like a single refined grid.
inline GridGraph immerse_diamond_cube(const GraphSpec& spec, const ScalarField& p = {}) {
    validate(spec);
    if (spec.kind != GraphSpec::Kind::Diamond)
        throw std::invalid_argument("immerse_diamond_cube: spec is not a diamond spec");
    const std::size_t d = spec.n.size();
    const std::int64_t D = grid_size(spec.n);
    const int nu = spec.nu;
    const std::int64_t dim = D * nu;

    GridGraph g;
    g.h.resize(static_cast<Eigen::Index>(d));
    g.h(0) = 1.0 / static_cast<double>(nu * spec.n[0] + 1);
    for (std::size_t r = 1; r < d; ++r) g.h(static_cast<Eigen::Index>(r)) = 1.0 / static_cast<double>(spec.n[r] + 1);
    g.coords.resize(dim, static_cast<Eigen::Index>(d));
    for (std::int64_t b = 0; b < D; ++b) {
        const MultiIndex j = delinearize(b, spec.n);
        for (int r = 1; r <= nu; ++r) {
            const std::int64_t row = b * nu + (r - 1);
            g.coords(row, 0) = static_cast<double>(nu * (j[0] - 1) + r) * g.h(0);
            for (std::size_t s = 1; s < d; ++s)
                g.coords(row, static_cast<Eigen::Index>(s)) = static_cast<double>(j[s]) * g.h(static_cast<Eigen::Index>(s));
        }
    }
    g.adjacency = detail::midpoint_weighted(build_diamond(spec), g.coords, p);
    g.potential = Eigen::VectorXd::Zero(dim);
    g.kept.resize(static_cast<std::size_t>(dim));
    for (std::int64_t i = 0; i < dim; ++i) g.kept[static_cast<std::size_t>(i)] = i;
    return g;
}

/// Keep only the nodes inside omega; the adjacency becomes the principal
/// submatrix on the kept nodes and `kept` records their mother-graph indices.
inline GridGraph restrict_domain(const GridGraph& g, const DomainPredicate& omega) {
    std::vector<std::int64_t> keep;
    std::vector<std::int64_t> newpos(static_cast<std::size_t>(g.coords.rows()), -1);
    for (Eigen::Index i = 0; i < g.coords.rows(); ++i)
        if (omega.inside(g.coords.row(i).transpose())) {
            newpos[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(keep.size());
            keep.push_back(i);
        }
    if (keep.empty()) throw std::runtime_error("restrict_domain: no nodes left inside " + omega.description);

    GridGraph out;
    out.h = g.h;
    out.coords.resize(static_cast<Eigen::Index>(keep.size()), g.coords.cols());
    out.potential = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.coords.row(static_cast<Eigen::Index>(i)) = g.coords.row(keep[i]);
        out.potential(static_cast<Eigen::Index>(i)) = g.potential(keep[i]);
    }
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < g.adjacency.outerSize(); ++k)
        for (SparseSym::InnerIterator it(g.adjacency, k); it; ++it) {
            const std::int64_t r = newpos[static_cast<std::size_t>(it.row())];
            const std::int64_t c = newpos[static_cast<std::size_t>(it.col())];
            if (r >= 0 && c >= 0) trip.emplace_back(static_cast<int>(r), static_cast<int>(c), it.value());
        }
    out.adjacency.resize(static_cast<int>(keep.size()), static_cast<int>(keep.size()));
    out.adjacency.setFromTriplets(trip.begin(), trip.end());
    out.adjacency.makeCompressed();
    for (std::size_t i = 0; i < keep.size(); ++i) {
        // compose with the mother graph's own kept map so chains of restrictions stay traceable
        out.kept.push_back(g.kept[static_cast<std::size_t>(keep[i])]);
    }
    return out;
}

/// Boundary potential of a restriction: for each kept node v,
/// kappa(v) = h2_scale q(x_v) + sum of mother-edge weights from v into removed
/// nodes. Also reports how many nodes have deficiency 0, 1, 2, ... edges.
struct BoundaryPotential {
    Eigen::VectorXd kappa;
    std::vector<std::int64_t> deficiency_histogram;  ///< index = #removed neighbors
};

inline BoundaryPotential boundary_potential(const GridGraph& restricted, const GridGraph& mother,
                                            const ScalarField& q, double h2_scale) {
    const Eigen::Index nr = restricted.coords.rows();
    std::vector<bool> kept_flag(static_cast<std::size_t>(mother.coords.rows()), false);
    for (std::size_t i = 0; i < restricted.kept.size(); ++i) {
        const std::int64_t m = restricted.kept[i];
        if (m < 0 || m >= mother.coords.rows())
            throw std::invalid_argument("boundary_potential: restriction does not match the mother graph");
        kept_flag[static_cast<std::size_t>(m)] = true;
    }

    BoundaryPotential out;
    out.kappa = Eigen::VectorXd::Zero(nr);
    for (Eigen::Index i = 0; i < nr; ++i) {
        const std::int64_t m = restricted.kept[static_cast<std::size_t>(i)];
        double deficit = 0.0;
        std::int64_t removed_neighbors = 0;
        for (SparseSym::InnerIterator it(mother.adjacency, static_cast<int>(m)); it; ++it) {
            if (!kept_flag[static_cast<std::size_t>(it.row())]) {
                deficit += it.value();
                ++removed_neighbors;
            }
        }
        out.kappa(i) = h2_scale * (q ? q(restricted.coords.row(i).transpose()) : 0.0) + deficit;
        if (static_cast<std::size_t>(removed_neighbors) >= out.deficiency_histogram.size())
            out.deficiency_histogram.resize(static_cast<std::size_t>(removed_neighbors) + 1, 0);
        ++out.deficiency_histogram[static_cast<std::size_t>(removed_neighbors)];
    }
    return out;
}

}  // namespace gridspec

#endif  // GRIDSPEC_IMMERSION_HPP
