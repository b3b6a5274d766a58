#ifndef GRIDSPEC_GRAPH_HPP
#define GRIDSPEC_GRAPH_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridspec/multiindex.hpp"

namespace gridspec {

/// One structural term of a graph spec: an offset t together with either one
/// scalar weight per direction class (plain graphs) or one nu x nu linking
/// operator per direction class (diamond graphs). Class order follows
/// direction_set(t).reps (lexicographic).
struct GraphTerm {
    MultiIndex t;
    std::vector<double> weights;          ///< plain graphs: one per class
    std::vector<Eigen::MatrixXd> links;   ///< diamond graphs: one per class
};

/// Declarative description of a Toeplitz / d-level / diamond Toeplitz graph.
struct GraphSpec {
    enum class Kind { Toeplitz, DLevel, Diamond };
    Kind kind = Kind::Toeplitz;
    MultiIndex n;                 ///< nodes per level
    int nu = 1;                   ///< diamond size (1 unless Kind::Diamond)
    Eigen::MatrixXd mold;         ///< diamond-internal adjacency (nu x nu)
    std::vector<GraphTerm> terms;
};

using SparseSym = Eigen::SparseMatrix<double>;

namespace detail {

constexpr double WEIGHT_ZERO_TOL = 0.0;  // exact: zero weights are rejected, not dropped

inline void validate_common(const GraphSpec& s) {
    if (s.n.empty() || !all_positive(s.n))
        throw std::invalid_argument("graph spec: n must be positive in every level");
    if (s.terms.empty()) throw std::invalid_argument("graph spec: at least one term required");
}

}  // namespace detail

/// Validate a spec against its structural invariants; throws std::invalid_argument.
inline void validate(const GraphSpec& s) {
    detail::validate_common(s);
    const std::size_t d = s.n.size();

    if (s.kind == GraphSpec::Kind::Toeplitz && d != 1)
        throw std::invalid_argument("toeplitz spec: dimension must be 1");
    if (s.kind != GraphSpec::Kind::Diamond && s.nu != 1)
        throw std::invalid_argument("graph spec: nu > 1 requires a diamond spec");

    if (s.kind == GraphSpec::Kind::Diamond) {
        if (s.nu < 1) throw std::invalid_argument("diamond spec: nu must be >= 1");
        if (s.mold.rows() != s.nu || s.mold.cols() != s.nu)
            throw std::invalid_argument("diamond spec: mold must be nu x nu");
        if (!s.mold.isApprox(s.mold.transpose(), 0.0))
            throw std::invalid_argument("diamond spec: mold must be exactly symmetric");
        for (int i = 0; i < s.nu; ++i)
            if (s.mold(i, i) != 0.0)
                throw std::invalid_argument("diamond spec: mold must have zero diagonal");
    }

    const MultiIndex* prev = nullptr;
    for (const auto& term : s.terms) {
        if (term.t.size() != d) throw std::invalid_argument("graph spec: offset dimension mismatch");
        if (!all_nonnegative(term.t) || is_zero(term.t))
            throw std::invalid_argument("graph spec: offsets must be nonzero and componentwise nonnegative");
        for (std::size_t r = 0; r < d; ++r)
            if (term.t[r] >= s.n[r])
                throw std::invalid_argument("graph spec: offset must be smaller than n in every level");
        if (prev && lex_compare(*prev, term.t) != Ordering::Less)
            throw std::invalid_argument("graph spec: offsets must be strictly increasing (lexicographic)");
        prev = &term.t;

        const std::size_t classes = direction_class_count(term.t);
        if (s.kind == GraphSpec::Kind::Diamond) {
            if (term.links.size() != classes)
                throw std::invalid_argument("diamond spec: need one linking operator per direction class");
            for (const auto& L : term.links) {
                if (L.rows() != s.nu || L.cols() != s.nu)
                    throw std::invalid_argument("diamond spec: linking operators must be nu x nu");
                if (L.isZero(detail::WEIGHT_ZERO_TOL))
                    throw std::invalid_argument("diamond spec: linking operators must be nonzero");
            }
        } else {
            if (term.weights.size() != classes)
                throw std::invalid_argument("graph spec: need one weight per direction class");
            for (double w : term.weights)
                if (w == 0.0) throw std::invalid_argument("graph spec: zero weights are rejected");
        }
    }
}

/// Assemble the symmetric adjacency matrix of a plain (scalar-weight) spec:
/// entry (i, j) carries the class weight whenever i - j lies in that class.
inline SparseSym build_dlevel(const GraphSpec& s) {
    validate(s);
    if (s.kind == GraphSpec::Kind::Diamond)
        throw std::invalid_argument("build_dlevel: got a diamond spec");

    const std::int64_t D = grid_size(s.n);
    std::vector<Eigen::Triplet<double>> trip;
    for (const auto& term : s.terms) {
        const DirectionSet ds = direction_set(term.t);
        for (std::size_t a = 0; a < ds.reps.size(); ++a) {
            const MultiIndex& v = ds.reps[a];
            const double w = term.weights[a];
            // enumerate all nodes j with j + v inside the box
            MultiIndex lo(s.n.size()), hi(s.n.size());
            for (std::size_t r = 0; r < s.n.size(); ++r) {
                lo[r] = std::max<std::int64_t>(1, 1 - v[r]);
                hi[r] = std::min<std::int64_t>(s.n[r], s.n[r] - v[r]);
            }
            MultiIndex j = lo;
            bool more = true;
            for (std::size_t r = 0; r < lo.size(); ++r)
                if (lo[r] > hi[r]) more = false;
            while (more) {
                const std::int64_t row = linearize(add(j, v), s.n);
                const std::int64_t col = linearize(j, s.n);
                trip.emplace_back(static_cast<int>(row), static_cast<int>(col), w);
                trip.emplace_back(static_cast<int>(col), static_cast<int>(row), w);
                // odometer increment over the box [lo, hi]
                std::size_t r = lo.size();
                while (r-- > 0) {
                    if (++j[r] <= hi[r]) break;
                    j[r] = lo[r];
                    if (r == 0) more = false;
                }
            }
        }
    }
    SparseSym W(static_cast<int>(D), static_cast<int>(D));
    W.setFromTriplets(trip.begin(), trip.end());
    W.makeCompressed();
    return W;
}

/// Convenience builder for the 1-level case T_n<(t_1, w_1), ...>.
inline SparseSym build_toeplitz(std::int64_t n, const std::vector<std::pair<std::int64_t, double>>& terms) {
    GraphSpec s;
    s.kind = GraphSpec::Kind::Toeplitz;
    s.n = {n};
    for (const auto& [t, w] : terms) s.terms.push_back({{t}, {w}, {}});
    return build_dlevel(s);
}

/// Assemble the symmetric adjacency matrix of a diamond spec: diagonal blocks
/// carry the mold, the block at block-offset +v carries the linking operator L
/// of that class and the block at -v carries its transpose. Node order is
/// lexicographic in (grid index, within-diamond index).
inline SparseSym build_diamond(const GraphSpec& s) {
    validate(s);
    if (s.kind != GraphSpec::Kind::Diamond)
        throw std::invalid_argument("build_diamond: spec is not a diamond spec");

    const std::int64_t D = grid_size(s.n);
    const int nu = s.nu;
    const std::int64_t dim = D * nu;
    std::vector<Eigen::Triplet<double>> trip;

    for (std::int64_t b = 0; b < D; ++b)
        for (int a = 0; a < nu; ++a)
            for (int c = 0; c < nu; ++c)
                if (s.mold(a, c) != 0.0)
                    trip.emplace_back(static_cast<int>(b * nu + a), static_cast<int>(b * nu + c), s.mold(a, c));

    for (const auto& term : s.terms) {
        const DirectionSet ds = direction_set(term.t);
        for (std::size_t cls = 0; cls < ds.reps.size(); ++cls) {
            const MultiIndex& v = ds.reps[cls];
            const Eigen::MatrixXd& L = term.links[cls];
            MultiIndex lo(s.n.size()), hi(s.n.size());
            for (std::size_t r = 0; r < s.n.size(); ++r) {
                lo[r] = std::max<std::int64_t>(1, 1 - v[r]);
                hi[r] = std::min<std::int64_t>(s.n[r], s.n[r] - v[r]);
            }
            MultiIndex j = lo;
            bool more = true;
            for (std::size_t r = 0; r < lo.size(); ++r)
                if (lo[r] > hi[r]) more = false;
            while (more) {
                const std::int64_t bi = linearize(add(j, v), s.n);  // block row at offset +v
                const std::int64_t bj = linearize(j, s.n);
                for (int a = 0; a < nu; ++a)
                    for (int c = 0; c < nu; ++c)
                        if (L(a, c) != 0.0) {
                            trip.emplace_back(static_cast<int>(bi * nu + a), static_cast<int>(bj * nu + c), L(a, c));
                            trip.emplace_back(static_cast<int>(bj * nu + c), static_cast<int>(bi * nu + a), L(a, c));
                        }
                std::size_t r = lo.size();
                while (r-- > 0) {
                    if (++j[r] <= hi[r]) break;
                    j[r] = lo[r];
                    if (r == 0) more = false;
                }
            }
        }
    }
    SparseSym W(static_cast<int>(dim), static_cast<int>(dim));
    W.setFromTriplets(trip.begin(), trip.end());
    W.makeCompressed();
    return W;
}

/// Assemble any spec's adjacency.
inline SparseSym build_adjacency(const GraphSpec& s) {
    return s.kind == GraphSpec::Kind::Diamond ? build_diamond(s) : build_dlevel(s);
}

/// Graph-Laplacian D + K - W: subgraph degrees plus potential minus adjacency.
inline SparseSym graph_laplacian(const SparseSym& W, const Eigen::VectorXd& kappa) {
    if (W.rows() != W.cols()) throw std::invalid_argument("graph_laplacian: matrix not square");
    if (kappa.size() != W.rows())
        throw std::invalid_argument("graph_laplacian: potential length does not match node count");
    Eigen::VectorXd deg = Eigen::VectorXd::Zero(W.rows());
    for (int k = 0; k < W.outerSize(); ++k)
        for (SparseSym::InnerIterator it(W, k); it; ++it) deg(it.row()) += it.value();
    SparseSym L = -W;
    std::vector<Eigen::Triplet<double>> diag;
    diag.reserve(static_cast<std::size_t>(W.rows()));
    for (int i = 0; i < W.rows(); ++i) diag.emplace_back(i, i, deg(i) + kappa(i));
    SparseSym Dm(W.rows(), W.cols());
    Dm.setFromTriplets(diag.begin(), diag.end());
    L += Dm;
    L.makeCompressed();
    return L;
}

inline SparseSym graph_laplacian(const SparseSym& W) {
    return graph_laplacian(W, Eigen::VectorXd::Zero(W.rows()));
}

/// Node and edge counts of the assembled graph. Edges are counted exactly as
/// the nonzero strictly-upper-triangular entries of the adjacency (loops on
/// off-diagonal blocks of diamond graphs count once like any other edge).
struct NodeEdgeCount {
    std::int64_t nodes = 0;
    std::int64_t edges = 0;
};

inline NodeEdgeCount node_edge_counts(const GraphSpec& s) {
    const SparseSym W = build_adjacency(s);
    NodeEdgeCount c;
    c.nodes = W.rows();
    for (int k = 0; k < W.outerSize(); ++k)
        for (SparseSym::InnerIterator it(W, k); it; ++it)
            if (it.row() < it.col() && it.value() != 0.0) ++c.edges;
    return c;
}

}  // namespace gridspec

#endif  // GRIDSPEC_GRAPH_HPP
