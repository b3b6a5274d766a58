#pragma once
/// Gallery of built-in graph specifications.
///
/// These are the fixture graphs used by the command-line `reproduce` targets and
/// by the regression tests: a quartic-band Toeplitz graph with a non-monotone
/// symbol, an anisotropic two-level graph mixing axis and diagonal couplings,
/// and a four-branch diamond graph whose symbol has well-separated branch
/// intervals plus two spectral outliers.

#include <stdexcept>

#include "graph.hpp"

namespace gridspec::gallery {

/// Toeplitz graph with couplings (1,1), (2,-6), (3,1), (4,1).
/// Symbol 2cos(th) - 12cos(2*th) + 2cos(3*th) + 2cos(4*th); range ~ [-14, 10.95].
inline GraphSpec quartic_toeplitz(int n) {
    if (n < 5) throw std::invalid_argument("quartic_toeplitz: need n >= 5");
    GraphSpec s;
    s.kind = GraphSpec::Kind::Toeplitz;
    s.n = {n};
    s.terms = {GraphTerm{{1}, {1.0}, {}},
               GraphTerm{{2}, {-6.0}, {}},
               GraphTerm{{3}, {1.0}, {}},
               GraphTerm{{4}, {1.0}, {}}};
    return s;
}

/// Two-level graph on an n x n grid with axis couplings (0,1)->2, (1,0)->1,
/// a diagonal class (1,1) with weight -3 on both directions, and a long-range
/// diagonal class (2,2) with weight 1 on both directions.
inline GraphSpec anisotropic_twolevel(int n) {
    if (n < 3) throw std::invalid_argument("anisotropic_twolevel: need n >= 3");
    GraphSpec s;
    s.kind = GraphSpec::Kind::DLevel;
    s.n = {n, n};
    s.terms = {GraphTerm{{0, 1}, {2.0}, {}},
               GraphTerm{{1, 0}, {1.0}, {}},
               GraphTerm{{1, 1}, {-3.0, -3.0}, {}},
               GraphTerm{{2, 2}, {1.0, 1.0}, {}}};
    return s;
}

/// Diamond graph with a 4-node alternating mold and two asymmetric link terms.
/// The symbol has four disjoint branch intervals; the matrices carry exactly two
/// eigenvalue outliers at every size.
inline GraphSpec four_branch_diamond(int n) {
    if (n < 3) throw std::invalid_argument("four_branch_diamond: need n >= 3");
    GraphSpec s;
    s.kind = GraphSpec::Kind::Diamond;
    s.n = {n};
    s.nu = 4;
    s.mold.resize(4, 4);
    s.mold << 0, 1, 0, 1,
              1, 0, 1, 0,
              0, 1, 0, 1,
              1, 0, 1, 0;
    Eigen::MatrixXd L1 = Eigen::MatrixXd::Zero(4, 4);
    L1(0, 0) = -2.0;
    Eigen::MatrixXd L2 = Eigen::MatrixXd::Zero(4, 4);
    L2(2, 2) = 0.5;
    L2(3, 2) = 6.0;
    s.terms = {GraphTerm{{1}, {}, {L1}}, GraphTerm{{2}, {}, {L2}}};
    return s;
}

}  // namespace gridspec::gallery
