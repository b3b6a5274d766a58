#ifndef GRIDSPEC_SYMBOL_HPP
#define GRIDSPEC_SYMBOL_HPP

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "gridspec/graph.hpp"
#include "gridspec/multiindex.hpp"

namespace gridspec {

namespace detail {
struct LexLessCmp {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const { return lex_less(a, b); }
};
/// Tolerance below which an evaluated symbol must agree with its adjoint.
constexpr double HERMITIAN_TOL = 1e-12;
}  // namespace detail

/// A matrix-valued trigonometric polynomial f(theta) = sum_k C_k e^{i k.theta}
/// stored coefficient-side (offsets plus nu x nu complex matrices) so that
/// Fourier round-trips and serialization are exact. The coefficient map is
/// kept closed under conjugate transposition: C_{-k} = C_k^H.
class TrigSymbol {
  public:
    TrigSymbol(std::size_t d, int nu) : d_(d), nu_(nu) {
        if (d < 1 || nu < 1) throw std::invalid_argument("symbol: need d >= 1 and nu >= 1");
    }

    std::size_t dims() const { return d_; }
    int block_size() const { return nu_; }

    /// Add C at offset k and C^H at -k (a zero offset must be Hermitian).
    void add_pair(const MultiIndex& k, const Eigen::MatrixXcd& C) {
        if (k.size() != d_) throw std::invalid_argument("symbol: offset dimension mismatch");
        if (C.rows() != nu_ || C.cols() != nu_)
            throw std::invalid_argument("symbol: coefficient must be nu x nu");
        if (is_zero(k)) {
            if ((C - C.adjoint()).cwiseAbs().maxCoeff() > detail::HERMITIAN_TOL)
                throw std::invalid_argument("symbol: zero-offset coefficient must be Hermitian");
            accumulate(k, C);
        } else {
            accumulate(k, C);
            accumulate(negate(k), C.adjoint());
        }
    }

    const std::map<MultiIndex, Eigen::MatrixXcd, detail::LexLessCmp>& coeffs() const { return coeffs_; }

    /// Pointwise evaluation: Hermitian nu x nu matrix at theta in [-pi, pi]^d.
    Eigen::MatrixXcd eval(const Eigen::VectorXd& theta) const {
        if (static_cast<std::size_t>(theta.size()) != d_)
            throw std::invalid_argument("symbol eval: theta dimension mismatch");
        Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(nu_, nu_);
        for (const auto& [k, C] : coeffs_) {
            double phase = 0.0;
            for (std::size_t r = 0; r < d_; ++r) phase += static_cast<double>(k[r]) * theta(r);
            f += C * std::polar(1.0, phase);
        }
        if ((f - f.adjoint()).cwiseAbs().maxCoeff() > detail::HERMITIAN_TOL)
            throw std::runtime_error("symbol eval: evaluation drifted from Hermitian — inconsistent coefficients");
        return 0.5 * (f + Eigen::MatrixXcd(f.adjoint()));
    }

    /// Scalar convenience for nu = 1 symbols.
    double eval_scalar(const Eigen::VectorXd& theta) const {
        if (nu_ != 1) throw std::invalid_argument("symbol: eval_scalar needs nu = 1");
        return eval(theta)(0, 0).real();
    }

  private:
    void accumulate(const MultiIndex& k, const Eigen::MatrixXcd& C) {
        auto it = coeffs_.find(k);
        if (it == coeffs_.end())
            coeffs_.emplace(k, C);
        else
            it->second += C;
    }

    std::size_t d_;
    int nu_;
    std::map<MultiIndex, Eigen::MatrixXcd, detail::LexLessCmp> coeffs_;
};

/// Eigenvalues of a small complex Hermitian matrix, ascending. Implemented via
/// the 2nu x 2nu real symmetric embedding [[Re, -Im], [Im, Re]] whose spectrum
/// is the Hermitian spectrum doubled; the doubles are deduplicated pairwise.
inline Eigen::VectorXd hermitian_eigs_small(const Eigen::MatrixXcd& H) {
    const int nu = static_cast<int>(H.rows());
    if (H.cols() != nu) throw std::invalid_argument("hermitian_eigs_small: matrix not square");
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("hermitian_eigs_small: matrix not Hermitian");
    Eigen::MatrixXd E(2 * nu, 2 * nu);
    E.topLeftCorner(nu, nu) = H.real();
    E.topRightCorner(nu, nu) = -H.imag();
    E.bottomLeftCorner(nu, nu) = H.imag();
    E.bottomRightCorner(nu, nu) = H.real();
    E = 0.5 * (E + E.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(E, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigs_small: eigensolver did not converge");
    Eigen::VectorXd out(nu);
    for (int i = 0; i < nu; ++i) out(i) = es.eigenvalues()(2 * i);  // pairs are adjacent after sorting
    return out;
}

/// Sorted eigenvalue branches of the symbol at theta (the scalar value itself
/// when nu = 1).
inline Eigen::VectorXd eig_symbol(const TrigSymbol& sym, const Eigen::VectorXd& theta) {
    if (sym.block_size() == 1) {
        Eigen::VectorXd v(1);
        v(0) = sym.eval_scalar(theta);
        return v;
    }
    return hermitian_eigs_small(sym.eval(theta));
}

/// Symbol of a 1-level Toeplitz graph: f(theta) = sum_k 2 w_k cos(t_k theta).
inline TrigSymbol symbol_of_toeplitz(const GraphSpec& s) {
    validate(s);
    if (s.kind != GraphSpec::Kind::Toeplitz)
        throw std::invalid_argument("symbol_of_toeplitz: spec kind mismatch");
    TrigSymbol f(1, 1);
    for (const auto& term : s.terms) {
        Eigen::MatrixXcd C(1, 1);
        C(0, 0) = term.weights[0];
        f.add_pair(term.t, C);
    }
    return f;
}

/// Symbol of a d-level Toeplitz graph:
/// f(theta) = sum_k sum_alpha 2 w_alpha cos(v_alpha . theta).
inline TrigSymbol symbol_of_dlevel(const GraphSpec& s) {
    validate(s);
    if (s.kind == GraphSpec::Kind::Diamond)
        throw std::invalid_argument("symbol_of_dlevel: got a diamond spec");
    TrigSymbol f(s.n.size(), 1);
    for (const auto& term : s.terms) {
        const DirectionSet ds = direction_set(term.t);
        for (std::size_t a = 0; a < ds.reps.size(); ++a) {
            Eigen::MatrixXcd C(1, 1);
            C(0, 0) = term.weights[a];
            f.add_pair(ds.reps[a], C);
        }
    }
    return f;
}

/// Symbol of a diamond Toeplitz graph:
/// f(theta) = W + sum_k sum_alpha [ (L + L^T) cos(v_alpha . theta)
///                                 + i (L - L^T) sin(v_alpha . theta) ],
/// realized coefficient-side as C_{+v} = L, C_{-v} = L^T.
inline TrigSymbol symbol_of_diamond(const GraphSpec& s) {
    validate(s);
    if (s.kind != GraphSpec::Kind::Diamond)
        throw std::invalid_argument("symbol_of_diamond: spec kind mismatch");
    TrigSymbol f(s.n.size(), s.nu);
    f.add_pair(MultiIndex(s.n.size(), 0), s.mold.cast<std::complex<double>>());
    for (const auto& term : s.terms) {
        const DirectionSet ds = direction_set(term.t);
        for (std::size_t a = 0; a < ds.reps.size(); ++a)
            f.add_pair(ds.reps[a], term.links[a].cast<std::complex<double>>());
    }
    return f;
}

/// Symbol attached to any spec.
inline TrigSymbol symbol_of(const GraphSpec& s) {
    switch (s.kind) {
        case GraphSpec::Kind::Toeplitz: return symbol_of_toeplitz(s);
        case GraphSpec::Kind::DLevel: return symbol_of_dlevel(s);
        case GraphSpec::Kind::Diamond: return symbol_of_diamond(s);
    }
    throw std::logic_error("symbol_of: unreachable");
}

/// Scalar field on [0,1]^d.
using ScalarField = std::function<double(const Eigen::VectorXd&)>;

/// A spatially weighted symbol g(x, theta) = p(x) f(theta), optionally wrapped
/// as p(x) (c I - f(theta)) for graph-Laplacian sequences.
struct WeightedSymbol {
    TrigSymbol frequency{1, 1};
    ScalarField spatial;          ///< p; identity weight when empty
    bool affine = false;          ///< when true evaluate p(x)(c I - f(theta))
    double c = 0.0;

    /// Sorted branch values at one (x, theta) pair.
    Eigen::VectorXd branches(const Eigen::VectorXd& x, const Eigen::VectorXd& theta) const {
        Eigen::VectorXd lam = eig_symbol(frequency, theta);
        if (affine) {
            lam = (c - lam.array()).matrix();
            std::reverse(lam.data(), lam.data() + lam.size());  // keep ascending order
        }
        const double p = spatial ? spatial(x) : 1.0;
        lam *= p;
        if (p < 0.0) std::reverse(lam.data(), lam.data() + lam.size());
        return lam;
    }
};

/// Wrap a frequency symbol as the graph-Laplacian symbol p(x)(c I - f(theta)).
inline WeightedSymbol laplacian_symbol(const TrigSymbol& f, double c, ScalarField p) {
    WeightedSymbol w{f, std::move(p), true, c};
    return w;
}

}  // namespace gridspec

#endif  // GRIDSPEC_SYMBOL_HPP
