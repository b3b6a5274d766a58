#ifndef GRIDSPEC_MULTIINDEX_HPP
#define GRIDSPEC_MULTIINDEX_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridspec {

/// A d-dimensional integer multi-index. Dimension is runtime data so one
/// binary serves every experiment; arithmetic is only defined between
/// indices of equal dimension.
using MultiIndex = std::vector<std::int64_t>;

/// Three-way result of a lexicographic comparison.
enum class Ordering { Less, Equal, Greater };

inline void require_same_dim(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("multi-index dimension mismatch: " +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
}

/// Lexicographic comparison with the first coordinate most significant.
inline Ordering lex_compare(const MultiIndex& a, const MultiIndex& b) {
    require_same_dim(a, b);
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (a[r] < b[r]) return Ordering::Less;
        if (a[r] > b[r]) return Ordering::Greater;
    }
    return Ordering::Equal;
}

inline bool lex_less(const MultiIndex& a, const MultiIndex& b) {
    return lex_compare(a, b) == Ordering::Less;
}

/// Componentwise comparisons (partial order).
inline bool all_positive(const MultiIndex& a) {
    return std::all_of(a.begin(), a.end(), [](std::int64_t v) { return v > 0; });
}

inline bool all_nonnegative(const MultiIndex& a) {
    return std::all_of(a.begin(), a.end(), [](std::int64_t v) { return v >= 0; });
}

inline bool is_zero(const MultiIndex& a) {
    return std::all_of(a.begin(), a.end(), [](std::int64_t v) { return v == 0; });
}

inline MultiIndex abs(const MultiIndex& a) {
    MultiIndex r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] < 0 ? -a[i] : a[i];
    return r;
}

inline MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
    require_same_dim(a, b);
    MultiIndex r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline MultiIndex sub(const MultiIndex& a, const MultiIndex& b) {
    require_same_dim(a, b);
    MultiIndex r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline MultiIndex negate(const MultiIndex& a) {
    MultiIndex r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

/// Number of nodes of the box {1..n_1} x ... x {1..n_d}.
inline std::int64_t grid_size(const MultiIndex& n) {
    if (!all_positive(n)) throw std::invalid_argument("grid_size: n must be positive");
    std::int64_t p = 1;
    for (std::int64_t v : n) p *= v;
    return p;
}

/// The set of directions associated with a nonnegative offset t:
/// all sign patterns {+-t_1} x ... x {+-t_d} quotiented by v ~ -v.
/// Each class is stored through its representative, normalized so that the
/// first nonzero component is positive.
struct DirectionSet {
    MultiIndex base;                     ///< the defining offset t (componentwise >= 0)
    std::vector<MultiIndex> reps;        ///< one representative per class, lex-sorted
};

/// Number of classes for an offset t: 2^(#nonzero components) / 2.
inline std::size_t direction_class_count(const MultiIndex& t) {
    std::size_t nnz = 0;
    for (std::int64_t v : t)
        if (v != 0) ++nnz;
    return nnz == 0 ? 0 : (std::size_t{1} << (nnz - 1));
}

inline DirectionSet direction_set(const MultiIndex& t) {
    if (!all_nonnegative(t))
        throw std::invalid_argument("direction_set: offset must be componentwise nonnegative");
    if (is_zero(t)) throw std::invalid_argument("direction_set: zero offset has no direction");

    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] != 0) nz.push_back(i);

    DirectionSet ds;
    ds.base = t;
    const std::size_t patterns = std::size_t{1} << nz.size();
    for (std::size_t mask = 0; mask < patterns; ++mask) {
        MultiIndex v = t;
        for (std::size_t b = 0; b < nz.size(); ++b)
            if (mask & (std::size_t{1} << b)) v[nz[b]] = -v[nz[b]];
        // canonical representative of {v, -v}: positive first nonzero component
        for (std::int64_t c : v) {
            if (c > 0) break;
            if (c < 0) {
                v = negate(v);
                break;
            }
        }
        if (std::find(ds.reps.begin(), ds.reps.end(), v) == ds.reps.end())
            ds.reps.push_back(v);
    }
    std::sort(ds.reps.begin(), ds.reps.end(), lex_less);
    return ds;
}

/// Bijection between the box {1..n_1} x ... x {1..n_d} and {0..D(n)-1},
/// lexicographic with the first coordinate most significant.
inline std::int64_t linearize(const MultiIndex& j, const MultiIndex& n) {
    require_same_dim(j, n);
    std::int64_t idx = 0;
    for (std::size_t r = 0; r < n.size(); ++r) {
        if (j[r] < 1 || j[r] > n[r])
            throw std::out_of_range("linearize: index outside the box");
        idx = idx * n[r] + (j[r] - 1);
    }
    return idx;
}

inline MultiIndex delinearize(std::int64_t idx, const MultiIndex& n) {
    MultiIndex j(n.size());
    for (std::size_t r = n.size(); r-- > 0;) {
        j[r] = idx % n[r] + 1;
        idx /= n[r];
    }
    if (idx != 0) throw std::out_of_range("delinearize: index outside the box");
    return j;
}

}  // namespace gridspec

#endif  // GRIDSPEC_MULTIINDEX_HPP
