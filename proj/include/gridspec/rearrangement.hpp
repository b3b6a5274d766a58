#ifndef GRIDSPEC_REARRANGEMENT_HPP
#define GRIDSPEC_REARRANGEMENT_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gridspec/sampling.hpp"

namespace gridspec {

/// Monotone rearrangement of a sample cloud: the ascending sorted samples
/// s_1 <= ... <= s_N viewed as the piecewise-linear function through the
/// points (i/N, s_i), constant at s_1 left of 1/N.
class Rearrangement {
  public:
    explicit Rearrangement(std::vector<double> samples) : s_(std::move(samples)) {
        if (s_.empty()) throw std::invalid_argument("rearrangement: empty sample cloud");
        std::sort(s_.begin(), s_.end());
        if (!std::isfinite(s_.front()) || !std::isfinite(s_.back()))
            throw std::invalid_argument("rearrangement: samples must be finite");
    }

    static Rearrangement of(const SampleCloud& cloud) { return Rearrangement(cloud.values); }

    std::size_t sample_count() const { return s_.size(); }
    const std::vector<double>& sorted() const { return s_; }
    double min() const { return s_.front(); }
    double max() const { return s_.back(); }

    /// g~(x) for x in [0, 1]: linear interpolation of (i/N, s_i).
    double quantile(double x) const {
        if (x < 0.0 || x > 1.0) throw std::invalid_argument("quantile: x must lie in [0,1]");
        const double N = static_cast<double>(s_.size());
        const double t = x * N;
        if (t <= 1.0) return s_.front();
        const auto i = static_cast<std::size_t>(t);  // floor; 1-based sample index
        if (i >= s_.size()) return s_.back();
        const double frac = t - static_cast<double>(i);
        return s_[i - 1] + frac * (s_[i] - s_[i - 1]);
    }

    /// Empirical sublevel measure phi(t) = #{samples <= t} / N.
    double phi(double t) const {
        const auto ub = std::upper_bound(s_.begin(), s_.end(), t);
        return static_cast<double>(ub - s_.begin()) / static_cast<double>(s_.size());
    }

    /// Backward difference N (g~(x) - g~(x - 1/N)); requires x - 1/N >= 0.
    double derivative_at(double x) const {
        const double N = static_cast<double>(s_.size());
        if (x - 1.0 / N < 0.0)
            throw std::invalid_argument("derivative_at: x - 1/N must be nonnegative");
        return N * (quantile(x) - quantile(x - 1.0 / N));
    }

  private:
    std::vector<double> s_;
};

}  // namespace gridspec

#endif  // GRIDSPEC_REARRANGEMENT_HPP
