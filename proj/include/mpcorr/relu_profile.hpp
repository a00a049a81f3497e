#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

namespace mpcorr {

/// Piecewise-linear profile S(z) = sum_k w_k * max(0, a_k - z) with w_k >= 0.
///
/// Pre-sorts the breakpoints once so that both evaluation and inversion cost
/// O(log K). This is the hot kernel behind relu MP solves and the relu branch
/// currents in the transient integrators.
class ReluProfile {
  public:
    ReluProfile() = default;

    explicit ReluProfile(std::vector<double> breakpoints)
        : ReluProfile(std::move(breakpoints), {}) {}

    /// weights may be empty (all ones) or match breakpoints in size.
    ReluProfile(std::vector<double> breakpoints, std::vector<double> weights) {
        const std::size_t k = breakpoints.size();
        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            return breakpoints[i] > breakpoints[j];
        });
        a_.resize(k);
        wsum_.resize(k + 1);
        wasum_.resize(k + 1);
        wsum_[0] = 0.0;
        wasum_[0] = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double a = breakpoints[order[i]];
            double w = weights.empty() ? 1.0 : weights[order[i]];
            a_[i] = a;
            wsum_[i + 1] = wsum_[i] + w;
            wasum_[i + 1] = wasum_[i] + w * a;
        }
    }

    std::size_t size() const { return a_.size(); }

    /// Largest breakpoint; S(z) == 0 for z >= threshold().
    double threshold() const { return a_.empty() ? 0.0 : a_.front(); }

    double smallest() const { return a_.empty() ? 0.0 : a_.back(); }

    /// S(z), evaluated from the prefix sums of the active segment.
    double total(double z) const {
        std::size_t m = active_count(z);
        return wasum_[m] - wsum_[m] * z;
    }

    /// Slope magnitude sum_{a_k > z} w_k (S'(z) = -active_weight(z)).
    double active_weight(double z) const { return wsum_[active_count(z)]; }

    /// Solves S(z) = target for the unique z when target > 0. For target <= 0
    /// returns threshold(), the smallest z with S(z) = 0.
    double solve_total(double target) const {
        if (a_.empty() || !(target > 0.0)) return threshold();
        // Binary search for the segment: S(a_[m-1]) <= target along descending a.
        std::size_t lo = 1, hi = a_.size();
        if (total(a_.back()) < target) {
            // Below the smallest breakpoint the profile is a single line.
            std::size_t m = a_.size();
            return (wasum_[m] - target) / wsum_[m];
        }
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (total(a_[mid]) >= target)
                hi = mid;
            else
                lo = mid + 1;
        }
        // Root lies in [a_[lo], a_[lo-1]] where exactly lo breakpoints are active.
        return (wasum_[lo] - target) / wsum_[lo];
    }

  private:
    /// Number of breakpoints strictly above z (a_ is descending).
    std::size_t active_count(double z) const {
        return static_cast<std::size_t>(
            std::lower_bound(a_.begin(), a_.end(), z,
                             [](double elem, double value) { return elem > value; }) -
            a_.begin());
    }

    std::vector<double> a_;      // breakpoints, descending
    std::vector<double> wsum_;   // prefix weight sums
    std::vector<double> wasum_;  // prefix weighted breakpoint sums
};

}  // namespace mpcorr
