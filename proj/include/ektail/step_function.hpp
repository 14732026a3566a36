// Right-continuous piecewise-constant functions on [1, inf).
#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ektail {

// Value is `initial` on [1, xs[0]) and ys[j] on [xs[j], xs[j+1]).
// Jump locations are strictly increasing. Evaluation at a jump returns the
// post-jump value; left_limit gives the pre-jump one.
class StepFunction {
  public:
    StepFunction(double initial, std::vector<double> xs, std::vector<double> ys)
        : initial_(initial), xs_(std::move(xs)), ys_(std::move(ys)) {
        if (xs_.size() != ys_.size())
            throw std::invalid_argument("StepFunction: xs/ys size mismatch");
        for (std::size_t j = 1; j < xs_.size(); ++j)
            if (!(xs_[j] > xs_[j - 1]))
                throw std::invalid_argument("StepFunction: jump locations must be strictly increasing");
    }

    double value(double s) const noexcept {
        // index of last jump location <= s
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), s);
        if (it == xs_.begin()) return initial_;
        return ys_[static_cast<std::size_t>(it - xs_.begin()) - 1];
    }

    double left_limit(double s) const noexcept {
        const auto it = std::lower_bound(xs_.begin(), xs_.end(), s);
        if (it == xs_.begin()) return initial_;
        return ys_[static_cast<std::size_t>(it - xs_.begin()) - 1];
    }

    double initial_value() const noexcept { return initial_; }
    double terminal_value() const noexcept { return ys_.empty() ? initial_ : ys_.back(); }

    std::size_t jump_count() const noexcept { return xs_.size(); }
    double jump_location(std::size_t j) const { return xs_.at(j); }
    double value_after(std::size_t j) const { return ys_.at(j); }
    double value_before(std::size_t j) const { return j == 0 ? initial_ : ys_.at(j - 1); }
    double jump_size(std::size_t j) const { return value_after(j) - value_before(j); }

    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& ys() const noexcept { return ys_; }

  private:
    double initial_;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

}  // namespace ektail
