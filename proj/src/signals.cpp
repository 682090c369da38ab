#include "extrusim/signals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace extrusim {

namespace {

void check_strictly_increasing(const std::vector<double>& ts, const char* what) {
    if (ts.empty()) {
        throw std::invalid_argument(std::string(what) + ": needs at least one breakpoint");
    }
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (!(ts[i] < ts[i + 1])) {
            throw std::invalid_argument(std::string(what) +
                                        ": breakpoints must be strictly increasing");
        }
    }
    for (double t : ts) {
        if (!std::isfinite(t)) {
            throw std::invalid_argument(std::string(what) + ": non-finite breakpoint");
        }
    }
}

// Index of the segment [times[i], times[i+1]) containing t, clamped to valid
// segments. Assumes at least two breakpoints.
std::size_t segment_index(const std::vector<double>& times, double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - times.begin()) - 1;
    return std::min(i, times.size() - 2);
}

}  // namespace

PiecewiseLinearSignal::PiecewiseLinearSignal(std::vector<double> times,
                                             std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    check_strictly_increasing(times_, "PiecewiseLinearSignal");
    if (values_.size() != times_.size()) {
        throw std::invalid_argument("PiecewiseLinearSignal: times/values size mismatch");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("PiecewiseLinearSignal: non-finite value");
        }
    }
}

double PiecewiseLinearSignal::operator()(double t) const {
    if (times_.size() == 1 || t <= times_.front()) return values_.front();
    if (t >= times_.back()) return values_.back();
    const std::size_t i = segment_index(times_, t);
    const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

double PiecewiseLinearSignal::slope(double t) const {
    if (times_.size() == 1) return 0.0;
    if (t < times_.front() || t > times_.back()) return 0.0;
    // Left-slope convention at interior breakpoints; the first breakpoint has
    // no left segment, so it takes the first segment's slope.
    std::size_t i;
    if (t <= times_.front()) {
        i = 0;
    } else {
        auto it = std::lower_bound(times_.begin(), times_.end(), t);
        if (it != times_.end() && *it == t) {
            i = static_cast<std::size_t>(it - times_.begin());
            i = (i == 0) ? 0 : i - 1;
        } else {
            i = segment_index(times_, t);
        }
    }
    return (values_[i + 1] - values_[i]) / (times_[i + 1] - times_[i]);
}

double PiecewiseLinearSignal::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double PiecewiseLinearSignal::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

BilinearTable::BilinearTable(std::vector<double> times, std::vector<double> positions,
                             std::vector<double> values)
    : times_(std::move(times)), positions_(std::move(positions)), values_(std::move(values)) {
    check_strictly_increasing(times_, "BilinearTable times");
    check_strictly_increasing(positions_, "BilinearTable positions");
    if (values_.size() != times_.size() * positions_.size()) {
        throw std::invalid_argument("BilinearTable: values size must be times*positions");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("BilinearTable: non-finite value");
    }
}

double BilinearTable::operator()(double t, double x) const {
    const std::size_t nx = positions_.size();
    auto clamped_weight = [](const std::vector<double>& grid, double p, std::size_t& i) {
        if (grid.size() == 1 || p <= grid.front()) {
            i = 0;
            return 0.0;
        }
        if (p >= grid.back()) {
            i = grid.size() - 2;
            return 1.0;
        }
        i = segment_index(grid, p);
        return (p - grid[i]) / (grid[i + 1] - grid[i]);
    };
    std::size_t i = 0, j = 0;
    const double wt = clamped_weight(times_, t, i);
    const double wx = clamped_weight(positions_, x, j);
    const std::size_t i1 = (times_.size() == 1) ? 0 : i + 1;
    const std::size_t j1 = (nx == 1) ? 0 : j + 1;
    const double v00 = values_[i * nx + j];
    const double v01 = values_[i * nx + j1];
    const double v10 = values_[i1 * nx + j];
    const double v11 = values_[i1 * nx + j1];
    return (1.0 - wt) * ((1.0 - wx) * v00 + wx * v01) + wt * ((1.0 - wx) * v10 + wx * v11);
}

double BilinearTable::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double BilinearTable::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

}  // namespace extrusim
