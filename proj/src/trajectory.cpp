#include "extrusim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace extrusim {

InterfaceTrajectory::InterfaceTrajectory(std::vector<double> times,
                                         std::vector<double> positions,
                                         std::vector<double> fills)
    : times_(std::move(times)), positions_(std::move(positions)), fills_(std::move(fills)) {
    if (times_.empty() || positions_.size() != times_.size() ||
        fills_.size() != times_.size()) {
        throw std::invalid_argument("InterfaceTrajectory: inconsistent node arrays");
    }
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        if (!(times_[i] < times_[i + 1])) {
            throw std::invalid_argument("InterfaceTrajectory: nodes must strictly increase");
        }
    }
}

InterfaceTrajectory InterfaceTrajectory::constant(double t0, double t1,
                                                  std::size_t node_count, double position,
                                                  double fill) {
    if (node_count < 2 || !(t1 > t0)) {
        throw std::invalid_argument("InterfaceTrajectory::constant: bad window");
    }
    std::vector<double> times(node_count);
    const double h = (t1 - t0) / static_cast<double>(node_count - 1);
    for (std::size_t k = 0; k < node_count; ++k) {
        times[k] = t0 + h * static_cast<double>(k);
    }
    times.back() = t1;
    return InterfaceTrajectory(std::move(times),
                               std::vector<double>(node_count, position),
                               std::vector<double>(node_count, fill));
}

std::size_t InterfaceTrajectory::segment(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
    return std::min(i, times_.size() - 2);
}

double InterfaceTrajectory::position(double t) const {
    if (times_.size() == 1 || t <= times_.front()) return positions_.front();
    if (t >= times_.back()) return positions_.back();
    const std::size_t i = segment(t);
    const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
    return positions_[i] + w * (positions_[i + 1] - positions_[i]);
}

double InterfaceTrajectory::fill(double t) const {
    if (times_.size() == 1 || t <= times_.front()) return fills_.front();
    if (t >= times_.back()) return fills_.back();
    const std::size_t i = segment(t);
    const double w = (t - times_[i]) / (times_[i + 1] - times_[i]);
    return fills_[i] + w * (fills_[i + 1] - fills_[i]);
}

void InterfaceTrajectory::set_node(std::size_t i, double position, double fill) {
    positions_.at(i) = position;
    fills_.at(i) = fill;
}

void InterfaceTrajectory::append(const InterfaceTrajectory& tail) {
    if (times_.empty()) {
        *this = tail;
        return;
    }
    if (std::abs(tail.start_time() - end_time()) > 1e-12 * std::max(1.0, end_time())) {
        throw std::invalid_argument("InterfaceTrajectory::append: windows do not abut");
    }
    for (std::size_t k = 1; k < tail.times_.size(); ++k) {
        times_.push_back(tail.times_[k]);
        positions_.push_back(tail.positions_[k]);
        fills_.push_back(tail.fills_[k]);
    }
}

double InterfaceTrajectory::sup_distance_to(double position, double fill) const {
    double d = 0.0;
    for (std::size_t k = 0; k < times_.size(); ++k) {
        d = std::max(d, std::abs(positions_[k] - position));
        d = std::max(d, std::abs(fills_[k] - fill));
    }
    return d;
}

double InterfaceTrajectory::sup_distance(const InterfaceTrajectory& other) const {
    if (other.node_count() != node_count()) {
        throw std::invalid_argument("sup_distance: node counts differ");
    }
    double d = 0.0;
    for (std::size_t k = 0; k < times_.size(); ++k) {
        d = std::max(d, std::abs(positions_[k] - other.positions_[k]));
        d = std::max(d, std::abs(fills_[k] - other.fills_[k]));
    }
    return d;
}

}  // namespace extrusim
