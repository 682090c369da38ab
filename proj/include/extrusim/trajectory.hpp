#ifndef EXTRUSIM_TRAJECTORY_HPP
#define EXTRUSIM_TRAJECTORY_HPP

#include <cstddef>
#include <vector>

namespace extrusim {

/// Sampled pair (l(t), f_p(t,1)) on strictly increasing time nodes, evaluated
/// by linear interpolation. This is the unknown of the fixed-point iteration;
/// within one solver window the nodes are uniform, the concatenated global
/// trajectory is piecewise uniform.
class InterfaceTrajectory {
public:
    InterfaceTrajectory() = default;
    InterfaceTrajectory(std::vector<double> times, std::vector<double> positions,
                        std::vector<double> fills);

    /// Constant trajectory on [t0, t1] with node_count nodes.
    static InterfaceTrajectory constant(double t0, double t1, std::size_t node_count,
                                        double position, double fill);

    double start_time() const { return times_.front(); }
    double end_time() const { return times_.back(); }
    std::size_t node_count() const { return times_.size(); }

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& positions() const { return positions_; }
    const std::vector<double>& fills() const { return fills_; }

    double position(double t) const;  // l(t)
    double fill(double t) const;      // f_p(t, 1)

    void set_node(std::size_t i, double position, double fill);

    /// Appends another trajectory that starts where this one ends; the shared
    /// node is kept once (this trajectory's copy wins).
    void append(const InterfaceTrajectory& tail);

    /// Max over nodes of max(|l - position|, |fp1 - fill|).
    double sup_distance_to(double position, double fill) const;

    /// Sup-norm distance to another trajectory sampled on the same nodes.
    double sup_distance(const InterfaceTrajectory& other) const;

private:
    std::size_t segment(double t) const;

    std::vector<double> times_;
    std::vector<double> positions_;
    std::vector<double> fills_;
};

}  // namespace extrusim

#endif
