#ifndef EXTRUSIM_PROFILE_HPP
#define EXTRUSIM_PROFILE_HPP

#include <cstddef>
#include <vector>

namespace extrusim {

/// Profile sampled on a uniform grid over [0, 1] with nodal derivative
/// access. Values interpolate linearly; nodal slopes either come with the
/// data (exact chain-rule values for reseeded window profiles) or fall back
/// to centered differences of the values.
class SampledProfile {
public:
    SampledProfile() = default;

    /// Uniform grid; slopes optional (empty -> finite differences).
    explicit SampledProfile(std::vector<double> values,
                            std::vector<double> slopes = {});

    std::size_t node_count() const { return values_.size(); }
    double spacing() const { return spacing_; }
    double node(std::size_t i) const { return spacing_ * static_cast<double>(i); }

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& slopes() const { return slopes_; }

    double value(double x) const;
    double slope(double x) const;

    /// Centered second differences of the nodal slopes.
    double curvature(double x) const;

    double min_value() const;
    double max_value() const;

    /// sup |v - center| + sup |v'| over nodes (discrete W^{1,inf} deviation).
    double w1inf_distance_to(double center) const;

private:
    double interp(const std::vector<double>& a, double x) const;

    std::vector<double> values_;
    std::vector<double> slopes_;
    std::vector<double> curvatures_;
    double spacing_ = 0.0;
};

/// Initial data of one solver window: start time, interface position, and
/// the filling-ratio profile on the normalized grid. The first window holds
/// the scenario data; later windows are reseeded from the end-of-window
/// reconstruction.
struct WindowState {
    double start_time = 0.0;
    double interface_position = 0.0;  // l at the window start
    SampledProfile fill_profile;      // f_p at the window start
};

}  // namespace extrusim

#endif
