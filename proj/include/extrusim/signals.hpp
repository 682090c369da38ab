#ifndef EXTRUSIM_SIGNALS_HPP
#define EXTRUSIM_SIGNALS_HPP

#include <cstddef>
#include <vector>

namespace extrusim {

/// Piecewise-linear signal defined by breakpoints, extended by constants
/// outside the breakpoint range. Stands in for W^{1,inf} time data: values
/// and one-sided slopes are both deterministic queries.
class PiecewiseLinearSignal {
public:
    PiecewiseLinearSignal() = default;

    /// Breakpoint times must be strictly increasing; sizes must match.
    PiecewiseLinearSignal(std::vector<double> times, std::vector<double> values);

    double operator()(double t) const;

    /// One-sided slope. At a breakpoint returns the slope of the segment to
    /// its left (left-slope convention); at the first breakpoint the slope of
    /// the first segment. Zero in the constant-extension regions.
    double slope(double t) const;

    double min_value() const;
    double max_value() const;
    double front_time() const { return times_.front(); }
    double back_time() const { return times_.back(); }
    std::size_t size() const { return times_.size(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Bilinear interpolation table over (t, x), clamped outside the grid.
/// Used for the distributed barrel temperature in normalized coordinates;
/// each zone evaluates it at its own normalized position.
class BilinearTable {
public:
    BilinearTable() = default;

    /// values are row-major: values[i * positions.size() + j] = v(times[i], positions[j]).
    BilinearTable(std::vector<double> times, std::vector<double> positions,
                  std::vector<double> values);

    double operator()(double t, double x) const;

    double min_value() const;
    double max_value() const;
    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& positions() const { return positions_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> times_;
    std::vector<double> positions_;
    std::vector<double> values_;
};

/// Operating data of a run: screw speed, feed rate, inlet moisture and
/// temperature, and the barrel temperature field.
struct OperatingSignals {
    PiecewiseLinearSignal speed;              // N(t), strictly positive
    PiecewiseLinearSignal feed_rate;          // F_in(t), positive
    PiecewiseLinearSignal inlet_moisture;     // M_in(t)
    PiecewiseLinearSignal inlet_temperature;  // T_in(t)
    BilinearTable barrel_temperature;         // T_b(t, x)
};

}  // namespace extrusim

#endif
