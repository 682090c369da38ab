#include "extrusim/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace extrusim {

namespace {

constexpr int kBisectionMaxIter = 50;
constexpr double kBisectionRelTol = 1e-12;

double drift_over_position(const InterfaceTrajectory& traj,
                           const OperatingSignals& signals, const PhysicalParams& params,
                           double s) {
    const double l = traj.position(s);
    const double fp1 = traj.fill(s);
    return interface_velocity(params, l, signals.speed(s), fp1) / l;
}

// Step targets between t_hi and t_lo (descending), aligned with trajectory
// nodes so RK4 only sees smooth velocity within each step; each micro
// interval is split into `substeps` equal parts.
std::vector<double> step_targets_down(const InterfaceTrajectory& traj, double t_hi,
                                      double t_lo, int substeps) {
    std::vector<double> out;
    out.push_back(t_hi);
    const auto& nodes = traj.times();
    auto hi_it = std::lower_bound(nodes.begin(), nodes.end(), t_hi);
    std::vector<double> bounds;  // node times strictly inside (t_lo, t_hi)
    for (auto it = hi_it; it != nodes.begin();) {
        --it;
        if (*it <= t_lo) break;
        if (*it < t_hi) bounds.push_back(*it);
    }
    bounds.push_back(t_lo);
    double prev = t_hi;
    for (double b : bounds) {
        for (int k = 1; k <= substeps; ++k) {
            out.push_back(prev + (b - prev) * static_cast<double>(k) /
                                     static_cast<double>(substeps));
        }
        prev = b;
    }
    return out;
}

std::vector<double> step_targets_up(const InterfaceTrajectory& traj, double t_lo,
                                    double t_hi, int substeps) {
    std::vector<double> out;
    out.push_back(t_lo);
    const auto& nodes = traj.times();
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t_lo);
    std::vector<double> bounds;
    for (; it != nodes.end() && *it < t_hi; ++it) bounds.push_back(*it);
    bounds.push_back(t_hi);
    double prev = t_lo;
    for (double b : bounds) {
        for (int k = 1; k <= substeps; ++k) {
            out.push_back(prev + (b - prev) * static_cast<double>(k) /
                                     static_cast<double>(substeps));
        }
        prev = b;
    }
    return out;
}

// Both zone velocities are affine in xi: alpha(xi, s) = A(s) + B(s) xi.
// Evaluating the coefficients once per stage time makes RK4 steps cheap.
struct AffineVelocity {
    double offset;  // A
    double gain;    // B
    double operator()(double xi) const { return offset + gain * xi; }
};

AffineVelocity affine_velocity(Zone zone, const InterfaceTrajectory& traj,
                               const OperatingSignals& signals,
                               const PhysicalParams& params, double s) {
    const double l = traj.position(s);
    const double speed = signals.speed(s);
    const double drift = interface_velocity(params, l, speed, traj.fill(s));
    if (zone == Zone::pfz) {
        return {params.pitch * speed / l, -drift / l};
    }
    const double gap = params.length - l;
    const double flow = net_flow_rate(params, l, speed);
    return {(params.pitch * flow / (params.density * params.effective_volume) - drift) /
                gap,
            drift / gap};
}

double rk4_step(Zone zone, const InterfaceTrajectory& traj,
                const OperatingSignals& signals, const PhysicalParams& params, double s,
                double xi, double ds) {
    const auto f1 = affine_velocity(zone, traj, signals, params, s);
    const auto f2 = affine_velocity(zone, traj, signals, params, s + 0.5 * ds);
    const auto f3 = affine_velocity(zone, traj, signals, params, s + ds);
    const double k1 = f1(xi);
    const double k2 = f2(xi + 0.5 * ds * k1);
    const double k3 = f2(xi + 0.5 * ds * k2);
    const double k4 = f3(xi + ds * k3);
    return xi + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

double zone_velocity(Zone zone, const InterfaceTrajectory& traj,
                     const OperatingSignals& signals, const PhysicalParams& params,
                     double s, double xi) {
    const double l = traj.position(s);
    const double speed = signals.speed(s);
    const double fp1 = traj.fill(s);
    const double drift = interface_velocity(params, l, speed, fp1);
    if (zone == Zone::pfz) {
        return (params.pitch * speed - xi * drift) / l;
    }
    const double flow = net_flow_rate(params, l, speed);
    return (params.pitch * flow / (params.density * params.effective_volume) +
            (xi - 1.0) * drift) /
           (params.length - l);
}

double flow_integral(const InterfaceTrajectory& traj, const OperatingSignals& signals,
                     const PhysicalParams& params, double s, double t) {
    if (s > t) return -flow_integral(traj, signals, params, t, s);
    if (s == t) return 0.0;
    const auto pts = step_targets_up(traj, s, t, 1);
    double acc = 0.0;
    double prev_t = pts.front();
    double prev_v = drift_over_position(traj, signals, params, prev_t);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double cur_t = pts[i];
        const double cur_v = drift_over_position(traj, signals, params, cur_t);
        acc += 0.5 * (prev_v + cur_v) * (cur_t - prev_t);
        prev_t = cur_t;
        prev_v = cur_v;
    }
    return acc;
}

double xi_at_unit_start(const InterfaceTrajectory& traj, const OperatingSignals& signals,
                        const PhysicalParams& params, double s, double t) {
    if (s > t) {
        throw std::invalid_argument("xi_at_unit_start: requires s <= t");
    }
    if (t > traj.end_time() + 1e-12 || s < traj.start_time() - 1e-12) {
        throw std::invalid_argument("xi_at_unit_start: [s, t] outside trajectory window");
    }
    if (s == t) return 1.0;
    // Cumulative trapezoid of F/l from s, then the outer integral of
    // (zeta N / l) e^{A(sigma)} on the same points.
    const auto pts = step_targets_up(traj, s, t, 1);
    const std::size_t n = pts.size();
    std::vector<double> growth(n);  // A(sigma) = int_s^sigma F/l
    double acc = 0.0;
    double prev_v = drift_over_position(traj, signals, params, pts[0]);
    growth[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double cur_v = drift_over_position(traj, signals, params, pts[i]);
        acc += 0.5 * (prev_v + cur_v) * (pts[i] - pts[i - 1]);
        growth[i] = acc;
        prev_v = cur_v;
    }
    double outer = 0.0;
    auto integrand = [&](std::size_t i) {
        return params.pitch * signals.speed(pts[i]) / traj.position(pts[i]) *
               std::exp(growth[i]);
    };
    double prev_g = integrand(0);
    for (std::size_t i = 1; i < n; ++i) {
        const double cur_g = integrand(i);
        outer += 0.5 * (prev_g + cur_g) * (pts[i] - pts[i - 1]);
        prev_g = cur_g;
    }
    return std::exp(growth.back()) - outer;
}

// Segment-local evaluator for the backward trace: the step targets walk the
// trajectory nodes in descending order, so the containing segment is tracked
// by index instead of a binary search per velocity evaluation.
class DescentField {
public:
    DescentField(Zone zone, const InterfaceTrajectory& traj,
                 const OperatingSignals& signals, const PhysicalParams& params)
        : zone_(zone), traj_(traj), signals_(signals), params_(params) {}

    void seek(double s) {
        const auto& ts = traj_.times();
        auto it = std::upper_bound(ts.begin(), ts.end(), s);
        seg_ = (it == ts.begin()) ? 0
                                  : std::min(static_cast<std::size_t>(it - ts.begin()) -
                                                 1,
                                             ts.size() - 2);
    }

    // s must not increase between calls.
    AffineVelocity at(double s) {
        const auto& ts = traj_.times();
        while (seg_ > 0 && s < ts[seg_]) --seg_;
        double l, fp1;
        if (ts.size() == 1) {
            l = traj_.positions()[0];
            fp1 = traj_.fills()[0];
        } else {
            const double w =
                std::clamp((s - ts[seg_]) / (ts[seg_ + 1] - ts[seg_]), 0.0, 1.0);
            l = traj_.positions()[seg_] +
                w * (traj_.positions()[seg_ + 1] - traj_.positions()[seg_]);
            fp1 = traj_.fills()[seg_] + w * (traj_.fills()[seg_ + 1] - traj_.fills()[seg_]);
        }
        const double speed = signals_.speed(s);
        const double drift = interface_velocity(params_, l, speed, fp1);
        if (zone_ == Zone::pfz) {
            return {params_.pitch * speed / l, -drift / l};
        }
        const double gap = params_.length - l;
        const double flow = net_flow_rate(params_, l, speed);
        return {(params_.pitch * flow / (params_.density * params_.effective_volume) -
                 drift) /
                    gap,
                drift / gap};
    }

private:
    Zone zone_;
    const InterfaceTrajectory& traj_;
    const OperatingSignals& signals_;
    const PhysicalParams& params_;
    std::size_t seg_ = 0;
};

TracedPath trace_path(Zone zone, const InterfaceTrajectory& traj,
                      const OperatingSignals& signals, const PhysicalParams& params,
                      double t, double x, double s_min, int substeps) {
    if (x < 0.0 || x > 1.0) {
        throw std::invalid_argument("trace_path: x outside [0, 1]");
    }
    if (t < s_min - 1e-12) {
        throw std::invalid_argument("trace_path: t below window start");
    }
    TracedPath path;
    // Collected descending, reversed at the end.
    std::vector<double> s_desc{t};
    std::vector<double> xi_desc{x};

    if (t <= s_min || (x <= 0.0 && t > s_min)) {
        // Degenerate starts: on the initial line, or on the inflow boundary.
        if (t <= s_min) {
            path.foot = Foot{Foot::Kind::initial, std::clamp(x, 0.0, 1.0)};
        } else {
            path.foot = Foot{Foot::Kind::boundary, t};
        }
        path.s = {t};
        path.xi = {std::clamp(x, 0.0, 1.0)};
        return path;
    }

    const auto targets = step_targets_down(traj, t, s_min, substeps);
    DescentField field(zone, traj, signals, params);
    DescentField mid_field(zone, traj, signals, params);
    DescentField end_field(zone, traj, signals, params);
    field.seek(t);
    mid_field.seek(t);
    end_field.seek(t);

    double s_cur = targets.front();
    double xi_cur = x;
    AffineVelocity start = field.at(s_cur);
    for (std::size_t i = 1; i < targets.size(); ++i) {
        const double v = start(xi_cur);
        if (!(v > 0.0)) {
            throw RegimeError("trace_path: nonpositive velocity " + std::to_string(v) +
                              " at s=" + std::to_string(s_cur));
        }
        const double s_next = targets[i];
        const double ds = s_next - s_cur;
        const AffineVelocity half = mid_field.at(s_cur + 0.5 * ds);
        const AffineVelocity stop = end_field.at(s_next);
        const double k1 = v;
        const double k2 = half(xi_cur + 0.5 * ds * k1);
        const double k3 = half(xi_cur + 0.5 * ds * k2);
        const double k4 = stop(xi_cur + ds * k3);
        const double xi_next = xi_cur + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (xi_next < 0.0) {
            // Boundary crossing inside this step: bisect the step length.
            double lo = s_next, hi = s_cur;  // xi(lo) < 0 <= xi(hi)
            const double tol = kBisectionRelTol * std::max(1.0, t - s_min);
            for (int it = 0; it < kBisectionMaxIter && (hi - lo) > tol; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double xi_mid =
                    rk4_step(zone, traj, signals, params, s_cur, xi_cur, mid - s_cur);
                if (xi_mid < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            const double tau = 0.5 * (lo + hi);
            path.foot = Foot{Foot::Kind::boundary, tau};
            s_desc.push_back(tau);
            xi_desc.push_back(0.0);
            std::reverse(s_desc.begin(), s_desc.end());
            std::reverse(xi_desc.begin(), xi_desc.end());
            path.s = std::move(s_desc);
            path.xi = std::move(xi_desc);
            return path;
        }
        s_cur = s_next;
        xi_cur = xi_next;
        start = stop;
        s_desc.push_back(s_cur);
        xi_desc.push_back(xi_cur);
    }
    // Reached the initial line with xi >= 0 (exactly 0 counts as initial).
    path.foot = Foot{Foot::Kind::initial, std::clamp(xi_cur, 0.0, 1.0)};
    std::reverse(s_desc.begin(), s_desc.end());
    std::reverse(xi_desc.begin(), xi_desc.end());
    path.s = std::move(s_desc);
    path.xi = std::move(xi_desc);
    return path;
}

Foot trace_foot(Zone zone, const InterfaceTrajectory& traj,
                const OperatingSignals& signals, const PhysicalParams& params, double t,
                double x, double s_min, int substeps) {
    return trace_path(zone, traj, signals, params, t, x, s_min, substeps).foot;
}

double separatrix_position(const InterfaceTrajectory& traj,
                           const OperatingSignals& signals, const PhysicalParams& params,
                           double t, double s_min, int substeps) {
    if (t <= s_min) return 0.0;
    const auto targets = step_targets_up(traj, s_min, t, substeps);
    double s_cur = targets.front();
    double xi_cur = 0.0;
    for (std::size_t i = 1; i < targets.size(); ++i) {
        xi_cur = rk4_step(Zone::pfz, traj, signals, params, s_cur, xi_cur,
                          targets[i] - s_cur);
        s_cur = targets[i];
    }
    return xi_cur;
}

std::optional<double> separatrix_crossing_time(const InterfaceTrajectory& traj,
                                               const OperatingSignals& signals,
                                               const PhysicalParams& params, double s_min,
                                               int substeps) {
    const double t_end = traj.end_time();
    const auto targets = step_targets_up(traj, s_min, t_end, substeps);
    double s_cur = targets.front();
    double xi_cur = 0.0;
    for (std::size_t i = 1; i < targets.size(); ++i) {
        const double s_next = targets[i];
        const double xi_next =
            rk4_step(Zone::pfz, traj, signals, params, s_cur, xi_cur, s_next - s_cur);
        if (xi_next >= 1.0) {
            double lo = s_cur, hi = s_next;  // xi(lo) < 1 <= xi(hi)
            const double tol = kBisectionRelTol * std::max(1.0, t_end - s_min);
            for (int it = 0; it < kBisectionMaxIter && (hi - lo) > tol; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double xi_mid = rk4_step(Zone::pfz, traj, signals, params, s_cur,
                                               xi_cur, mid - s_cur);
                if (xi_mid < 1.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        s_cur = s_next;
        xi_cur = xi_next;
    }
    return std::nullopt;
}

FootSensitivity foot_derivatives(const InterfaceTrajectory& traj,
                                 const OperatingSignals& signals,
                                 const PhysicalParams& params, double t, double x,
                                 double s_min) {
    const Foot foot = trace_foot(Zone::pfz, traj, signals, params, t, x, s_min);
    return foot_sensitivity(traj, signals, params, t, x, s_min, foot);
}

FootSensitivity foot_sensitivity(const InterfaceTrajectory& traj,
                                 const OperatingSignals& signals,
                                 const PhysicalParams& params, double t, double x,
                                 double s_min, const Foot& foot) {
    FootSensitivity out;
    out.foot = foot;
    const double l_t = traj.position(t);
    const double fp1_t = traj.fill(t);
    const double speed_t = signals.speed(t);
    const double alpha_here =
        (params.pitch * speed_t -
         x * interface_velocity(params, l_t, speed_t, fp1_t)) /
        l_t;
    if (out.foot.is_initial()) {
        const double growth = std::exp(flow_integral(traj, signals, params, s_min, t));
        out.d_dx = growth;
        out.d_dt = -alpha_here * growth;
    } else {
        const double tau = out.foot.location;
        const double growth = std::exp(flow_integral(traj, signals, params, tau, t));
        const double ratio = traj.position(tau) / (params.pitch * signals.speed(tau));
        out.d_dx = -ratio * growth;
        out.d_dt = ratio * alpha_here * growth;
    }
    return out;
}

double boundary_foot_curvature(const InterfaceTrajectory& traj,
                               const OperatingSignals& signals,
                               const PhysicalParams& params, double t,
                               const FootSensitivity& sens) {
    if (!sens.foot.is_boundary()) {
        throw std::invalid_argument("boundary_foot_curvature: point has an initial foot");
    }
    // tau_xx = q'(tau) tau_x with q(tau) = -(l(tau)/(zeta N(tau))) e^{int_tau^t F/l};
    // along the trajectory l' = F, so q'(tau) = e^{int_tau^t F/l} l(tau) N'(tau)
    // / (zeta N(tau)^2).
    const double tau = sens.foot.location;
    const double growth = std::exp(flow_integral(traj, signals, params, tau, t));
    const double speed = signals.speed(tau);
    const double dq = growth * traj.position(tau) * signals.speed.slope(tau) /
                      (params.pitch * speed * speed);
    return dq * sens.d_dx;
}

double boundary_foot_second_derivative(const InterfaceTrajectory& traj,
                                       const OperatingSignals& signals,
                                       const PhysicalParams& params, double t, double x,
                                       double s_min) {
    const auto sens = foot_derivatives(traj, signals, params, t, x, s_min);
    return boundary_foot_curvature(traj, signals, params, t, sens);
}

}  // namespace extrusim
