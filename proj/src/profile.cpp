#include "extrusim/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace extrusim {

SampledProfile::SampledProfile(std::vector<double> values, std::vector<double> slopes)
    : values_(std::move(values)), slopes_(std::move(slopes)) {
    if (values_.size() < 2) {
        throw std::invalid_argument("SampledProfile: needs at least two nodes");
    }
    spacing_ = 1.0 / static_cast<double>(values_.size() - 1);
    const std::size_t n = values_.size();
    if (slopes_.empty()) {
        slopes_.resize(n);
        slopes_[0] = (values_[1] - values_[0]) / spacing_;
        slopes_[n - 1] = (values_[n - 1] - values_[n - 2]) / spacing_;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            slopes_[i] = (values_[i + 1] - values_[i - 1]) / (2.0 * spacing_);
        }
    } else if (slopes_.size() != n) {
        throw std::invalid_argument("SampledProfile: slopes size mismatch");
    }
    curvatures_.resize(n);
    curvatures_[0] = (slopes_[1] - slopes_[0]) / spacing_;
    curvatures_[n - 1] = (slopes_[n - 1] - slopes_[n - 2]) / spacing_;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        curvatures_[i] = (slopes_[i + 1] - slopes_[i - 1]) / (2.0 * spacing_);
    }
}

double SampledProfile::interp(const std::vector<double>& a, double x) const {
    if (x <= 0.0) return a.front();
    if (x >= 1.0) return a.back();
    const double pos = x / spacing_;
    std::size_t i = static_cast<std::size_t>(pos);
    i = std::min(i, a.size() - 2);
    const double w = pos - static_cast<double>(i);
    return a[i] + w * (a[i + 1] - a[i]);
}

double SampledProfile::value(double x) const { return interp(values_, x); }

double SampledProfile::slope(double x) const { return interp(slopes_, x); }

double SampledProfile::curvature(double x) const { return interp(curvatures_, x); }

double SampledProfile::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double SampledProfile::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

double SampledProfile::w1inf_distance_to(double center) const {
    double dv = 0.0, ds = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        dv = std::max(dv, std::abs(values_[i] - center));
        ds = std::max(ds, std::abs(slopes_[i]));
    }
    return dv + ds;
}

}  // namespace extrusim
