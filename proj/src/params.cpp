#include "extrusim/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace extrusim {

std::vector<std::string> PhysicalParams::validation_errors() const {
    std::vector<std::string> errors;
    auto require_positive = [&errors](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            errors.push_back(std::string(name) + " must be strictly positive, got " +
                             std::to_string(v));
        }
    };
    require_positive(length, "length");
    require_positive(pitch, "pitch");
    require_positive(die_coeff, "die_coeff");
    require_positive(pressure_coeff, "pressure_coeff");
    require_positive(density, "density");
    require_positive(effective_volume, "effective_volume");
    require_positive(effective_area, "effective_area");
    require_positive(exchange_area, "exchange_area");
    require_positive(heat_exchange, "heat_exchange");
    require_positive(heat_capacity, "heat_capacity");
    require_positive(viscosity, "viscosity");
    require_positive(visc_heat_pfz, "visc_heat_pfz");
    require_positive(visc_heat_ffz, "visc_heat_ffz");
    require_positive(visc_heat_coeff, "visc_heat_coeff");
    if (!std::isfinite(ambient_pressure)) {
        errors.push_back("ambient_pressure must be finite");
    }
    return errors;
}

void PhysicalParams::validate() const {
    auto errors = validation_errors();
    if (errors.empty()) return;
    std::ostringstream oss;
    oss << "invalid physical parameters:";
    for (const auto& e : errors) oss << "\n  " << e;
    throw std::invalid_argument(oss.str());
}

bool PhysicalParams::is_conserving(double rel_tol) const {
    const double lhs = effective_volume;
    const double rhs = pitch * effective_area;
    return std::abs(lhs - rhs) <= rel_tol * std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace extrusim
