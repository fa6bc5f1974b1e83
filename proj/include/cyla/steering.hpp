// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cyla/geometry.hpp"
#include "cyla/tensor.hpp"

#include <cmath>

namespace cyla {

/// Vertical (stack) steering vector, entry m = (1/sqrt(M_v)) *
/// exp(-j 2pi/c f h m cos(theta)), m = 0..M_v-1.
inline VecC vertical_steering(double theta_rad, double f_hz, const UCyAGeometry& geo) {
    if (!(f_hz > 0.0)) throw std::invalid_argument("vertical_steering: frequency must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(geo.m_v));
    const double step = -2.0 * M_PI / kSpeedOfLight * f_hz * geo.layer_spacing_m * std::cos(theta_rad);
    VecC a(geo.m_v);
    for (Index m = 0; m < geo.m_v; ++m) a(m) = std::polar(scale, step * static_cast<double>(m));
    return a;
}

/// Ring steering vector, entry m = (1/sqrt(M_h)) *
/// exp(+j 2pi/c f r sin(theta) cos(phi - 2pi m / M_h)).
inline VecC horizontal_steering(double theta_rad, double phi_rad, double f_hz, const UCyAGeometry& geo) {
    if (!(f_hz > 0.0)) throw std::invalid_argument("horizontal_steering: frequency must be positive");
    const double scale = 1.0 / std::sqrt(static_cast<double>(geo.m_h));
    const double gamma = 2.0 * M_PI / kSpeedOfLight * f_hz * geo.radius_m * std::sin(theta_rad);
    VecC a(geo.m_h);
    for (Index m = 0; m < geo.m_h; ++m) {
        const double ring_angle = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(geo.m_h);
        a(m) = std::polar(scale, gamma * std::cos(phi_rad - ring_angle));
    }
    return a;
}

/// Combined delay/sweep phase a_f * b_f = exp(-j 2pi f tau) *
/// exp(-j 2pi f m_b tau_b). Beam index is zero-based.
inline cdouble delay_sweep_factor(double tau_s, double f_hz, Index m_b, double sweep_interval_s) {
    const double phase = -2.0 * M_PI * f_hz * (tau_s + static_cast<double>(m_b) * sweep_interval_s);
    return std::polar(1.0, phase);
}

/// Full-array steering vector: Kronecker product of the vertical and
/// horizontal factors, vertical index slowest.
inline VecC full_steering(double theta_rad, double phi_rad, double f_hz, const UCyAGeometry& geo) {
    return kron(vertical_steering(theta_rad, f_hz, geo), horizontal_steering(theta_rad, phi_rad, f_hz, geo));
}

/// Delay manifold over the selected subcarriers: [exp(-j 2pi f_mf tau)]_mf.
inline VecC delay_manifold(double tau_s, const SystemConfig& cfg) {
    VecC a(cfg.m_f);
    for (Index mf = 0; mf < cfg.m_f; ++mf)
        a(mf) = std::polar(1.0, -2.0 * M_PI * cfg.subcarrier_hz(mf) * tau_s);
    return a;
}

}  // namespace cyla
