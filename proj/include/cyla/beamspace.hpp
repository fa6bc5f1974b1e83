// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cyla/bessel.hpp"
#include "cyla/geometry.hpp"
#include "cyla/steering.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cyla {

/// Phase-mode truncation order P = floor(2 pi f r / c).
inline int default_p_max(const UCyAGeometry& geo, double f_hz) {
    return static_cast<int>(std::floor(2.0 * M_PI * f_hz * geo.radius_m / kSpeedOfLight));
}

/// Q-DFT analog combining matrix, columns indexed p = -P..P with
/// [B]_{m,p} = exp(-j 2 pi m p / M_h). Distinct columns are orthogonal with
/// squared norm M_h as long as M_h >= 2P+1.
inline MatC qdft_matrix(Index m_h, int p_max) {
    if (p_max < 0) throw std::invalid_argument("qdft_matrix: p_max must be >= 0");
    const Index cols = 2 * static_cast<Index>(p_max) + 1;
    if (m_h < cols)
        throw std::invalid_argument("qdft_matrix: m_h < 2*p_max+1 aliases the DFT bins");
    MatC b(m_h, cols);
    for (int p = -p_max; p <= p_max; ++p)
        for (Index m = 0; m < m_h; ++m)
            b(m, p + p_max) =
                std::polar(1.0, -2.0 * M_PI * static_cast<double>(m) * p / static_cast<double>(m_h));
    return b;
}

inline cdouble unit_imag_power(int p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

/// Phase-mode approximation of the Q-DFT output: entry p = sqrt(M_h) j^p
/// J_p(gamma) exp(-j p phi), gamma = 2 pi f r sin(theta) / c. This is the
/// validation target for qdft_matrix^H * horizontal_steering.
inline VecC beamspace_response(double theta_rad, double phi_rad, double f_hz, const UCyAGeometry& geo,
                               int p_max) {
    if (!geo.supports_qdft(f_hz))
        throw std::invalid_argument("beamspace_response: m_h < floor(4 pi f r / c), ring undersampled");
    const double gamma = 2.0 * M_PI / kSpeedOfLight * f_hz * geo.radius_m * std::sin(theta_rad);
    const std::vector<double> j = bessel_j_sequence(p_max, std::abs(gamma));
    const double root_mh = std::sqrt(static_cast<double>(geo.m_h));
    VecC a(2 * p_max + 1);
    for (int p = -p_max; p <= p_max; ++p) {
        double jp = j[static_cast<size_t>(std::abs(p))];
        if (p < 0 && (p % 2 != 0)) jp = -jp;
        if (gamma < 0.0 && (p % 2 != 0)) jp = -jp;
        a(p + p_max) = root_mh * unit_imag_power(p) * jp * std::polar(1.0, -static_cast<double>(p) * phi_rad);
    }
    return a;
}

/// Hybrid beamformer: identity vertical analog stage, Q-DFT horizontal analog
/// stage, and per-(subcarrier, beam) diagonal digital weights. The vertical
/// weights are matched to the beam's sweep direction, the horizontal weights
/// are uniform.
struct BeamformerSet {
    MatC b_vab;  // M_v x M_v identity
    MatC b_hab;  // M_h x (2P+1) Q-DFT
    int p_max = 0;
    std::vector<std::vector<VecC>> b_vdb;  // [m_f][m_b], diagonal of the vertical digital stage
    std::vector<std::vector<VecC>> b_hdb;  // [m_f][m_b], diagonal of the horizontal digital stage

    Index m_vd() const { return b_vab.cols(); }
    Index m_hd() const { return b_hab.cols(); }
    Index m_bsd() const { return m_vd() * m_hd(); }
    Index rf_chains() const { return m_bsd(); }

    const VecC& vertical_weights(Index mf, Index mb) const {
        return b_vdb[static_cast<size_t>(mf)][static_cast<size_t>(mb)];
    }
    const VecC& horizontal_weights(Index mf, Index mb) const {
        return b_hdb[static_cast<size_t>(mf)][static_cast<size_t>(mb)];
    }
};

/// Centre of the m_b-th vertical sweep interval (zero-based beam index); the
/// sweep covers (0, pi) in m_b_total equal intervals.
inline double sweep_direction(Index m_b, Index m_b_total) {
    return M_PI * (static_cast<double>(m_b) + 0.5) / static_cast<double>(m_b_total);
}

inline BeamformerSet design_beamformer(const SystemConfig& cfg, const UCyAGeometry& geo, int p_max = -1) {
    geo.validate();
    cfg.validate();
    if (p_max < 0) p_max = default_p_max(geo, cfg.f0_hz);
    BeamformerSet bf;
    bf.p_max = p_max;
    bf.b_vab = MatC::Identity(geo.m_v, geo.m_v);
    bf.b_hab = qdft_matrix(geo.m_h, p_max);

    const Index m_hd = 2 * static_cast<Index>(p_max) + 1;
    const double h_scale = 1.0 / std::sqrt(static_cast<double>(m_hd));
    bf.b_vdb.resize(static_cast<size_t>(cfg.m_f));
    bf.b_hdb.resize(static_cast<size_t>(cfg.m_f));
    for (Index mf = 0; mf < cfg.m_f; ++mf) {
        const double f = cfg.subcarrier_hz(mf);
        bf.b_vdb[static_cast<size_t>(mf)].resize(static_cast<size_t>(cfg.m_b));
        bf.b_hdb[static_cast<size_t>(mf)].resize(static_cast<size_t>(cfg.m_b));
        for (Index mb = 0; mb < cfg.m_b; ++mb) {
            // matched filter to the sweep direction; already unit norm
            bf.b_vdb[static_cast<size_t>(mf)][static_cast<size_t>(mb)] =
                vertical_steering(sweep_direction(mb, cfg.m_b), f, geo);
            bf.b_hdb[static_cast<size_t>(mf)][static_cast<size_t>(mb)] = VecC::Constant(m_hd, h_scale);
        }
    }
    return bf;
}

/// Post-beamforming vertical manifold a_vhb = B_vdb^H B_vab^H a_v for one
/// (subcarrier, beam).
inline VecC vertical_beamspace(double theta_rad, double f_hz, const UCyAGeometry& geo,
                               const BeamformerSet& bf, Index mf, Index mb) {
    return bf.vertical_weights(mf, mb).conjugate().cwiseProduct(vertical_steering(theta_rad, f_hz, geo));
}

/// Post-beamforming horizontal manifold a_hhb = B_hdb^H B_hab^H a_h (exact
/// Q-DFT product, not the phase-mode approximation).
inline VecC horizontal_beamspace(double theta_rad, double phi_rad, double f_hz, const UCyAGeometry& geo,
                                 const BeamformerSet& bf, Index mf, Index mb) {
    VecC ring = bf.b_hab.adjoint() * horizontal_steering(theta_rad, phi_rad, f_hz, geo);
    return bf.horizontal_weights(mf, mb).conjugate().cwiseProduct(ring);
}

/// Applies the hybrid beamformer to a full-array snapshot via the Kronecker
/// factorization: y = ((B_vab B_vdb) kron (B_hab B_hdb))^H x with the vertical
/// index slowest in both x and y.
inline VecC apply_hybrid(const VecC& raw, const UCyAGeometry& geo, const BeamformerSet& bf, Index mf,
                         Index mb) {
    if (raw.size() != geo.m_v * geo.m_h)
        throw std::invalid_argument("apply_hybrid: snapshot length must be m_v * m_h");
    const MatC av = bf.b_vab * bf.vertical_weights(mf, mb).asDiagonal();   // M_v x M_vd
    const MatC ah = bf.b_hab * bf.horizontal_weights(mf, mb).asDiagonal();  // M_h x M_hd
    Eigen::Map<const MatC> x(raw.data(), geo.m_h, geo.m_v);
    MatC y = ah.adjoint() * x * av.conjugate();  // M_hd x M_vd
    VecC out(bf.m_bsd());
    for (Index iv = 0; iv < bf.m_vd(); ++iv) out.segment(iv * bf.m_hd(), bf.m_hd()) = y.col(iv);
    return out;
}

}  // namespace cyla
