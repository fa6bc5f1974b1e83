// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cyla/rng.hpp"
#include "cyla/tensor.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace cyla {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Uniform cylindrical array: m_v stacked coaxial uniform circular arrays of
/// m_h elements each, ring radius radius_m, vertical spacing layer_spacing_m.
struct UCyAGeometry {
    Index m_v = 8;
    Index m_h = 25;
    double radius_m = 0.0;
    double layer_spacing_m = 0.0;

    void validate() const {
        if (m_v < 2) throw std::invalid_argument("geometry: m_v must be >= 2");
        if (m_h < 3) throw std::invalid_argument("geometry: m_h must be >= 3");
        if (!(radius_m > 0.0)) throw std::invalid_argument("geometry: radius must be positive");
        if (!(layer_spacing_m > 0.0)) throw std::invalid_argument("geometry: layer spacing must be positive");
    }

    /// Ring aliasing condition for the Q-DFT beamspace at frequency f.
    bool supports_qdft(double f_hz) const {
        return m_h >= static_cast<Index>(std::floor(4.0 * M_PI * f_hz * radius_m / kSpeedOfLight));
    }
};

/// OFDM sweep configuration. Selected subcarriers sit at
/// f0 - bandwidth/2 + m_f * spacing (m_f zero-based); the spacing between the
/// selected subcarriers is what the delay estimator sees, so delays live in
/// [0, 1/spacing).
struct SystemConfig {
    double f0_hz = 28e9;
    double bandwidth_hz = 64e6;
    Index m_f = 8;
    double subcarrier_spacing_hz = 8e6;
    Index m_t = 16;
    Index m_b = 4;
    double sweep_interval_s = 1e-4;
    double snr_db = 10.0;
    double pathloss_exponent = 2.1;
    double pathloss_ref_distance_m = 1.0;
    uint64_t seed = 12345;

    double subcarrier_hz(Index mf) const {
        return f0_hz - 0.5 * bandwidth_hz + static_cast<double>(mf) * subcarrier_spacing_hz;
    }

    double max_subcarrier_hz() const { return subcarrier_hz(m_f - 1); }

    /// Index of the subcarrier closest to the nominal reference frequency f0.
    Index reference_subcarrier() const {
        Index best = 0;
        double best_err = std::abs(subcarrier_hz(0) - f0_hz);
        for (Index mf = 1; mf < m_f; ++mf) {
            const double err = std::abs(subcarrier_hz(mf) - f0_hz);
            if (err < best_err) {
                best_err = err;
                best = mf;
            }
        }
        return best;
    }

    double reference_hz() const { return subcarrier_hz(reference_subcarrier()); }

    void validate() const {
        if (!(f0_hz > 0.0)) throw std::invalid_argument("config: f0 must be positive");
        if (bandwidth_hz < 0.0) throw std::invalid_argument("config: bandwidth must be nonnegative");
        if (m_f < 2) throw std::invalid_argument("config: m_f must be >= 2");
        if (!(subcarrier_spacing_hz > 0.0))
            throw std::invalid_argument("config: subcarrier spacing must be positive");
        if (m_t < 2) throw std::invalid_argument("config: m_t must be >= 2");
        if (m_b < 1) throw std::invalid_argument("config: m_b must be >= 1");
        if (!(sweep_interval_s >= 0.0)) throw std::invalid_argument("config: sweep interval must be >= 0");
        if (!(pathloss_ref_distance_m > 0.0))
            throw std::invalid_argument("config: pathloss reference distance must be positive");
        if (subcarrier_hz(0) <= 0.0)
            throw std::invalid_argument("config: lowest selected subcarrier frequency must be positive");
    }
};

/// One propagation path. Paths sharing a coherence_group id transmit the same
/// symbol stream (fully coherent up to complex gain).
struct PathParams {
    double azimuth_rad = 0.0;
    double elevation_rad = M_PI / 2;
    double delay_s = 0.0;
    double power = 1.0;
    int coherence_group = 0;
};

struct SourceScene {
    std::vector<PathParams> paths;
    std::map<int, VecC> symbols;  // per coherence group, length m_t, unit modulus

    Index path_count() const { return static_cast<Index>(paths.size()); }

    bool has_coherent_group() const {
        std::map<int, int> counts;
        for (const PathParams& p : paths) ++counts[p.coherence_group];
        for (const auto& [id, n] : counts)
            if (n > 1) return true;
        return false;
    }
};

/// Amplitude pathloss for a path, with the source distance taken from the
/// delay: rho = (d/d0)^eta, d = max(c tau, d0).
inline double pathloss(const SystemConfig& cfg, double delay_s) {
    const double d = std::max(kSpeedOfLight * delay_s, cfg.pathloss_ref_distance_m);
    return std::pow(d / cfg.pathloss_ref_distance_m, cfg.pathloss_exponent);
}

/// Fills the per-group symbol streams with seeded QPSK draws (overwrites any
/// existing streams).
inline void generate_symbols(SourceScene& scene, const SystemConfig& cfg, uint64_t stream_tag = 1) {
    scene.symbols.clear();
    for (const PathParams& p : scene.paths) {
        if (scene.symbols.count(p.coherence_group)) continue;
        RandomStream rng(derive_seed(cfg.seed, stream_tag, static_cast<uint64_t>(p.coherence_group)));
        VecC s(cfg.m_t);
        for (Index t = 0; t < cfg.m_t; ++t) s(t) = rng.qpsk();
        scene.symbols[p.coherence_group] = s;
    }
}

/// Scene sanity checks shared by the synthesizer and the estimator. m_vd/m_hd
/// are the post-beamforming stream counts.
inline void validate_scene(const SourceScene& scene, const SystemConfig& cfg, Index m_vd, Index m_hd) {
    const Index k = scene.path_count();
    if (k == 0) return;  // noise-only scenes are allowed
    const Index bound = std::min(std::min(m_vd, m_hd), std::min(cfg.m_f, cfg.m_t));
    if (k >= bound)
        throw std::invalid_argument("scene: path count must be < min(m_vd, m_hd, m_f, m_t)");
    const double delay_limit = 1.0 / cfg.subcarrier_spacing_hz;
    for (const PathParams& p : scene.paths) {
        if (!(p.elevation_rad > 0.0 && p.elevation_rad < M_PI))
            throw std::invalid_argument("scene: elevation must lie in (0, pi)");
        if (p.delay_s < 0.0 || p.delay_s >= delay_limit)
            throw std::invalid_argument("scene: delay outside the unambiguous range [0, 1/spacing)");
        if (!(p.power > 0.0)) throw std::invalid_argument("scene: path power must be positive");
    }
    for (Index i = 0; i < k; ++i)
        for (Index j = i + 1; j < k; ++j)
            if (std::abs(scene.paths[static_cast<size_t>(i)].elevation_rad -
                         scene.paths[static_cast<size_t>(j)].elevation_rad) < 1e-9)
                throw std::invalid_argument("scene: paths with identical elevations are degenerate");
    for (const PathParams& p : scene.paths) {
        auto it = scene.symbols.find(p.coherence_group);
        if (it == scene.symbols.end())
            throw std::invalid_argument("scene: missing symbol stream for a coherence group");
        if (it->second.size() != cfg.m_t)
            throw std::invalid_argument("scene: symbol stream length must equal m_t");
    }
}

}  // namespace cyla
