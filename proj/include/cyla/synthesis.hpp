// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cyla/beamspace.hpp"
#include "cyla/geometry.hpp"
#include "cyla/rng.hpp"
#include "cyla/steering.hpp"
#include "cyla/tensor.hpp"

#include <cmath>
#include <vector>

namespace cyla {

/// Post-beamforming data streams, one complex vector of length m_bsd per
/// (subcarrier, time frame, sweep beam).
struct RawSnapshots {
    Index m_vd = 0;
    Index m_hd = 0;
    Index m_f = 0;
    Index m_t = 0;
    Index m_b = 0;
    double noise_sigma2 = 0.0;
    std::vector<VecC> data;  // [(mb * m_f + mf) * m_t + mt]

    VecC& at(Index mf, Index mt, Index mb) {
        return data[static_cast<size_t>((mb * m_f + mf) * m_t + mt)];
    }
    const VecC& at(Index mf, Index mt, Index mb) const {
        return data[static_cast<size_t>((mb * m_f + mf) * m_t + mt)];
    }
};

/// A source at elevation theta contributes to beam m_b when it falls inside
/// the beam's sweep interval widened by half an interval on each side
/// (adjacent beams partially overlap).
inline bool beam_captures(double theta_rad, Index m_b, Index m_b_total) {
    const double w = M_PI / static_cast<double>(m_b_total);
    const double lo = w * static_cast<double>(m_b) - 0.5 * w;
    const double hi = w * static_cast<double>(m_b + 1) + 0.5 * w;
    return theta_rad >= lo && theta_rad < hi;
}

/// Synthesizes the received beamspace snapshots of Eq.-(1) form: per captured
/// source, symbol * delay/sweep phase * hybrid-beamformed steering, plus
/// circular complex Gaussian noise calibrated so that
/// snr_db = 10 log10(mean received signal power / sigma^2).
inline RawSnapshots synthesize(const SourceScene& scene, const SystemConfig& cfg, const UCyAGeometry& geo,
                               const BeamformerSet& bf, bool with_noise = true) {
    cfg.validate();
    geo.validate();
    validate_scene(scene, cfg, bf.m_vd(), bf.m_hd());

    RawSnapshots out;
    out.m_vd = bf.m_vd();
    out.m_hd = bf.m_hd();
    out.m_f = cfg.m_f;
    out.m_t = cfg.m_t;
    out.m_b = cfg.m_b;
    out.data.assign(static_cast<size_t>(cfg.m_b * cfg.m_f * cfg.m_t), VecC::Zero(bf.m_bsd()));

    double signal_power_acc = 0.0;
    for (Index mb = 0; mb < cfg.m_b; ++mb) {
        for (Index mf = 0; mf < cfg.m_f; ++mf) {
            const double f = cfg.subcarrier_hz(mf);
            // per-source hybrid-beamformed steering, shared across time frames
            std::vector<VecC> steer;
            std::vector<cdouble> phase;
            std::vector<const VecC*> sym;
            std::vector<double> amp;
            for (const PathParams& p : scene.paths) {
                if (!beam_captures(p.elevation_rad, mb, cfg.m_b)) continue;
                steer.push_back(kron(vertical_beamspace(p.elevation_rad, f, geo, bf, mf, mb),
                                     horizontal_beamspace(p.elevation_rad, p.azimuth_rad, f, geo, bf, mf, mb)));
                phase.push_back(delay_sweep_factor(p.delay_s, f, mb, cfg.sweep_interval_s));
                sym.push_back(&scene.symbols.at(p.coherence_group));
                amp.push_back(p.power / std::sqrt(pathloss(cfg, p.delay_s)));
            }
            for (Index mt = 0; mt < cfg.m_t; ++mt) {
                VecC& x = out.at(mf, mt, mb);
                for (size_t k = 0; k < steer.size(); ++k)
                    x += (amp[k] * (*sym[k])(mt) * phase[k]) * steer[k];
                signal_power_acc += x.squaredNorm();
            }
        }
    }

    const Index total_entries = cfg.m_b * cfg.m_f * cfg.m_t * bf.m_bsd();
    const double mean_power = signal_power_acc / static_cast<double>(total_entries);
    const double ref_power = mean_power > 0.0 ? mean_power : 1.0;
    out.noise_sigma2 = ref_power * std::pow(10.0, -cfg.snr_db / 10.0);

    if (with_noise) {
        RandomStream noise(derive_seed(cfg.seed, 2));
        for (VecC& x : out.data)
            for (Index i = 0; i < x.size(); ++i) x(i) += noise.complex_gaussian(out.noise_sigma2);
    }
    return out;
}

/// Rearranges one beam's snapshots into the order-4 tensor
/// m_vd x m_hd x m_f x m_t, inverting the Kronecker order of the hybrid
/// beamformer output (vertical index slowest).
inline ComplexTensor per_beam_tensor(const RawSnapshots& snapshots, Index mb) {
    if (mb < 0 || mb >= snapshots.m_b) throw std::invalid_argument("per_beam_tensor: beam index out of range");
    const Index m_vd = snapshots.m_vd, m_hd = snapshots.m_hd;
    ComplexTensor t({m_vd, m_hd, snapshots.m_f, snapshots.m_t});
    for (Index mf = 0; mf < snapshots.m_f; ++mf)
        for (Index mt = 0; mt < snapshots.m_t; ++mt) {
            const VecC& x = snapshots.at(mf, mt, mb);
            if (x.size() != m_vd * m_hd)
                throw std::invalid_argument("per_beam_tensor: snapshot length is not m_vd * m_hd");
            for (Index iv = 0; iv < m_vd; ++iv)
                for (Index ih = 0; ih < m_hd; ++ih) t.at({iv, ih, mf, mt}) = x(iv * m_hd + ih);
        }
    return t;
}

/// The two frequency-independent array manifolds left after ideal wideband
/// focusing, evaluated at the reference subcarrier. These are what the
/// estimator's model assumes for modes 1 and 2.
inline VecC model_vertical_manifold(double theta_rad, const SystemConfig& cfg, const UCyAGeometry& geo) {
    return vertical_steering(theta_rad, cfg.reference_hz(), geo) /
           std::sqrt(static_cast<double>(geo.m_v));
}

inline VecC model_horizontal_manifold(double theta_rad, double phi_rad, const SystemConfig& cfg,
                                      const UCyAGeometry& geo, const BeamformerSet& bf) {
    VecC ring = bf.b_hab.adjoint() * horizontal_steering(theta_rad, phi_rad, cfg.reference_hz(), geo);
    return ring / std::sqrt(static_cast<double>(bf.m_hd()));
}

/// Builds the measurement tensor directly in the focused beamspace domain:
/// Y = sum_k (beam multiplicity) a_vhb(theta_k) o a_hhb(theta_k, phi_k)
///          o a_f(tau_k) o s_k (+ noise).
/// This is the exact rank-K model the subspace estimator assumes; the physical
/// chain (synthesize -> focusing -> assemble) approaches it as the focusing
/// residual vanishes.
inline ComplexTensor model_measurement_tensor(const SourceScene& scene, const SystemConfig& cfg,
                                              const UCyAGeometry& geo, const BeamformerSet& bf,
                                              bool with_noise = false, double* sigma2_out = nullptr) {
    cfg.validate();
    geo.validate();
    validate_scene(scene, cfg, bf.m_vd(), bf.m_hd());

    ComplexTensor y({bf.m_vd(), bf.m_hd(), cfg.m_f, cfg.m_t});
    for (const PathParams& p : scene.paths) {
        Index multiplicity = 0;
        for (Index mb = 0; mb < cfg.m_b; ++mb)
            if (beam_captures(p.elevation_rad, mb, cfg.m_b)) ++multiplicity;
        if (multiplicity == 0) continue;
        const double amp =
            static_cast<double>(multiplicity) * p.power / std::sqrt(pathloss(cfg, p.delay_s));
        VecC s = amp * scene.symbols.at(p.coherence_group);
        y += outer({model_vertical_manifold(p.elevation_rad, cfg, geo),
                    model_horizontal_manifold(p.elevation_rad, p.azimuth_rad, cfg, geo, bf),
                    delay_manifold(p.delay_s, cfg), s});
    }

    double mean_power = 0.0;
    for (Index i = 0; i < y.size(); ++i) mean_power += std::norm(y[i]);
    mean_power /= static_cast<double>(y.size());
    const double sigma2 = (mean_power > 0.0 ? mean_power : 1.0) * std::pow(10.0, -cfg.snr_db / 10.0);
    if (sigma2_out != nullptr) *sigma2_out = sigma2;

    if (with_noise) {
        RandomStream noise(derive_seed(cfg.seed, 3));
        for (Index i = 0; i < y.size(); ++i) y[i] += noise.complex_gaussian(sigma2);
    }
    return y;
}

}  // namespace cyla
