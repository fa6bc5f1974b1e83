// SPDX-License-Identifier: Apache-2.0
#include "cyla/synthesis.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace cyla;

namespace {

UCyAGeometry desk_geometry(Index m_v = 8, Index m_h = 25) {
    UCyAGeometry geo;
    geo.m_v = m_v;
    geo.m_h = m_h;
    const double lambda0 = kSpeedOfLight / 28e9;
    geo.radius_m = 2.0 * lambda0;
    geo.layer_spacing_m = 0.5 * lambda0;
    return geo;
}

SystemConfig desk_config() {
    SystemConfig cfg;  // defaults are the desk-scale values
    return cfg;
}

}  // namespace

TEST_CASE("vertical steering closed forms") {
    UCyAGeometry geo = desk_geometry(4);
    const double f0 = 28e9;

    VecC flat = vertical_steering(M_PI / 2, f0, geo);
    for (Index m = 0; m < 4; ++m) CHECK(std::abs(flat(m) - cdouble(0.5, 0.0)) < 1e-14);

    // h = lambda0/2, theta = pi/3: phase step is -pi cos(pi/3) = -pi/2
    VecC a = vertical_steering(M_PI / 3, f0, geo);
    const cdouble want[] = {{0.5, 0.0}, {0.0, -0.5}, {-0.5, 0.0}, {0.0, 0.5}};
    for (Index m = 0; m < 4; ++m) CHECK(std::abs(a(m) - want[m]) < 1e-12);

    // negating cos(theta) conjugates the vector elementwise
    VecC b = vertical_steering(M_PI - M_PI / 3, f0, geo);
    for (Index m = 0; m < 4; ++m) CHECK(std::abs(b(m) - std::conj(a(m))) < 1e-12);

    CHECK_THROWS_AS(vertical_steering(1.0, 0.0, geo), std::invalid_argument);
}

TEST_CASE("horizontal steering matches the per-element formula") {
    UCyAGeometry geo = desk_geometry();
    const double f0 = 28e9;

    VecC at_axis = horizontal_steering(0.0, 1.23, f0, geo);
    for (Index m = 0; m < geo.m_h; ++m)
        CHECK(std::abs(at_axis(m) - cdouble(1.0 / std::sqrt(25.0), 0.0)) < 1e-14);

    // rotating phi by one ring step circularly shifts the entries
    const double step = 2.0 * M_PI / static_cast<double>(geo.m_h);
    VecC base = horizontal_steering(1.1, 0.7, f0, geo);
    VecC rot = horizontal_steering(1.1, 0.7 + step, f0, geo);
    for (Index m = 0; m < geo.m_h; ++m)
        CHECK(std::abs(rot((m + 1) % geo.m_h) - base(m)) < 1e-12);

    auto gen = oracle::rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        std::mt19937_64& g = gen;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double theta = u(g) * M_PI;
        const double phi = u(g) * 2.0 * M_PI;
        const double f = 27e9 + 2e9 * u(g);
        VecC got = horizontal_steering(theta, phi, f, geo);
        for (Index m = 0; m < geo.m_h; ++m) {
            const double ring = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(geo.m_h);
            const cdouble want =
                std::polar(1.0 / std::sqrt(25.0),
                           2.0 * M_PI / kSpeedOfLight * f * geo.radius_m * std::sin(theta) * std::cos(phi - ring));
            CHECK(std::abs(got(m) - want) < 1e-14);
        }
    }
}

TEST_CASE("delay and sweep phase factors") {
    CHECK(std::abs(delay_sweep_factor(0.0, 1e9, 0, 1e-4) - cdouble(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(delay_sweep_factor(0.25e-9, 1e9, 0, 1e-4) - cdouble(0.0, -1.0)) < 1e-12);
    CHECK(std::abs(delay_sweep_factor(1e-9, 1e9, 0, 1e-4) - cdouble(1.0, 0.0)) < 1e-12);
    // unit modulus with sweep phase included
    CHECK(std::abs(std::abs(delay_sweep_factor(3.3e-9, 27.5e9, 2, 1e-4)) - 1.0) < 1e-15);
}

TEST_CASE("full steering is the Kronecker product with unit norm") {
    UCyAGeometry geo = desk_geometry(3, 5);
    const double f0 = 28e9;
    VecC v = vertical_steering(0.9, f0, geo);
    VecC h = horizontal_steering(0.9, 2.0, f0, geo);
    VecC full = full_steering(0.9, 2.0, f0, geo);
    REQUIRE(full.size() == 15);
    for (Index iv = 0; iv < 3; ++iv)
        for (Index ih = 0; ih < 5; ++ih) CHECK(std::abs(full(iv * 5 + ih) - v(iv) * h(ih)) < 1e-14);
    CHECK(std::abs(full.norm() - 1.0) < 1e-13);
}

TEST_CASE("noiseless single-source snapshot through an identity beamformer") {
    UCyAGeometry geo = desk_geometry(4, 5);
    SystemConfig cfg = desk_config();
    cfg.m_b = 1;
    cfg.m_f = 3;
    cfg.m_t = 4;

    BeamformerSet bf;
    bf.p_max = 2;  // 2P+1 == m_h: the Q-DFT stage below is replaced by identity
    bf.b_vab = MatC::Identity(4, 4);
    bf.b_hab = MatC::Identity(5, 5);
    bf.b_vdb.assign(3, std::vector<VecC>(1, VecC::Ones(4)));
    bf.b_hdb.assign(3, std::vector<VecC>(1, VecC::Ones(5)));

    SourceScene scene;
    scene.paths.push_back({1.2, 1.0, 10e-9, 1.0, 0});
    generate_symbols(scene, cfg);

    RawSnapshots snaps = synthesize(scene, cfg, geo, bf, /*with_noise=*/false);
    const double amp = 1.0 / std::sqrt(pathloss(cfg, 10e-9));
    for (Index mf = 0; mf < 3; ++mf)
        for (Index mt = 0; mt < 4; ++mt) {
            const double f = cfg.subcarrier_hz(mf);
            VecC want = amp * scene.symbols.at(0)(mt) * delay_sweep_factor(10e-9, f, 0, cfg.sweep_interval_s) *
                        full_steering(1.0, 1.2, f, geo);
            CHECK((snaps.at(mf, mt, 0) - want).norm() < 1e-12);
        }
}

TEST_CASE("noiseless two-source snapshots have rank 2 over time") {
    UCyAGeometry geo = desk_geometry();
    SystemConfig cfg = desk_config();
    cfg.m_b = 1;
    cfg.m_f = 2;
    cfg.m_t = 8;
    BeamformerSet bf = design_beamformer(cfg, geo);

    SourceScene scene;
    scene.paths.push_back({0.4, 1.0, 12e-9, 1.0, 0});
    scene.paths.push_back({2.9, 1.7, 40e-9, 1.0, 1});
    generate_symbols(scene, cfg);

    RawSnapshots snaps = synthesize(scene, cfg, geo, bf, false);
    for (Index mf = 0; mf < cfg.m_f; ++mf) {
        MatC over_time(bf.m_bsd(), cfg.m_t);
        for (Index mt = 0; mt < cfg.m_t; ++mt) over_time.col(mt) = snaps.at(mf, mt, 0);
        CHECK(oracle::numerical_rank_svd(over_time) == 2);
    }
}

TEST_CASE("noise-only synthesis hits the calibrated noise power") {
    UCyAGeometry geo = desk_geometry(4, 25);
    SystemConfig cfg = desk_config();
    cfg.m_f = 8;
    cfg.m_t = 64;
    cfg.m_b = 2;
    cfg.snr_db = 0.0;

    BeamformerSet bf = design_beamformer(cfg, geo);
    SourceScene empty;
    RawSnapshots snaps = synthesize(empty, cfg, geo, bf, true);
    CHECK(snaps.noise_sigma2 == 1.0);  // empty scene: unit reference power at 0 dB

    double acc = 0.0;
    Index count = 0;
    for (const VecC& x : snaps.data) {
        acc += x.squaredNorm();
        count += x.size();
    }
    REQUIRE(count >= 100000);
    CHECK(acc / static_cast<double>(count) == Catch::Approx(snaps.noise_sigma2).epsilon(0.02));
}

TEST_CASE("per-beam tensor inverts the snapshot layout") {
    UCyAGeometry geo = desk_geometry();
    SystemConfig cfg = desk_config();
    cfg.m_b = 2;
    cfg.m_f = 3;
    cfg.m_t = 4;
    BeamformerSet bf = design_beamformer(cfg, geo);

    SourceScene scene;
    scene.paths.push_back({1.0, 0.9, 20e-9, 1.0, 0});
    generate_symbols(scene, cfg);
    RawSnapshots snaps = synthesize(scene, cfg, geo, bf, true);

    for (Index mb = 0; mb < cfg.m_b; ++mb) {
        ComplexTensor t = per_beam_tensor(snaps, mb);
        REQUIRE(t.shape() == std::vector<Index>({bf.m_vd(), bf.m_hd(), cfg.m_f, cfg.m_t}));
        for (Index mf = 0; mf < cfg.m_f; ++mf)
            for (Index mt = 0; mt < cfg.m_t; ++mt) {
                const VecC& x = snaps.at(mf, mt, mb);
                for (Index iv = 0; iv < bf.m_vd(); ++iv)
                    for (Index ih = 0; ih < bf.m_hd(); ++ih)
                        CHECK(t.at({iv, ih, mf, mt}) == x(iv * bf.m_hd() + ih));
            }
    }
    CHECK_THROWS_AS(per_beam_tensor(snaps, 5), std::invalid_argument);
}

TEST_CASE("noiseless single-source per-beam tensor is rank one in every mode") {
    UCyAGeometry geo = desk_geometry();
    SystemConfig cfg = desk_config();
    cfg.m_b = 1;
    cfg.m_f = 4;
    cfg.m_t = 6;
    BeamformerSet bf = design_beamformer(cfg, geo);

    SourceScene scene;
    scene.paths.push_back({2.2, 1.3, 30e-9, 1.0, 0});
    generate_symbols(scene, cfg);
    RawSnapshots snaps = synthesize(scene, cfg, geo, bf, false);
    ComplexTensor t = per_beam_tensor(snaps, 0);
    // modes 1, 2, 4 are exactly rank one; mode 3 couples to the manifolds'
    // frequency dependence, which the focusing stage later removes
    for (Index n : {Index(0), Index(1), Index(3)}) {
        Eigen::VectorXd s = oracle::singular_values(unfold(t, n));
        CHECK(s(1) < 1e-2 * s(0));
    }
}

TEST_CASE("model measurement tensor equals an independent outer-product sum") {
    UCyAGeometry geo = desk_geometry();
    SystemConfig cfg = desk_config();
    BeamformerSet bf = design_beamformer(cfg, geo);

    SourceScene scene;
    scene.paths.push_back({0.7, 0.8, 15e-9, 1.0, 0});
    scene.paths.push_back({3.5, 1.5, 42e-9, 0.8, 1});
    scene.paths.push_back({5.1, 2.2, 70e-9, 1.2, 2});
    generate_symbols(scene, cfg);

    ComplexTensor y = model_measurement_tensor(scene, cfg, geo, bf);

    // oracle: explicit quadruple loop over per-path factor vectors
    ComplexTensor want({bf.m_vd(), bf.m_hd(), cfg.m_f, cfg.m_t});
    for (const PathParams& p : scene.paths) {
        Index mult = 0;
        for (Index mb = 0; mb < cfg.m_b; ++mb)
            if (beam_captures(p.elevation_rad, mb, cfg.m_b)) ++mult;
        VecC v = model_vertical_manifold(p.elevation_rad, cfg, geo);
        VecC h = model_horizontal_manifold(p.elevation_rad, p.azimuth_rad, cfg, geo, bf);
        VecC a = delay_manifold(p.delay_s, cfg);
        VecC s = scene.symbols.at(p.coherence_group);
        const double amp = static_cast<double>(mult) * p.power / std::sqrt(pathloss(cfg, p.delay_s));
        for (Index iv = 0; iv < bf.m_vd(); ++iv)
            for (Index ih = 0; ih < bf.m_hd(); ++ih)
                for (Index mf = 0; mf < cfg.m_f; ++mf)
                    for (Index mt = 0; mt < cfg.m_t; ++mt)
                        want.at({iv, ih, mf, mt}) += amp * v(iv) * h(ih) * a(mf) * s(mt);
    }
    CHECK(oracle::rel_error(y, want) < 1e-10);

    // with K distinct sources all four unfolding ranks are K
    for (Index n = 0; n < 4; ++n) CHECK(oracle::numerical_rank_svd(unfold(y, n)) == 3);
}

TEST_CASE("model noise has the same power in every mode slice") {
    UCyAGeometry geo = desk_geometry(6, 25);
    SystemConfig cfg = desk_config();
    cfg.m_f = 6;
    cfg.m_t = 24;
    cfg.snr_db = 0.0;
    BeamformerSet bf = design_beamformer(cfg, geo);
    SourceScene empty;
    double sigma2 = 0.0;
    ComplexTensor y = model_measurement_tensor(empty, cfg, geo, bf, true, &sigma2);
    CHECK(sigma2 == 1.0);

    for (Index n = 0; n < 4; ++n) {
        for (Index i = 0; i < y.extent(n); ++i) {
            ComplexTensor s = slice(y, n, i, 1);
            const double mean_power = s.frobenius_norm() * s.frobenius_norm() / static_cast<double>(s.size());
            CHECK(mean_power == Catch::Approx(sigma2).margin(0.15));
        }
    }
}

TEST_CASE("scene validation rejects malformed scenes") {
    UCyAGeometry geo = desk_geometry();
    SystemConfig cfg = desk_config();
    BeamformerSet bf = design_beamformer(cfg, geo);

    SourceScene bad_delay;
    bad_delay.paths.push_back({1.0, 1.0, 1.0, 1.0, 0});  // way past 1/spacing
    generate_symbols(bad_delay, cfg);
    CHECK_THROWS_AS(validate_scene(bad_delay, cfg, bf.m_vd(), bf.m_hd()), std::invalid_argument);

    SourceScene duplicate_elev;
    duplicate_elev.paths.push_back({1.0, 1.0, 10e-9, 1.0, 0});
    duplicate_elev.paths.push_back({2.0, 1.0 + 1e-12, 20e-9, 1.0, 1});
    generate_symbols(duplicate_elev, cfg);
    CHECK_THROWS_AS(validate_scene(duplicate_elev, cfg, bf.m_vd(), bf.m_hd()), std::invalid_argument);

    SourceScene too_many;
    for (int k = 0; k < 9; ++k)
        too_many.paths.push_back({0.3 * k, 0.2 + 0.25 * k, 5e-9 * (k + 1), 1.0, k});
    generate_symbols(too_many, cfg);
    CHECK_THROWS_AS(validate_scene(too_many, cfg, bf.m_vd(), bf.m_hd()), std::invalid_argument);
}
