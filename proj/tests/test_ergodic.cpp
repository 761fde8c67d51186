#include "support.hpp"

using namespace qmc;
using qmc::test::brute_output_state;
using qmc::test::diag2;
using qmc::test::fixture_s;

TEST_CASE("shift fixture profile") {
    SpectralProfile p = analyze(fixture_s());
    CHECK(p.is_irreducible);
    CHECK(p.period == 2);
    CHECK(std::abs(p.gamma - cplx(-1.0, 0.0)) < 1e-12);
    CHECK(max_abs(p.rho_ss - 0.5 * Mat::Identity(2, 2)) < 1e-12);
    CHECK(max_abs(p.z - diag2(1.0, -1.0)) < 1e-10);
    REQUIRE(p.projections.size() == 2);
    CHECK(max_abs(p.projections[0] - diag2(1.0, 0.0)) < 1e-10);
    CHECK(max_abs(p.projections[1] - diag2(0.0, 1.0)) < 1e-10);
}

TEST_CASE("qubit models: period and stationary state") {
    SpectralProfile p1 = analyze(isometry(model(ModelId::m1), 0.3));
    CHECK(p1.is_irreducible);
    CHECK(p1.period == 2);
    CHECK(max_abs(p1.rho_ss - 0.5 * Mat::Identity(2, 2)) < 1e-10);

    SpectralProfile p3 = analyze(isometry(model(ModelId::m3), 0.2));
    CHECK(p3.is_irreducible);
    CHECK(p3.period == 1);
    // stationarity checked against the direct Kraus sum
    CHECK(max_abs(schrodinger_apply(p3.iso, p3.rho_ss) - p3.rho_ss) < 1e-10);
    CHECK(std::abs(p3.rho_ss.trace() - 1.0) < 1e-12);
}

TEST_CASE("reducible channel is flagged") {
    Isometry id = isometry_from_kraus({Mat::Identity(2, 2)});
    SpectralProfile p = analyze(id);
    CHECK_FALSE(p.is_irreducible);
    CHECK_FALSE(p.verdict.failing_check.empty());
    CHECK_THROWS_AS(require_irreducible(p), Error);
    CHECK_THROWS_AS(ergodic_projection(p, diag2(1.0, 0.0)), Error);
}

TEST_CASE("output states against the brute-force tensor construction") {
    Isometry s = fixture_s();
    Vec e0 = Vec::Zero(2);
    e0(0) = 1.0;
    Mat rho0 = e0 * e0.adjoint();
    // output of S from |0> is deterministic; from 1/2 it is the mixture of 01 and 10
    Mat half = output_state(s, 0.5 * Mat::Identity(2, 2), 2);
    Mat expect = Mat::Zero(4, 4);
    expect(1, 1) = expect(2, 2) = 0.5;
    CHECK(max_abs(half - expect) < 1e-12);
    CHECK(max_abs(output_state(s, rho0, 3) - brute_output_state(s, e0, 3)) < 1e-12);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 3; ++trial) {
        Isometry iso = random_isometry(3, 2, rng);
        Vec phi = Vec::Random(3).normalized();
        Mat got = output_state(iso, phi * phi.adjoint(), 4);
        CHECK(max_abs(got - brute_output_state(iso, phi, 4)) < 1e-11);
    }

    Mat m1 = output_state(isometry(model(ModelId::m1), 0.3), 0.5 * Mat::Identity(2, 2), 4);
    Eigen::SelfAdjointEigenSolver<Mat> es(m1);
    int rank = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 1e-10) ++rank;
    CHECK(rank <= 4);
    CHECK(std::abs(m1.trace() - 1.0) < 1e-12);
    CHECK_THROWS_AS(output_state(s, rho0, 20, 4096), Error);
}

TEST_CASE("ergodic projection") {
    SpectralProfile s = analyze(fixture_s());
    CHECK(max_abs(ergodic_projection(s, diag2(1.0, 0.0)) - diag2(1.0, 0.0)) < 1e-10);
    CHECK(max_abs(ergodic_projection(s, diag2(0.5, 0.5)) - diag2(0.5, 0.5)) < 1e-10);

    std::mt19937_64 rng(12);
    SpectralProfile p = analyze(random_isometry(3, 2, rng));
    REQUIRE(p.is_irreducible);
    Mat rho = random_density(3, rng);
    Mat e = ergodic_projection(p, rho);
    CHECK(max_abs(ergodic_projection(p, e) - e) < 1e-10);
    // Cesaro averages of T^n(rho) approach E(rho) monotonically in windows
    Mat acc = Mat::Zero(3, 3), cur = rho;
    double prev = 1e9;
    for (int n = 1; n <= 256; ++n) {
        acc += cur;
        cur = schrodinger_apply(p.iso, cur);
        if ((n & (n - 1)) == 0) {
            double err = max_abs(acc / n - e);
            CHECK(err <= prev + 1e-12);
            prev = err;
        }
    }
    CHECK(prev < 1e-2);
}

TEST_CASE("periodic projections of a period three chain") {
    std::mt19937_64 rng(13);
    Isometry iso = qmc::test::period_three(rng);
    SpectralProfile p = analyze(iso);
    REQUIRE(p.is_irreducible);
    CHECK(p.period == 3);
    auto proj = periodic_projections(p);
    REQUIRE(proj.size() == 3);
    Mat sum = Mat::Zero(3, 3);
    for (const auto& q : proj) {
        CHECK(max_abs(q * q - q) < 1e-10);
        sum += q;
    }
    CHECK(max_abs(sum - Mat::Identity(3, 3)) < 1e-10);
    // T maps the support of P_a into P_{a+1} (Schrodinger picture)
    for (int a = 0; a < 3; ++a) {
        Mat img = schrodinger_apply(iso, proj[a]);
        bool hit = false;
        for (int b = 0; b < 3; ++b)
            if (max_abs(img - proj[b]) < 1e-10) hit = true;
        CHECK(hit);
    }
}

TEST_CASE("access span") {
    Isometry s = fixture_s();
    Vec e0 = Vec::Zero(2);
    e0(0) = 1.0;
    CHECK(access_span_check(s, e0));
    Isometry id = isometry_from_kraus({Mat::Identity(2, 2)});
    CHECK_FALSE(access_span_check(id, e0));
    CHECK_THROWS_AS(access_span_check(s, Vec::Zero(2)), Error);
}

TEST_CASE("profile invariants on random isometries") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 6; ++trial) {
        int d = 2 + trial % 3;
        Isometry iso = random_isometry(d, 2, rng);
        SpectralProfile p = analyze(iso);
        REQUIRE(p.is_irreducible);
        CHECK(std::abs(p.eigenvalues.front()) == doctest::Approx(1.0).epsilon(1e-10));
        Eigen::SelfAdjointEigenSolver<Mat> es(p.rho_ss);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
        CHECK(max_abs(heisenberg_apply(iso, Mat::Identity(d, d)) - Mat::Identity(d, d)) < 1e-12);

        // relabelling the Kraus operators by a unitary on K leaves the profile unchanged
        Mat u = random_unitary(2, rng);
        std::vector<Mat> ks(2, Mat::Zero(d, d));
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) ks[i] += u(i, j) * iso.kraus(j);
        SpectralProfile q = analyze(isometry_from_kraus(ks));
        CHECK(q.period == p.period);
        CHECK(max_abs(q.rho_ss - p.rho_ss) < 1e-9);
    }
}

TEST_CASE("restricted resolvent solves the Poisson equation") {
    std::mt19937_64 rng(15);
    SpectralProfile p = analyze(random_isometry(2, 3, rng));
    Mat y = random_hermitian(2, rng);
    y -= (p.rho_ss * y).trace() * Mat::Identity(2, 2);
    Mat x = restricted_resolvent(p, y);
    CHECK(max_abs(x - heisenberg_apply(p.iso, x) - y) < 1e-9);
    CHECK(std::abs((p.rho_ss * x).trace()) < 1e-9);
}
