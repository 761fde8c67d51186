#include "support.hpp"

#include "qmc/statmodel.hpp"

using namespace qmc;
using qmc::test::brute_output_state;
using qmc::test::brute_output_vector;
using qmc::test::diag2;
using qmc::test::fixture_s;
using qmc::test::random_identifiable;
using qmc::test::random_tangent;

namespace {

// E_q(X) = sum_ij q_ij K_i^* X K_j for a single-site q.
Mat e_q(const Isometry& iso, const Mat& q, const Mat& x) {
    Mat out = Mat::Zero(iso.d, iso.d);
    for (int i = 0; i < iso.k; ++i)
        for (int j = 0; j < iso.k; ++j) out += q(i, j) * iso.kraus(i).adjoint() * x * iso.kraus(j);
    return out;
}

// Var(sum_{t<=N} q_t) / N for the stationary chain, from direct covariances.
double fejer_variance(const Isometry& iso, const Mat& rho, const Mat& q, int big_n) {
    const Mat one = Mat::Identity(iso.d, iso.d);
    double m = (rho * e_q(iso, q, one)).trace().real();
    Mat qc = q - m * Mat::Identity(iso.k, iso.k);
    double total = (rho * e_q(iso, qc * qc, one)).trace().real();
    Mat x = e_q(iso, qc, one);
    for (int s = 1; s < big_n; ++s) {
        double cs = (rho * e_q(iso, qc, x)).trace().real();
        total += 2.0 * (1.0 - static_cast<double>(s) / big_n) * cs;
        x = heisenberg_apply(iso, x);
    }
    return total;
}

Isometry polar_curve(const Isometry& base, const Mat& a, double t) {
    Eigen::JacobiSVD<Mat> svd(base.v + I_UNIT * t * a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return Isometry{base.d, base.k, svd.matrixU() * svd.matrixV().adjoint()};
}

}  // namespace

TEST_CASE("joint overlap against brute-force vectors") {
    std::mt19937_64 rng(31);
    Isometry a = random_isometry(2, 2, rng);
    Isometry b = random_isometry(2, 2, rng);
    Vec phi = Vec::Random(2).normalized();
    for (int n = 1; n <= 5; ++n) {
        cplx brute = brute_output_vector(a, phi, n).dot(brute_output_vector(b, phi, n));
        CHECK(std::abs(joint_overlap(a, b, phi, n) - brute) < 1e-12);
        CHECK(std::abs(joint_overlap(a, a, phi, n) - 1.0) < 1e-12);
    }
    CHECK_THROWS_AS(joint_overlap(a, random_isometry(3, 2, rng), phi, 2), Error);
}

TEST_CASE("finite-n QFI against fidelity finite differences") {
    std::mt19937_64 rng(32);
    Isometry iso = random_isometry(2, 2, rng);
    Vec phi = Vec::Random(2).normalized();
    for (int trial = 0; trial < 3; ++trial) {
        TangentVector tv = make_tangent(iso, random_tangent(iso, rng));
        const int n = 4;
        const double t = 1e-4;
        cplx ov = brute_output_vector(polar_curve(iso, tv.a, -t), phi, n)
                      .dot(brute_output_vector(polar_curve(iso, tv.a, t), phi, n));
        double fd = (1.0 - std::norm(ov)) / (t * t);
        double f = qfi_finite(tv, phi, n);
        CHECK(f >= 0.0);
        CHECK(f == doctest::Approx(fd).epsilon(1e-2));
    }
    // a pure phase carries no information
    TangentVector phase = make_tangent(iso, iso.v);
    CHECK(std::abs(qfi_finite(phase, phi, 50)) < 1e-9);
}

TEST_CASE("QFI rate") {
    std::mt19937_64 rng(33);
    SpectralProfile p = analyze(random_isometry(2, 2, rng));
    Mat a = random_identifiable(p, rng, 1.0);
    TangentVector tv = make_tangent(p.iso, a);
    CHECK(qfi_rate(p, tv, tv) == doctest::Approx(4.0 * (p.rho_ss * a.adjoint() * a).trace().real()));
    Mat kgen = random_hermitian(2, rng);
    kgen -= (p.rho_ss * kgen).trace() * Mat::Identity(2, 2);
    TangentVector gauge = dmu(p, 0.4, kgen);
    CHECK(std::abs(qfi_rate(p, gauge, gauge)) < 1e-9);

    Vec phi = Vec::Zero(2);
    phi(0) = 1.0;
    QfiReport rep = qfi_report(p, tv, phi, {100, 200, 400});
    REQUIRE(rep.f_n.size() == 3);
    CHECK(std::abs(rep.residuals[2]) < std::abs(rep.residuals[0]) + 1e-9);
    CHECK(rep.f_n[2] / 400 == doctest::Approx(rep.rate).epsilon(2e-2));
}

TEST_CASE("stationary means") {
    Mat p0 = diag2(1.0, 0.0);
    SpectralProfile m1 = analyze(isometry(model(ModelId::m1), 0.3));
    CHECK(stationary_mean(m1, make_observable(p0, 2)) == doctest::Approx(0.365).epsilon(1e-12));
    SpectralProfile m3 = analyze(isometry(model(ModelId::m3), 0.0));
    CHECK(stationary_mean(m3, make_observable(p0, 2)) == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
    CHECK(stationary_mean(m1, make_observable(Mat::Identity(2, 2), 2)) == doctest::Approx(1.0));
    // a two-site observable with q = q1 (x) 1 has the single-site mean
    Mat q2 = kron(p0, Mat::Identity(2, 2));
    CHECK(stationary_mean(m1, make_observable(q2, 2)) == doctest::Approx(0.365).epsilon(1e-12));
    CHECK_THROWS_AS(make_observable(Mat::Identity(3, 3), 2), Error);
    Mat nh = Mat::Zero(2, 2);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(make_observable(nh, 2), Error);
}

TEST_CASE("asymptotic variance against the Fejer sum") {
    std::mt19937_64 rng(34);
    Mat q = random_hermitian(2, rng);
    for (int trial = 0; trial < 3; ++trial) {
        SpectralProfile p = analyze(random_isometry(2 + trial, 2, rng));
        double sigma2 = asymptotic_variance(p, make_observable(q, 2));
        CHECK(sigma2 >= 0.0);
        CHECK(sigma2 == doctest::Approx(fejer_variance(p.iso, p.rho_ss, q, 20000)).epsilon(1e-3));
        // shifting q by a constant does not change the variance
        Mat shifted = q + 3.0 * Mat::Identity(2, 2);
        CHECK(asymptotic_variance(p, make_observable(shifted, 2)) == doctest::Approx(sigma2).epsilon(1e-9));
    }
    SpectralProfile m1 = analyze(isometry(model(ModelId::m1), 0.3));
    Mat p0 = diag2(1.0, 0.0);
    CHECK(asymptotic_variance(m1, make_observable(p0, 2)) ==
          doctest::Approx(fejer_variance(m1.iso, m1.rho_ss, p0, 20000)).epsilon(1e-3));

    SpectralProfile s = analyze(fixture_s());
    CHECK(std::abs(asymptotic_variance(s, make_observable(p0, 2))) < 1e-10);
    CHECK(std::abs(asymptotic_variance(m1, make_observable(Mat::Identity(2, 2), 2))) < 1e-10);
}

TEST_CASE("finite-N Fejer sum equals the brute-force variance") {
    std::mt19937_64 rng(35);
    SpectralProfile p = analyze(random_isometry(2, 2, rng));
    Mat q = random_hermitian(2, rng);
    const int n = 6;
    Eigen::SelfAdjointEigenSolver<Mat> es(p.rho_ss);
    Mat out = Mat::Zero(64, 64);
    for (int j = 0; j < 2; ++j)
        out += es.eigenvalues()(j) * brute_output_state(p.iso, es.eigenvectors().col(j), n);
    Mat total = Mat::Zero(64, 64);
    for (int t = 0; t < n; ++t)
        total += kron(kron(Mat::Identity(ipow(2, t), ipow(2, t)), q), Mat::Identity(ipow(2, n - 1 - t), ipow(2, n - 1 - t)));
    double mean = (out * total).trace().real();
    double var = (out * total * total).trace().real() - mean * mean;
    CHECK(var / n == doctest::Approx(fejer_variance(p.iso, p.rho_ss, q, n)).epsilon(1e-10));
}

TEST_CASE("component vectors") {
    SpectralProfile p = analyze(fixture_s());
    ComponentVectors cv = output_component_vectors(p, 3);
    const auto& entries = cv.basis.entries;
    REQUIRE(entries.size() == 2);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t e = 0; e < 2; ++e)
            for (std::size_t s2 = 0; s2 < 2; ++s2)
                for (std::size_t e2 = 0; e2 < 2; ++e2) {
                    cplx direct = cv.psi[s][e].dot(cv.psi[s2][e2]);
                    cplx via = component_overlap(p.iso, p.iso, entries[s].phi, entries[s2].phi, entries[e].phi,
                                                 entries[e2].phi, 3);
                    CHECK(std::abs(direct - via) < 1e-12);
                }
    // the shift maps block a to block a+1: odd n connects different blocks only
    for (std::size_t s = 0; s < 2; ++s) {
        int bs = entries[s].block;
        for (std::size_t e = 0; e < 2; ++e)
            if (entries[e].block == bs) CHECK(cv.psi[s][e].norm() < 1e-12);
    }
    CHECK_THROWS_AS(output_component_vectors(p, 9), Error);
}

TEST_CASE("retraction") {
    std::mt19937_64 rng(36);
    Isometry iso = random_isometry(2, 2, rng);
    Mat x = random_tangent(iso, rng);
    Isometry r = retract(iso, x, 0.1);
    CHECK(r.residual() < 1e-12);
    CHECK(max_abs(r.v - polar_curve(iso, x, 0.1).v) < 1e-10);
    CHECK_THROWS_AS(retract(iso, I_UNIT * iso.v, 1.0), Error);
}
