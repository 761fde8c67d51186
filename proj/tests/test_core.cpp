#include "support.hpp"

using namespace qmc;
using qmc::test::diag2;
using qmc::test::fixture_s;

TEST_CASE("isometry validation") {
    Mat k = 0.9 * Mat::Identity(2, 2);
    CHECK_THROWS_AS(isometry_from_kraus({k}), Error);
    try {
        isometry_from_kraus({k});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotIsometry);
    }
    Isometry s = fixture_s();
    CHECK(s.d == 2);
    CHECK(s.k == 2);
    CHECK(s.residual() < 1e-15);

    Mat wrong(3, 2);
    wrong.setZero();
    CHECK_THROWS_AS(isometry_from_matrix(wrong, 2, 2), Error);
}

TEST_CASE("H (x) K layout conversion") {
    std::mt19937_64 rng(1);
    Mat m = random_matrix(6, 3, rng);
    CHECK(max_abs(block_to_hk(hk_to_block(m, 3, 2), 3, 2) - m) == 0.0);
    // row h*k + i of the H (x) K matrix is row i*d + h of the block matrix
    Mat b = hk_to_block(m, 3, 2);
    for (int h = 0; h < 3; ++h)
        for (int i = 0; i < 2; ++i) CHECK(max_abs(b.row(i * 3 + h) - m.row(h * 2 + i)) == 0.0);
}

TEST_CASE("channel matrices agree with Kraus sums") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
        Isometry iso = random_isometry(3, 2, rng);
        Mat rho = random_density(3, rng);
        Mat x = random_matrix(3, 3, rng);
        Mat direct_s = Mat::Zero(3, 3), direct_h = Mat::Zero(3, 3);
        for (int i = 0; i < 2; ++i) {
            direct_s += iso.kraus(i) * rho * iso.kraus(i).adjoint();
            direct_h += iso.kraus(i).adjoint() * x * iso.kraus(i);
        }
        CHECK(max_abs(channel(iso, Picture::schrodinger).apply(rho) - direct_s) < 1e-13);
        CHECK(max_abs(channel(iso, Picture::heisenberg).apply(x) - direct_h) < 1e-13);
        CHECK(max_abs(schrodinger_apply(iso, rho) - direct_s) < 1e-13);
        CHECK(max_abs(heisenberg_apply(iso, x) - direct_h) < 1e-13);
        // duality Tr(T_*(rho) X) = Tr(rho T(X))
        CHECK(std::abs((direct_s * x).trace() - (rho * direct_h).trace()) < 1e-12);
        CHECK(std::abs(direct_s.trace() - 1.0) < 1e-12);
    }
}

TEST_CASE("sandwich map") {
    std::mt19937_64 rng(3);
    Isometry a = random_isometry(2, 3, rng);
    Isometry b = random_isometry(3, 3, rng);
    Mat x = random_matrix(2, 3, rng);
    Mat direct = Mat::Zero(2, 3);
    for (int i = 0; i < 3; ++i) direct += a.kraus(i).adjoint() * x * b.kraus(i);
    CHECK(max_abs(sandwich_map(a, b).apply(x) - direct) < 1e-13);
    CHECK(max_abs(sandwich_apply(a, b, x) - direct) < 1e-13);
}

TEST_CASE("vec identity and kron") {
    std::mt19937_64 rng(4);
    Mat a = random_matrix(2, 3, rng), x = random_matrix(3, 4, rng), b = random_matrix(4, 2, rng);
    CHECK((vec(a * x * b) - kron(b.transpose(), a) * vec(x)).norm() < 1e-12);
    CHECK(max_abs(unvec(vec(x), 3, 4) - x) == 0.0);
    Mat k = kron(a, b);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 2; ++c) CHECK(k(i * 4 + r, j * 2 + c) == a(i, j) * b(r, c));
    Mat y = random_matrix(2, 2, rng);
    CHECK(max_abs(lift(y, 3) - kron(Mat::Identity(3, 3), y)) == 0.0);
}

TEST_CASE("partial trace") {
    std::mt19937_64 rng(5);
    Mat a = random_density(2, rng), b = random_density(3, rng);
    Mat ab = kron(a, b);
    CHECK(max_abs(partial_trace(ab, 2, 3, Factor::second) - a) < 1e-13);
    CHECK(max_abs(partial_trace(ab, 2, 3, Factor::first) - b) < 1e-13);
}

TEST_CASE("matrix helpers") {
    std::mt19937_64 rng(6);
    Mat h = random_hermitian(3, rng);
    Mat psd = h * h;
    Mat r = matrix_sqrt_psd(psd);
    CHECK(max_abs(r * r - psd) < 1e-10);
    Mat u = random_unitary(3, rng);
    CHECK(max_abs(u.adjoint() * u - Mat::Identity(3, 3)) < 1e-12);
    CHECK(trace_norm(diag2(1.0, -2.0)) == doctest::Approx(3.0));
    double smin = 0.0;
    Mat p = polar_factor(random_matrix(4, 2, rng), &smin);
    CHECK(max_abs(p.adjoint() * p - Mat::Identity(2, 2)) < 1e-12);
    CHECK(smin > 0.0);
    CHECK(max_abs(hermitian_part(h) - h) < 1e-15);
    CHECK_THROWS_AS(make_density(diag2(1.0, -0.5)), Error);
    CHECK(make_density(diag2(0.25, 0.75)).dim == 2);
}

TEST_CASE("multi-index Kraus products") {
    std::mt19937_64 rng(7);
    Isometry iso = random_isometry(2, 3, rng);
    auto ks = multi_kraus(iso, 2);
    REQUIRE(ks.size() == 9);
    // index i_1 * k + i_2 holds K_{i_2} K_{i_1}
    CHECK(max_abs(ks[1 * 3 + 2] - iso.kraus(2) * iso.kraus(1)) < 1e-14);
    Isometry blk = block_isometry(iso, 3);
    CHECK(blk.k == 27);
    CHECK(blk.residual() < 1e-12);
    CHECK_THROWS_AS(multi_kraus(iso, 9, 4096), Error);
    CHECK(ipow(3, 4) == 81);
}

TEST_CASE("error kinds have names") {
    CHECK(std::string(kind_name(ErrorKind::NotIrreducible)) == "NotIrreducible");
    CHECK(std::string(kind_name(ErrorKind::SizeCap)) == "SizeCap");
    Error e(ErrorKind::NotTangent, "x");
    CHECK(e.detail() == "x");
}
