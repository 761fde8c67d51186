#include "support.hpp"

using namespace qmc;
using qmc::test::diag2;
using qmc::test::fixture_s;
using qmc::test::random_identifiable;
using qmc::test::random_tangent;

TEST_CASE("gauge action is a group action") {
    std::mt19937_64 rng(21);
    Isometry iso = random_isometry(3, 2, rng);
    GaugeElement id{1.0, Mat::Identity(3, 3)};
    CHECK(max_abs(act(id, iso).v - iso.v) < 1e-14);
    GaugeElement g{std::polar(1.0, 0.4), random_unitary(3, rng)};
    GaugeElement h{std::polar(1.0, -1.1), random_unitary(3, rng)};
    CHECK(max_abs(act(compose(g, h), iso).v - act(g, act(h, iso)).v) < 1e-12);
    CHECK(max_abs(act(compose(g, inverse(g)), iso).v - iso.v) < 1e-12);
    // explicit formula conj(c) (W (x) 1) V W^*
    Mat direct = std::conj(g.phase) * kron(Mat::Identity(2, 2), g.unitary) * iso.v * g.unitary.adjoint();
    CHECK(max_abs(act(g, iso).v - direct) < 1e-12);
}

TEST_CASE("stabiliser of the shift fixture") {
    SpectralProfile p = analyze(fixture_s());
    Stabiliser st = stabiliser(p);
    CHECK(st.order == 2);
    REQUIRE(st.elements.size() == 2);
    for (const auto& g : st.elements) CHECK(max_abs(act(g, p.iso).v - p.iso.v) < 1e-12);
}

TEST_CASE("equivalence witness") {
    std::mt19937_64 rng(22);
    Isometry iso = random_isometry(3, 2, rng);
    GaugeElement g{std::polar(1.0, 0.7), random_unitary(3, rng)};
    Isometry other = act(g, iso);
    auto w = equivalence_witness(iso, other);
    REQUIRE(w.has_value());
    CHECK(max_abs(act(w->as_action(), iso).v - other.v) < 1e-8);

    auto none = equivalence_witness(isometry(model(ModelId::m1), 0.3), isometry(model(ModelId::m1), 0.32));
    CHECK_FALSE(none.has_value());
    CHECK_THROWS_AS(equivalence_witness(iso, random_isometry(2, 2, rng)), Error);
}

TEST_CASE("gauge directions") {
    std::mt19937_64 rng(23);
    SpectralProfile p = analyze(random_isometry(3, 2, rng));
    TangentVector phase = dmu(p, 1.0, Mat::Zero(3, 3));
    CHECK(max_abs(phase.a - p.iso.v) < 1e-14);

    Mat kgen = random_hermitian(3, rng);
    kgen -= (p.rho_ss * kgen).trace() * Mat::Identity(3, 3);
    TangentVector g = dmu(p, 0.3, kgen);
    Mat direct = 0.3 * p.iso.v - lift(kgen, 2) * p.iso.v + p.iso.v * kgen;
    CHECK(max_abs(g.a - direct) < 1e-12);
    TangentSplit sg = split(p, g);
    CHECK(max_abs(sg.a_id) < 1e-9);
    CHECK(sg.theta == doctest::Approx(0.3).epsilon(1e-8));

    Mat a = random_identifiable(p, rng, 1.0);
    TangentSplit sa = split(p, make_tangent(p.iso, a));
    CHECK(max_abs(sa.a_id - a) < 1e-9);
    CHECK(is_identifiable(p, a));

    // the split reconstructs the tangent
    TangentVector t = make_tangent(p.iso, random_tangent(p.iso, rng));
    TangentSplit st = split(p, t);
    CHECK(max_abs(dmu(p, st.theta, st.kgen).a + st.a_id - t.a) < 1e-9);
    CHECK(st.residual < 1e-9);

    // identifiable_projection is idempotent and complex-linear
    Mat x = random_matrix(6, 3, rng);
    Mat px = identifiable_projection(p, x);
    CHECK(max_abs(identifiable_projection(p, px) - px) < 1e-9);
    CHECK(max_abs(identifiable_projection(p, I_UNIT * x) - I_UNIT * px) < 1e-9);
}

TEST_CASE("make_tangent rejects non-tangent matrices") {
    Isometry s = fixture_s();
    CHECK_THROWS_AS(make_tangent(s, I_UNIT * s.v), Error);
}

TEST_CASE("tangent inner product") {
    std::mt19937_64 rng(24);
    SpectralProfile p = analyze(random_isometry(2, 2, rng));
    Mat a = random_identifiable(p, rng, 1.0);
    Mat b = random_identifiable(p, rng, 1.0);
    cplx ab = tangent_inner(p, a, b);
    CHECK(std::abs(ab - std::conj(tangent_inner(p, b, a))) < 1e-10);
    CHECK(tangent_norm(p, a) == doctest::Approx(1.0));
    // Tr(rho A^*B) on identifiable directions
    CHECK(std::abs(ab - (p.rho_ss * a.adjoint() * b).trace()) < 1e-10);
    CHECK(beta(p, a, b) == doctest::Approx(ab.real()));
    CHECK(sigma(p, a, b) == doctest::Approx(ab.imag()));
    CHECK_THROWS_AS(tangent_inner(p, p.iso.v, b), Error);
}

TEST_CASE("stabiliser acts unitarily on tangents") {
    SpectralProfile p = analyze(fixture_s());
    std::mt19937_64 rng(25);
    Mat a = random_identifiable(p, rng, 1.0);
    Mat b = random_identifiable(p, rng, 0.7);
    Mat ga = stabiliser_tangent_action(p, 1, a);
    Mat gb = stabiliser_tangent_action(p, 1, b);
    CHECK(std::abs(tangent_inner(p, ga, gb) - tangent_inner(p, a, b)) < 1e-10);
    CHECK(max_abs(stabiliser_tangent_action(p, 2, a) - a) < 1e-10);
}

TEST_CASE("shift fixture coordinates") {
    SpectralProfile p = analyze(fixture_s());
    std::mt19937_64 rng(26);
    Mat ca = random_matrix(2, 2, rng), cb = random_matrix(2, 2, rng);
    Mat a = periodic_from_coordinates(0.0, 1.0, ca);
    Mat b = periodic_from_coordinates(0.0, 1.0, cb);
    CHECK(is_identifiable(p, a));
    cplx expect = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) expect += std::conj(ca(i, j)) * cb(i, j);
    CHECK(std::abs(tangent_inner(p, a, b) - 0.5 * expect) < 1e-10);
}

TEST_CASE("mode decomposition") {
    SpectralProfile p = analyze(fixture_s());
    Mat anti = Mat::Zero(2, 2), diag = Mat::Zero(2, 2);
    anti(0, 1) = 1.0;
    anti(1, 0) = 2.0;
    diag(0, 0) = 1.0;
    diag(1, 1) = -1.0;
    Mat a = periodic_from_coordinates(0.0, 1.0, anti);
    Mat b = periodic_from_coordinates(0.0, 1.0, diag);
    auto ma = mode_decompose(p, a);
    auto mb = mode_decompose(p, b);
    REQUIRE(ma.size() == 2);
    CHECK(max_abs(ma[0] - a) < 1e-10);
    CHECK(max_abs(ma[1]) < 1e-10);
    CHECK(max_abs(mb[1] - b) < 1e-10);
    CHECK(max_abs(mb[0]) < 1e-10);
}

TEST_CASE("singular dimension") {
    SingularDimension s = singular_dimension(analyze(fixture_s()));
    CHECK(s.l == 4);
    CHECK(s.d_id == 8);
    CHECK(s.d_nonid == 4);
    CHECK(s.l_numeric == 4);

    std::mt19937_64 rng(27);
    SingularDimension prim = singular_dimension(analyze(random_isometry(2, 2, rng)));
    CHECK(prim.l == 8);
    CHECK(prim.d_id == 8);
    SingularDimension wide = singular_dimension(analyze(random_isometry(2, 3, rng)));
    CHECK(wide.d_id == 16);
    CHECK(wide.d_id + wide.d_nonid == 2 * 2 * 2 * 3 - 4);
}
