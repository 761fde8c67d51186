#pragma once

#include "qmc/core.hpp"
#include "qmc/ergodic.hpp"
#include "qmc/gauge.hpp"
#include "qmc/qubit_example.hpp"

#include <doctest.h>

namespace qmc::test {

inline Isometry fixture_s() {
    Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
    k0(0, 1) = 1.0;
    k1(1, 0) = 1.0;
    return isometry_from_kraus({k0, k1});
}

inline Mat diag2(cplx a, cplx b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

// Psi(n) = sum_i |i_1 ... i_n> (x) K_{i_n}...K_{i_1} phi, built by applying V one unit at a time.
inline Vec brute_output_vector(const Isometry& iso, const Vec& phi, int n) {
    Vec psi = phi;
    long units = 1;
    for (int step = 0; step < n; ++step) {
        Vec next(units * iso.k * iso.d);
        for (long j = 0; j < units; ++j) {
            Vec h = psi.segment(j * iso.d, iso.d);
            for (int i = 0; i < iso.k; ++i) next.segment((j * iso.k + i) * iso.d, iso.d) = iso.kraus(i) * h;
        }
        psi = next;
        units *= iso.k;
    }
    return psi;
}

// Density matrix of the output units for a pure input, tracing out H.
inline Mat brute_output_state(const Isometry& iso, const Vec& phi, int n) {
    Vec psi = brute_output_vector(iso, phi, n);
    const long units = psi.size() / iso.d;
    Mat out = Mat::Zero(units, units);
    for (long a = 0; a < units; ++a)
        for (long b = 0; b < units; ++b) out(a, b) = psi.segment(b * iso.d, iso.d).dot(psi.segment(a * iso.d, iso.d));
    return out;
}

inline Mat random_identifiable(const SpectralProfile& p, std::mt19937_64& rng, double norm) {
    Mat a = identifiable_projection(p, random_matrix(p.d * p.k, p.d, rng));
    return a * (norm / tangent_norm(p, a));
}

inline Mat random_tangent(const Isometry& iso, std::mt19937_64& rng) {
    Mat h = random_hermitian(iso.d, rng);
    Mat perp = Mat::Identity(iso.d * iso.k, iso.d * iso.k) - iso.v * iso.v.adjoint();
    return iso.v * h + perp * random_matrix(iso.d * iso.k, iso.d, rng);
}

inline Isometry period_three(std::mt19937_64& rng) {
    Mat shift = Mat::Zero(3, 3);
    shift(1, 0) = shift(2, 1) = shift(0, 2) = 1.0;
    std::uniform_real_distribution<double> ud(0.2, 1.3);
    Mat d0 = Mat::Zero(3, 3), d1 = Mat::Zero(3, 3);
    for (int j = 0; j < 3; ++j) {
        double t = ud(rng);
        d0(j, j) = std::polar(std::cos(t), ud(rng));
        d1(j, j) = std::polar(std::sin(t), ud(rng));
    }
    return isometry_from_kraus({shift * d0, shift * d1});
}

}  // namespace qmc::test
