#pragma once

#include "qmc/core.hpp"
#include "qmc/ergodic.hpp"

#include <optional>
#include <vector>

namespace qmc {

struct GaugeElement {
    cplx phase{1.0, 0.0};
    Mat unitary;
};

GaugeElement compose(const GaugeElement& g, const GaugeElement& h);
GaugeElement inverse(const GaugeElement& g);

// g . V = conj(c) (W (x) 1) V W^*
Isometry act(const GaugeElement& g, const Isometry& iso);
// Induced map on tangent matrices, same formula.
Mat act_tangent(const GaugeElement& g, const Mat& a, int k);

struct TangentVector {
    Isometry base;
    Mat a;
};

// Symmetrises V^*A when its anti-Hermitian part is below tol, rejects above.
TangentVector make_tangent(const Isometry& base, const Mat& a, double tol = 1e-8);

struct TangentSplit {
    double theta = 0.0;
    Mat kgen;
    Mat a_id;
    double residual = 0.0;
};

struct Witness {
    cplx c;
    Mat w;
    // (conj c, W^*) maps iso1 onto iso2 under act().
    GaugeElement as_action() const { return {std::conj(c), w.adjoint()}; }
};

std::optional<Witness> equivalence_witness(const Isometry& iso1, const Isometry& iso2, double tol = 1e-8);

struct Stabiliser {
    int order = 1;
    std::vector<GaugeElement> elements;
};

Stabiliser stabiliser(const SpectralProfile& profile);

// theta V - (K (x) 1) V + V K
TangentVector dmu(const SpectralProfile& profile, double theta, const Mat& kgen, double tol = 1e-10);

TangentSplit split(const SpectralProfile& profile, const TangentVector& a);
// Complex-linear projection P_V = Id - dmu o omega on arbitrary (dk) x d matrices.
Mat identifiable_projection(const SpectralProfile& profile, const Mat& a);

bool is_identifiable(const SpectralProfile& profile, const Mat& a, double tol = 1e-9);

cplx tangent_inner(const SpectralProfile& profile, const Mat& a_id, const Mat& b_id, double tol = 1e-9);
double beta(const SpectralProfile& profile, const Mat& a_id, const Mat& b_id);
double sigma(const SpectralProfile& profile, const Mat& a_id, const Mat& b_id);
double tangent_norm(const SpectralProfile& profile, const Mat& a_id);

// gamma^m (Z^{*m} (x) 1) A Z^m
Mat stabiliser_tangent_action(const SpectralProfile& profile, int m, const Mat& a_id);

// A_m = sum_a (P_{a+1-m} (x) 1) A P_a
std::vector<Mat> mode_decompose(const SpectralProfile& profile, const Mat& a_id);

struct SingularDimension {
    int l = 0;
    int d_id = 0;
    int d_nonid = 0;
    int l_numeric = 0;  // 2 rank_C of the projection onto the m = 0 mode of the identifiable space
};

SingularDimension singular_dimension(const SpectralProfile& profile);

}  // namespace qmc
