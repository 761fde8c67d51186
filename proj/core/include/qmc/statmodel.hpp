#pragma once

#include "qmc/core.hpp"
#include "qmc/ergodic.hpp"
#include "qmc/gauge.hpp"

#include <vector>

namespace qmc {

// X -> V_L^*(X (x) 1)V_R
struct DeformedChannel {
    Isometry left;
    Isometry right;

    Mat apply(const Mat& x) const { return sandwich_apply(left, right, x); }
    double spectral_radius() const;
};

DeformedChannel deformed_channel(const Isometry& left, const Isometry& right);

struct LocalObservable {
    int b = 1;
    Mat q;  // k^b x k^b, basis index i_1 most significant
};

LocalObservable make_observable(const Mat& q, int k, int b_cap = 3, double tol = 1e-12);

// <Psi_{V1}(n)|Psi_{V2}(n)> for the initial vector phi.
cplx joint_overlap(const Isometry& iso1, const Isometry& iso2, const Vec& phi, int n);

// polar(V + i t X); throws RetractionFailure when ill-conditioned.
Isometry retract(const Isometry& base, const Mat& x, double t);

struct QlanPoint {
    cplx overlap;
    cplx prediction;
    double error = 0.0;
};

QlanPoint weak_qlan(const SpectralProfile& profile, const Mat& x, const Mat& y, const Vec& phi, int n,
                    bool phase_correction = true);
double weak_qlan_error(const SpectralProfile& profile, const Mat& x, const Mat& y, const Vec& phi, int n,
                       bool phase_correction = true);

// Curve polar(V + i t A); A tangent (V^*A Hermitian).
double qfi_finite(const TangentVector& a, const Vec& phi, int n);
double qfi_rate(const SpectralProfile& profile, const TangentVector& a, const TangentVector& b);

struct QfiReport {
    std::vector<int> n_values;
    std::vector<double> f_n;
    double rate = 0.0;
    std::vector<double> residuals;  // f_n / n - rate
};

QfiReport qfi_report(const SpectralProfile& profile, const TangentVector& a, const Vec& phi,
                     const std::vector<int>& n_values);

// Eigenbasis of rho_ss adapted to the periodic blocks.
struct StationaryBasis {
    struct Entry {
        int block;
        double weight;
        Vec phi;
    };
    std::vector<Entry> entries;
    std::vector<std::vector<int>> by_block;  // entry indices per block
};

StationaryBasis stationary_basis(const SpectralProfile& profile);

// psi^{ab}_{ij}(n) = sum_i <phi_j^b|K_i phi_i^a> |i>, start phi_i^a, end phi_j^b.
struct ComponentVectors {
    int n = 0;
    StationaryBasis basis;
    std::vector<std::vector<Vec>> psi;  // psi[start entry][end entry]
};

ComponentVectors output_component_vectors(const SpectralProfile& profile, int n, long cap = 4096);

// <phi_s| T^n_{L,R}(|phi_e><phi_e'|) |phi_s'>; equals <psi_{s e, L}|psi_{s' e', R}>.
cplx component_overlap(const Isometry& left, const Isometry& right, const Vec& start, const Vec& start2,
                       const Vec& end, const Vec& end2, int n);

double stationary_mean(const SpectralProfile& profile, const LocalObservable& q, long cap = 4096);
double asymptotic_variance(const SpectralProfile& profile, const LocalObservable& q, long cap = 4096);

// sum_{ij} q_ij K_i^* X K_j over b-step Kraus products.
Mat observable_sandwich(const Isometry& block_iso, const Mat& q, const Mat& x);

}  // namespace qmc
