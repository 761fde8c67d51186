#pragma once

#include "qmc/core.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qmc {

struct ErgodicTol {
    double peripheral_band = 1e-8;
    double faithfulness_floor = 1e-9;
    double simplicity_gap = 1e-8;
};

struct PeripheralRecord {
    cplx eigenvalue;
    Mat z_power;  // Heisenberg eigen-operator Z^j
    Mat j_op;     // Schrodinger eigen-operator J_j = rho Z^{*j}
};

struct IrreducibilityVerdict {
    bool irreducible = false;
    int fixed_multiplicity = 0;
    double rho_min_eig = 0.0;
    std::string failing_check;  // empty when irreducible
};

struct SpectralProfile {
    int d = 0;
    int k = 0;
    Isometry iso;
    Superoperator heis;
    Superoperator schr;
    std::vector<cplx> eigenvalues;  // of the Schrodinger transfer matrix, by decreasing modulus
    IrreducibilityVerdict verdict;
    bool is_irreducible = false;
    int period = 0;
    cplx gamma{1.0, 0.0};
    Mat rho_ss;
    Mat z;
    std::vector<PeripheralRecord> peripheral;
    std::vector<Mat> projections;
    std::vector<int> block_dims;
    std::vector<std::pair<std::string, double>> residuals;
    ErgodicTol tol;

    // Least-squares inverse of [1 - T; vec(rho^T)^T], used for the
    // resolvent of T restricted to {X : Tr(rho X) = 0}.
    Mat resolvent_pinv;
    double resolvent_cond = 0.0;

    const Mat& projection(int a) const;
    Mat rho_block(int a) const;  // P_a rho P_a
};

SpectralProfile analyze(const Isometry& iso, const ErgodicTol& tol = {});
// Throws NotIrreducible when the verdict is negative.
void require_irreducible(const SpectralProfile& profile);

std::vector<Mat> periodic_projections(const SpectralProfile& profile);
Mat ergodic_projection(const SpectralProfile& profile, const Mat& rho);

// Solves (1 - T) X = Y for X with Tr(rho X) = 0. Y must satisfy Tr(rho Y) = 0.
Mat restricted_resolvent(const SpectralProfile& profile, const Mat& y);

Mat output_state(const Isometry& iso, const Mat& rho_in, int n, long cap = 4096);

bool access_span_check(const Isometry& iso, const Vec& v, int depth_cap = 64, double tol = 1e-10);

}  // namespace qmc
