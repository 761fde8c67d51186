#pragma once

#include "qmc/core.hpp"
#include "qmc/ergodic.hpp"

#include <string>
#include <vector>

namespace qmc {

enum class ModelId { m1, m2, m3, periodic_point };

struct QubitModel {
    ModelId id = ModelId::m1;
    cplx w{0.0, 0.0};  // periodic point only
    cplx z{1.0, 0.0};
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = true;
    bool hi_open = true;

    bool admissible(double theta) const;
    std::string name() const;
};

QubitModel model(ModelId id);
QubitModel periodic_point(cplx w, cplx z);
ModelId parse_model(const std::string& s);

Mat model_matrix(const QubitModel& m, double theta);
Isometry isometry(const QubitModel& m, double theta);
double closed_form_mean(const QubitModel& m, double theta);
// Observable whose stationary mean is the closed form: |0><0|, |+><+|, |0><0|.
Mat mean_observable(const QubitModel& m);

// Central difference of V(theta) in block layout.
Mat numeric_derivative(const QubitModel& m, double theta, double h = 1e-5);

struct GoldenTangent {
    ModelId id{};
    double theta0 = 0.0;
    Mat a;                   // reference dV/dtheta, block layout (empty when absent)
    Mat a_id;                // reference identifiable part, block layout
    std::vector<Mat> modes;  // reference 2x2 mode coordinates (m2: B0, B1)
    Mat stab_image;          // reference U(g) A_id (m2)
};

GoldenTangent golden_tangent(ModelId id, double theta0 = 0.3);

// Coordinates a_ij = <i (x) v_i^perp|A|j> at the periodic point (w, z).
Mat periodic_coordinates(cplx w, cplx z, const Mat& a_block);
Mat periodic_from_coordinates(cplx w, cplx z, const Mat& coords);

struct SnrSpectral {
    double theta = 0.0;
    double radius = 0.0;
    double formula = 0.0;
    bool matches_formula = false;
    double tz_residual = 0.0;  // || T(Z) - (-1 + 2 sin^2) Z ||
};

// Spectrum of T^2 - Tr(rho .) 1 for model 3.
SnrSpectral snr_spectral_data(double theta);
// Largest theta below which the radius follows (1 - 2 sin^2)^2.
double snr_formula_threshold();

// Model-3 two-block effect P_omega, omega = (sqrt2 |00> - |11>)/sqrt3.
Vec omega_vector();

struct ThetaBarReport {
    double theta_bar = 0.0;
    bool irreducible_on_grid = false;
    bool mean_injective = false;
    int grid_points = 0;
};

ThetaBarReport verify_theta_bar(ModelId id, double theta_bar, int grid_points = 50);

}  // namespace qmc
