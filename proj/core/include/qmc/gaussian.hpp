#pragma once

#include "qmc/core.hpp"
#include "qmc/ergodic.hpp"
#include "qmc/gauge.hpp"

#include <vector>

namespace qmc {

struct ModePoint {
    Mat a_id;
    std::vector<Mat> modes;  // A_0 .. A_{p-1}

    const Mat& x0() const { return modes.front(); }
    Mat perp() const { return a_id - modes.front(); }
};

ModePoint make_mode_point(const SpectralProfile& profile, const Mat& a_id);

cplx coherent_overlap(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y);

std::vector<cplx> eta_hat(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y);
// <zeta_m(x_perp)|zeta_m(y_perp)>, m = 0..p-1
std::vector<cplx> zeta_gram(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y);
std::vector<cplx> lambda_k(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y);

// Components |coh(x_0) (x) zeta_m(x_perp)>, m = 0..p-1, per point; index point*p + m.
struct MixtureGram {
    int p = 1;
    int n_points = 0;
    Mat gram;
};

MixtureGram mixture_gram(const SpectralProfile& profile, const std::vector<ModePoint>& points);
// Same states written as (1/p) sum_m |Coh(U^m x)><Coh(U^m x)|.
MixtureGram mixture_gram_orbit(const SpectralProfile& profile, const std::vector<ModePoint>& points);

// 1/2 || sum_i |u_i><u_i| - sum_j |w_j><w_j| ||_1 from the joint Gram of {u} then {w}.
double gram_trace_distance(const Mat& joint_gram, int n_first, double clip = 1e-10);

double mixture_trace_distance(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y);
bool mixture_equivalent(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y, double tol);
ModePoint stabiliser_image(const SpectralProfile& profile, const ModePoint& x, int m);

// Limit of <psi^{ab}_{ij,X}(pl+r)|psi^{ab}_{ij,Y}(pl+r)>: start block a, end block b,
// pi_j^b the stationary weight of the end vector.
cplx predicted_component_limit(const SpectralProfile& profile, int a, int b, double pi_j_b, int r,
                               const ModePoint& x, const ModePoint& y);
// Same limit written through the zeta Gram.
cplx predicted_component_limit_zeta(const SpectralProfile& profile, int a, int b, double pi_j_b, int r,
                                    const ModePoint& x, const ModePoint& y);

// Each family given by the Gram of its rank-one components, same index set.
double gram_deficiency_bound(const Mat& gram_a, const Mat& gram_b, double clip = 1e-10);

}  // namespace qmc
