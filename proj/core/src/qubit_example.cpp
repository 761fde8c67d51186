#include "qmc/qubit_example.hpp"

#include "qmc/statmodel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qmc {

namespace {

constexpr double pi = std::numbers::pi;

Mat rows4(cplx a0, cplx a1, cplx b0, cplx b1, cplx c0, cplx c1, cplx d0, cplx d1) {
    Mat m(4, 2);
    m << a0, a1, b0, b1, c0, c1, d0, d1;
    return m;
}

void check_theta(const QubitModel& m, double theta) {
    if (!m.admissible(theta)) {
        std::ostringstream os;
        os << "theta = " << theta << " outside the parameter interval of " << m.name();
        throw Error(ErrorKind::OutOfInterval, os.str());
    }
}

Mat periodic_hk(cplx w, cplx z) {
    double x = std::sqrt(std::max(0.0, 1.0 - std::norm(w)));
    double y = std::sqrt(std::max(0.0, 1.0 - std::norm(z)));
    return rows4(0.0, x, 0.0, w, y, 0.0, z, 0.0);
}

}  // namespace

bool QubitModel::admissible(double theta) const {
    if (id == ModelId::periodic_point) return true;
    if (!std::isfinite(theta)) return false;
    bool lo_ok = lo_open ? theta > lo : theta >= lo;
    bool hi_ok = hi_open ? theta < hi : theta <= hi;
    return lo_ok && hi_ok;
}

std::string QubitModel::name() const {
    switch (id) {
    case ModelId::m1: return "m1";
    case ModelId::m2: return "m2";
    case ModelId::m3: return "m3";
    case ModelId::periodic_point: return "periodic";
    }
    return "?";
}

QubitModel model(ModelId id) {
    QubitModel m;
    m.id = id;
    switch (id) {
    case ModelId::m1:
        m.lo = 0.25;
        m.hi = 0.5;
        break;
    case ModelId::m2:
        m.lo = -1.0 / std::sqrt(3.0);
        m.hi = 1.0 / std::sqrt(3.0);
        break;
    case ModelId::m3:
        m.lo = 0.0;
        m.lo_open = false;
        m.hi = pi / 2.0;
        break;
    case ModelId::periodic_point:
        m.lo_open = m.hi_open = false;
        break;
    }
    return m;
}

QubitModel periodic_point(cplx w, cplx z) {
    if (std::abs(w) > 1.0 || std::abs(z) > 1.0)
        throw Error(ErrorKind::InvalidInput, "periodic point needs |w|, |z| <= 1");
    QubitModel m = model(ModelId::periodic_point);
    m.w = w;
    m.z = z;
    return m;
}

ModelId parse_model(const std::string& s) {
    if (s == "m1" || s == "1") return ModelId::m1;
    if (s == "m2" || s == "2") return ModelId::m2;
    if (s == "m3" || s == "3") return ModelId::m3;
    if (s == "periodic" || s == "S") return ModelId::periodic_point;
    throw Error(ErrorKind::InvalidInput, "unknown model '" + s + "'");
}

Mat model_matrix(const QubitModel& m, double theta) {
    const cplx i = I_UNIT;
    switch (m.id) {
    case ModelId::m1:
        return rows4(0.0, std::sqrt(1.0 - 4.0 * theta * theta), 0.0, 2.0 * theta, theta, 0.0,
                     i * std::sqrt(1.0 - theta * theta), 0.0);
    case ModelId::m2: {
        double s = std::sqrt(std::max(0.0, 1.0 - 3.0 * theta * theta));
        return rows4(theta, s, i * theta, -theta, -theta, i * theta, s, -theta);
    }
    case ModelId::m3: {
        double c = std::cos(theta), sn = std::sin(theta);
        double r23 = std::sqrt(2.0 / 3.0), r13 = std::sqrt(1.0 / 3.0), r12 = std::sqrt(0.5);
        return rows4(r23 * sn, r13 * c, r13 * sn, -r23 * c, r12 * c, r12 * sn, -r12 * c, r12 * sn);
    }
    case ModelId::periodic_point:
        return periodic_hk(m.w, m.z);
    }
    return {};
}

Isometry isometry(const QubitModel& m, double theta) {
    check_theta(m, theta);
    if (m.id == ModelId::periodic_point) {
        double x = std::sqrt(std::max(0.0, 1.0 - std::norm(m.w)));
        double y = std::sqrt(std::max(0.0, 1.0 - std::norm(m.z)));
        if (std::abs(x * m.z - y * m.w) < 1e-12)
            throw Error(ErrorKind::ReducibleParameters, "sqrt(1-|w|^2) z = sqrt(1-|z|^2) w");
    }
    return from_hk_layout(model_matrix(m, theta), 2, 2);
}

double closed_form_mean(const QubitModel& m, double theta) {
    check_theta(m, theta);
    switch (m.id) {
    case ModelId::m1: return 0.5 - 1.5 * theta * theta;
    case ModelId::m2: return 0.5 * (1.0 - 2.0 * theta * std::sqrt(1.0 - 3.0 * theta * theta));
    case ModelId::m3: return 7.0 / 12.0 - std::cos(theta) * std::cos(theta) / 6.0;
    case ModelId::periodic_point: break;
    }
    throw Error(ErrorKind::InvalidInput, "no closed-form mean for the periodic point");
}

Mat mean_observable(const QubitModel& m) {
    Mat q = Mat::Zero(2, 2);
    if (m.id == ModelId::m2)
        q.setConstant(0.5);
    else
        q(0, 0) = 1.0;
    return q;
}

Mat numeric_derivative(const QubitModel& m, double theta, double h) {
    Mat d = (model_matrix(m, theta + h) - model_matrix(m, theta - h)) / (2.0 * h);
    return hk_to_block(d, 2, 2);
}

GoldenTangent golden_tangent(ModelId id, double theta0) {
    const cplx i = I_UNIT;
    GoldenTangent g;
    g.id = id;
    g.theta0 = theta0;
    const double t = theta0;
    switch (id) {
    case ModelId::m1: {
        double r4 = std::sqrt(1.0 - 4.0 * t * t), r1 = std::sqrt(1.0 - t * t);
        g.a = hk_to_block(rows4(0.0, -4.0 * t / r4, 0.0, 2.0, 1.0, 0.0, -i * t / r1, 0.0), 2, 2);
        g.a_id = hk_to_block(rows4(0.0, -t * (7.0 + 4.0 * t) / r4, 0.0, 2.0, 1.0 - 2.0 * t * t, 0.0,
                                      -i * t * (3.0 - t * t) / r1, 0.0),
                                2, 2);
        break;
    }
    case ModelId::m2: {
        g.theta0 = 0.0;
        g.a = hk_to_block(rows4(1.0, 0.0, i, -1.0, -1.0, i, 0.0, -1.0), 2, 2);
        g.a_id = hk_to_block(rows4(0.0, 0.0, -1.0 + i, -1.0, -1.0, 1.0 + i, 0.0, 0.0), 2, 2);
        Mat b0(2, 2), b1(2, 2);
        b0 << 0.0, -1.0, -1.0, 0.0;
        b1 << -1.0 + i, 0.0, 0.0, 1.0 + i;
        g.modes = {b0, b1};
        g.stab_image = hk_to_block(rows4(0.0, 0.0, 1.0 - i, -1.0, -1.0, -(1.0 + i), 0.0, 0.0), 2, 2);
        break;
    }
    case ModelId::m3: {
        g.theta0 = 0.0;
        double r23 = std::sqrt(2.0 / 3.0), r13 = std::sqrt(1.0 / 3.0), r12 = std::sqrt(0.5);
        g.a = hk_to_block(rows4(r23, 0.0, r13, 0.0, 0.0, r12, 0.0, r12), 2, 2);
        g.a_id = g.a;
        break;
    }
    case ModelId::periodic_point:
        throw Error(ErrorKind::InvalidInput, "no reference tangent for the periodic point");
    }
    return g;
}

namespace {

std::vector<Vec> perp_basis(cplx w, cplx z) {
    double x = std::sqrt(std::max(0.0, 1.0 - std::norm(w)));
    double y = std::sqrt(std::max(0.0, 1.0 - std::norm(z)));
    Vec e0 = Vec::Zero(4), e1 = Vec::Zero(4);
    e0(0) = -std::conj(w);
    e0(1) = x;
    e1(2) = std::conj(z);
    e1(3) = -y;
    return {e0, e1};
}

}  // namespace

Mat periodic_coordinates(cplx w, cplx z, const Mat& a_block) {
    if (a_block.rows() != 4 || a_block.cols() != 2) throw Error(ErrorKind::DimensionMismatch, "expected 4x2");
    Mat ap = block_to_hk(a_block, 2, 2);
    auto e = perp_basis(w, z);
    Mat c(2, 2);
    for (int r = 0; r < 2; ++r)
        for (int j = 0; j < 2; ++j) c(r, j) = e[r].dot(ap.col(j));
    return c;
}

Mat periodic_from_coordinates(cplx w, cplx z, const Mat& coords) {
    if (coords.rows() != 2 || coords.cols() != 2) throw Error(ErrorKind::DimensionMismatch, "expected 2x2");
    auto e = perp_basis(w, z);
    Mat ap = Mat::Zero(4, 2);
    for (int j = 0; j < 2; ++j) ap.col(j) = coords(0, j) * e[0] + coords(1, j) * e[1];
    return hk_to_block(ap, 2, 2);
}

SnrSpectral snr_spectral_data(double theta) {
    QubitModel m3 = model(ModelId::m3);
    SpectralProfile prof = analyze(isometry(m3, theta));
    require_irreducible(prof);
    const Mat& t = prof.heis.matrix;
    Mat t2 = t * t;
    // X -> T^2(X) - Tr(rho X) 1
    Vec one = vec(Mat::Identity(2, 2));
    Vec r = vec(prof.rho_ss.transpose());
    Mat tt = t2 - one * r.transpose();
    Eigen::ComplexEigenSolver<Mat> es(tt, false);
    SnrSpectral out;
    out.theta = theta;
    out.radius = es.eigenvalues().cwiseAbs().maxCoeff();
    double s2 = std::sin(theta) * std::sin(theta);
    out.formula = (1.0 - 2.0 * s2) * (1.0 - 2.0 * s2);
    out.matches_formula = std::abs(out.radius - out.formula) <= 1e-9;
    Mat zop = Mat::Zero(2, 2);
    zop(0, 0) = 1.0;
    zop(1, 1) = -1.0;
    out.tz_residual = max_abs(prof.heis.apply(zop) - (-1.0 + 2.0 * s2) * zop);
    return out;
}

double snr_formula_threshold() {
    double lo = 0.0, hi = -1.0;
    for (double th = 1e-3; th < 0.5; th += 1e-3) {
        if (!snr_spectral_data(th).matches_formula) {
            hi = th;
            break;
        }
        lo = th;
    }
    if (hi < 0.0) return 0.5;
    for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        (snr_spectral_data(mid).matches_formula ? lo : hi) = mid;
    }
    return lo;
}

Vec omega_vector() {
    Vec w = Vec::Zero(4);
    w(0) = std::sqrt(2.0 / 3.0);
    w(3) = -1.0 / std::sqrt(3.0);
    return w;
}

ThetaBarReport verify_theta_bar(ModelId id, double theta_bar, int grid_points) {
    if (id == ModelId::periodic_point || grid_points < 2)
        throw Error(ErrorKind::InvalidInput, "theta-bar check needs m1, m2 or m3 and at least two grid points");
    QubitModel m = model(id);
    ThetaBarReport rep;
    rep.theta_bar = theta_bar;
    rep.grid_points = grid_points;
    rep.irreducible_on_grid = true;
    rep.mean_injective = true;
    const double start = id == ModelId::m1 ? m.lo : 0.0;
    double prev = 0.0;
    int direction = 0;
    for (int g = 1; g <= grid_points; ++g) {
        double th = start + (theta_bar - start) * g / grid_points;
        SpectralProfile prof = analyze(isometry(m, th));
        if (!prof.is_irreducible || (id != ModelId::m1 && prof.period != 1)) rep.irreducible_on_grid = false;
        if (!prof.is_irreducible) {
            rep.mean_injective = false;
            continue;
        }
        double mean = stationary_mean(prof, LocalObservable{1, mean_observable(m)});
        if (g > 1) {
            int dir = mean > prev ? 1 : (mean < prev ? -1 : 0);
            if (dir == 0 || (direction != 0 && dir != direction)) rep.mean_injective = false;
            direction = dir;
        }
        prev = mean;
    }
    return rep;
}

}  // namespace qmc
