#include "qmc/gaussian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmc {

namespace {

int wrap(int a, int p) {
    return ((a % p) + p) % p;
}

cplx coh(const SpectralProfile& profile, const Mat& x, const Mat& y) {
    Mat diff = x - y;
    return std::exp(cplx(-0.5 * beta(profile, diff, diff), sigma(profile, x, y)));
}

void check_point(const SpectralProfile& profile, const ModePoint& x) {
    if (static_cast<int>(x.modes.size()) != profile.period || x.a_id.rows() != profile.iso.v.rows() ||
        x.a_id.cols() != profile.d)
        throw Error(ErrorKind::ProfileMismatch, "mode point built for a different profile");
}

Mat sqrt_gram(const Mat& g, double clip) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(g));
    Eigen::VectorXd ev = es.eigenvalues();
    double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    if (ev.minCoeff() < -clip * scale) {
        std::ostringstream os;
        os << "Gram min eigenvalue " << ev.minCoeff();
        throw Error(ErrorKind::GramNotPSD, os.str());
    }
    Eigen::VectorXd s = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

double deficiency_once(const Mat& ga, const Mat& gb, double clip) {
    Mat sa = sqrt_gram(ga, clip);
    Mat sb = sqrt_gram(gb, clip);
    const Eigen::Index n = ga.rows();
    // projection onto range(sqrt G_B)
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(gb));
    double tol = 1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    Mat pi = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > tol) pi += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Vec a = pi * sa.col(i);
        Vec b = sb.col(i);
        double lost = std::max(0.0, sa.col(i).squaredNorm() - a.squaredNorm());
        double dist = trace_norm(a * a.adjoint() - b * b.adjoint()) + lost;
        worst = std::max(worst, dist);
    }
    return worst;
}

}  // namespace

ModePoint make_mode_point(const SpectralProfile& profile, const Mat& a_id) {
    if (!is_identifiable(profile, a_id)) throw Error(ErrorKind::NotIdentifiable, "V V^* A must vanish");
    return {a_id, mode_decompose(profile, a_id)};
}

cplx coherent_overlap(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y) {
    check_point(profile, x);
    check_point(profile, y);
    return coh(profile, x.a_id, y.a_id);
}

std::vector<cplx> eta_hat(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y) {
    check_point(profile, x);
    check_point(profile, y);
    const int p = profile.period;
    std::vector<cplx> eta(p, 0.0), hat(p, 0.0);
    for (int m = 1; m < p; ++m) eta[m] = (profile.rho_ss * x.modes[m].adjoint() * y.modes[m]).trace();
    for (int kk = 0; kk < p; ++kk)
        for (int m = 0; m < p; ++m) hat[kk] += std::pow(profile.gamma, m * kk) * eta[m];
    return hat;
}

std::vector<cplx> zeta_gram(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y) {
    const int p = profile.period;
    auto hat = eta_hat(profile, x, y);
    Mat xp = x.perp(), yp = y.perp();
    double pref = std::exp(-0.5 * (beta(profile, xp, xp) + beta(profile, yp, yp))) / p;
    std::vector<cplx> out(p, 0.0);
    for (int m = 0; m < p; ++m) {
        for (int kk = 0; kk < p; ++kk) out[m] += std::pow(profile.gamma, -m * kk) * std::exp(hat[kk]);
        out[m] *= pref;
    }
    return out;
}

std::vector<cplx> lambda_k(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y) {
    auto hat = eta_hat(profile, x, y);
    Mat d0 = x.x0() - y.x0();
    Mat xp = x.perp(), yp = y.perp();
    cplx base(-0.5 * beta(profile, d0, d0) - 0.5 * (beta(profile, xp, xp) + beta(profile, yp, yp)),
              sigma(profile, x.x0(), y.x0()));
    std::vector<cplx> out(hat.size());
    for (std::size_t kk = 0; kk < hat.size(); ++kk) out[kk] = base + hat[kk];
    return out;
}

MixtureGram mixture_gram(const SpectralProfile& profile, const std::vector<ModePoint>& points) {
    const int p = profile.period;
    const int n = static_cast<int>(points.size());
    MixtureGram mg{p, n, Mat::Zero(static_cast<Eigen::Index>(p) * n, static_cast<Eigen::Index>(p) * n)};
    for (int al = 0; al < n; ++al) {
        for (int be = 0; be < n; ++be) {
            cplx c0 = coh(profile, points[al].x0(), points[be].x0());
            auto z = zeta_gram(profile, points[al], points[be]);
            for (int m = 0; m < p; ++m) mg.gram(al * p + m, be * p + m) = c0 * z[m];
        }
    }
    return mg;
}

ModePoint stabiliser_image(const SpectralProfile& profile, const ModePoint& x, int m) {
    check_point(profile, x);
    return make_mode_point(profile, stabiliser_tangent_action(profile, m, x.a_id));
}

MixtureGram mixture_gram_orbit(const SpectralProfile& profile, const std::vector<ModePoint>& points) {
    const int p = profile.period;
    const int n = static_cast<int>(points.size());
    std::vector<Mat> orbit;
    for (const auto& pt : points) {
        check_point(profile, pt);
        for (int m = 0; m < p; ++m) orbit.push_back(stabiliser_tangent_action(profile, m, pt.a_id));
    }
    MixtureGram mg{p, n, Mat(static_cast<Eigen::Index>(orbit.size()), static_cast<Eigen::Index>(orbit.size()))};
    for (std::size_t i = 0; i < orbit.size(); ++i)
        for (std::size_t j = 0; j < orbit.size(); ++j)
            mg.gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                coh(profile, orbit[i], orbit[j]) / static_cast<double>(p);
    return mg;
}

double gram_trace_distance(const Mat& joint_gram, int n_first, double clip) {
    Mat s = sqrt_gram(joint_gram, clip);
    const Eigen::Index n = s.rows();
    Mat diff = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double sign = i < n_first ? 1.0 : -1.0;
        diff += sign * s.col(i) * s.col(i).adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(diff), Eigen::EigenvaluesOnly);
    return std::min(1.0, 0.5 * es.eigenvalues().cwiseAbs().sum());
}

double mixture_trace_distance(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y) {
    MixtureGram mg = mixture_gram(profile, {x, y});
    double from_gram = gram_trace_distance(mg.gram, mg.p);

    // Pairing the orbits term by term gives an upper bound with no cancellation:
    // 1/2 ||coh(a) - coh(b)||_1 = sqrt(1 - exp(-beta(a - b, a - b))).
    const int p = profile.period;
    std::vector<Mat> ox, oy;
    for (int m = 0; m < p; ++m) {
        ox.push_back(stabiliser_tangent_action(profile, m, x.a_id));
        oy.push_back(stabiliser_tangent_action(profile, m, y.a_id));
    }
    double paired = 1.0;
    for (int s = 0; s < p; ++s) {
        double sum = 0.0;
        for (int m = 0; m < p; ++m) {
            Mat diff = ox[m] - oy[(m + s) % p];
            sum += std::sqrt(-std::expm1(-beta(profile, diff, diff)));
        }
        paired = std::min(paired, sum / p);
    }
    return std::min(from_gram, paired);
}

bool mixture_equivalent(const SpectralProfile& profile, const ModePoint& x, const ModePoint& y, double tol) {
    check_point(profile, x);
    check_point(profile, y);
    double best = tangent_norm(profile, y.a_id - x.a_id);
    for (int m = 1; m < profile.period; ++m)
        best = std::min(best, tangent_norm(profile, y.a_id - stabiliser_tangent_action(profile, m, x.a_id)));
    return best <= tol;
}

cplx predicted_component_limit(const SpectralProfile& profile, int a, int b, double pi_j_b, int r,
                               const ModePoint& x, const ModePoint& y) {
    const int p = profile.period;
    if (a < 0 || a >= p || b < 0 || b >= p || r < 0 || r >= p)
        throw Error(ErrorKind::IndexOutOfRange, "block indices and residue must lie in [0, p)");
    auto lam = lambda_k(profile, x, y);
    cplx sum = 0.0;
    for (int kk = 0; kk < p; ++kk) sum += std::pow(profile.gamma, wrap((b - a - r) * kk, p)) * std::exp(lam[kk]);
    return pi_j_b * sum;
}

cplx predicted_component_limit_zeta(const SpectralProfile& profile, int a, int b, double pi_j_b, int r,
                                    const ModePoint& x, const ModePoint& y) {
    const int p = profile.period;
    if (a < 0 || a >= p || b < 0 || b >= p || r < 0 || r >= p)
        throw Error(ErrorKind::IndexOutOfRange, "block indices and residue must lie in [0, p)");
    auto z = zeta_gram(profile, x, y);
    return pi_j_b * static_cast<double>(p) * coh(profile, x.x0(), y.x0()) * z[wrap(a + r - b, p)];
}

double gram_deficiency_bound(const Mat& gram_a, const Mat& gram_b, double clip) {
    if (gram_a.rows() != gram_b.rows() || gram_a.rows() != gram_a.cols() || gram_b.rows() != gram_b.cols())
        throw Error(ErrorKind::DimensionMismatch, "families must share the index set");
    double plain = deficiency_once(gram_a, gram_b, clip);

    // rephase B's representatives towards A's Gram; the states are unchanged
    const Eigen::Index n = gram_a.rows();
    Vec ph = Vec::Ones(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double change = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            cplx acc = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i) acc += std::conj(gram_a(i, j)) * gram_b(i, j) * ph(j);
            if (std::abs(acc) < 1e-300) continue;
            cplx next = acc / std::abs(acc);
            change = std::max(change, std::abs(next - ph(i)));
            ph(i) = next;
        }
        if (change < 1e-13) break;
    }
    Mat synced = ph.asDiagonal().toDenseMatrix().adjoint() * gram_b * ph.asDiagonal().toDenseMatrix();
    return std::min(plain, deficiency_once(gram_a, synced, clip));
}

}  // namespace qmc
