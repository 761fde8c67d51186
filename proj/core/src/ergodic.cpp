#include "qmc/ergodic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qmc {

namespace {

constexpr double kRootMatchTol = 1e-6;
constexpr double kLabelTol = 1e-8;
constexpr double kResolventCondMax = 1e12;

// Right singular vector for the smallest singular value of m.
Vec null_vector(const Mat& m, Eigen::VectorXd* singular = nullptr) {
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
    if (singular) *singular = svd.singularValues();
    return svd.matrixV().col(m.cols() - 1);
}

Mat matrix_power(const Mat& m, int e) {
    Mat r = Mat::Identity(m.rows(), m.cols());
    for (int i = 0; i < e; ++i) r = r * m;
    return r;
}

std::vector<Mat> projections_from_z(const Mat& z, int p, cplx gamma) {
    const auto d = z.rows();
    std::vector<Mat> zp(p);
    zp[0] = Mat::Identity(d, d);
    for (int j = 1; j < p; ++j) zp[j] = zp[j - 1] * z;
    std::vector<Mat> proj(p);
    for (int a = 0; a < p; ++a) {
        Mat pa = Mat::Zero(d, d);
        for (int j = 0; j < p; ++j) pa += std::pow(gamma, -a * j) * zp[j];
        proj[a] = hermitian_part(pa / static_cast<double>(p));
    }
    return proj;
}

bool lex_greater(const Mat& a, const Mat& b) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double x = a(i, i).real(), y = b(i, i).real();
        if (x > y + 1e-9) return true;
        if (x < y - 1e-9) return false;
    }
    return false;
}

}  // namespace

const Mat& SpectralProfile::projection(int a) const {
    if (a < 0 || a >= period) throw Error(ErrorKind::IndexOutOfRange, "projection index");
    return projections[a];
}

Mat SpectralProfile::rho_block(int a) const {
    const Mat& pa = projection(a);
    return pa * rho_ss * pa;
}

SpectralProfile analyze(const Isometry& iso, const ErgodicTol& tol) {
    SpectralProfile prof;
    prof.d = iso.d;
    prof.k = iso.k;
    prof.iso = iso;
    prof.tol = tol;
    prof.heis = channel(iso, Picture::heisenberg);
    prof.schr = channel(iso, Picture::schrodinger);
    const int d = iso.d;
    const int d2 = d * d;

    Eigen::ComplexEigenSolver<Mat> ces(prof.schr.matrix, false);
    prof.eigenvalues.assign(ces.eigenvalues().data(), ces.eigenvalues().data() + d2);
    std::sort(prof.eigenvalues.begin(), prof.eigenvalues.end(),
              [](cplx a, cplx b) { return std::abs(a) > std::abs(b); });

    Eigen::VectorXd sv;
    Vec fixed = null_vector(prof.schr.matrix - Mat::Identity(d2, d2), &sv);
    int mult = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) < tol.simplicity_gap) ++mult;
    prof.verdict.fixed_multiplicity = mult;

    Mat x = unvec(fixed, d, d);
    cplx tr = x.trace();
    if (std::abs(tr) < 1e-12) {
        Eigen::Index imax;
        x.diagonal().cwiseAbs().maxCoeff(&imax);
        tr = x(imax, imax);
    }
    x *= std::conj(tr) / std::abs(tr);
    Mat rho = hermitian_part(x);
    rho /= rho.trace().real();
    prof.rho_ss = rho;
    Eigen::SelfAdjointEigenSolver<Mat> rs(rho);
    prof.verdict.rho_min_eig = rs.eigenvalues().minCoeff();

    if (mult != 1) {
        std::ostringstream os;
        os << "eigenvalue 1 has multiplicity " << mult;
        prof.verdict.failing_check = os.str();
    } else if (prof.verdict.rho_min_eig < tol.faithfulness_floor) {
        std::ostringstream os;
        os << "stationary state not faithful, min eigenvalue " << prof.verdict.rho_min_eig;
        prof.verdict.failing_check = os.str();
    } else {
        prof.verdict.irreducible = true;
    }
    prof.is_irreducible = prof.verdict.irreducible;
    if (!prof.is_irreducible) return prof;

    std::vector<cplx> periph;
    for (cplx ev : prof.eigenvalues)
        if (std::abs(ev) >= 1.0 - tol.peripheral_band) periph.push_back(ev);
    const int p = static_cast<int>(periph.size());
    {
        std::vector<int> hits(p, 0);
        for (cplx ev : periph) {
            double turns = std::arg(ev) / (2.0 * std::numbers::pi) * p;
            long j = std::lround(turns);
            cplx root = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / p);
            int jj = static_cast<int>(((j % p) + p) % p);
            if (std::abs(ev - root) > kRootMatchTol) {
                std::ostringstream os;
                os << "peripheral eigenvalue " << ev.real() << (ev.imag() < 0 ? "" : "+") << ev.imag()
                   << "i is not a " << p << "-th root of unity";
                throw Error(ErrorKind::PeripheralMismatch, os.str());
            }
            ++hits[jj];
        }
        for (int h : hits)
            if (h != 1) throw Error(ErrorKind::PeripheralMismatch, "peripheral set is not a cyclic group");
    }
    prof.period = p;
    prof.gamma = std::polar(1.0, 2.0 * std::numbers::pi / p);
    const cplx g = prof.gamma;

    if (p == 1) {
        prof.z = Mat::Identity(d, d);
        prof.projections = {Mat::Identity(d, d)};
    } else {
        Mat m = unvec(null_vector(prof.heis.matrix - g * Mat::Identity(d2, d2)), d, d);
        Eigen::ComplexEigenSolver<Mat> mes(m, false);
        cplx lam = mes.eigenvalues()(0);
        Mat best_z;
        std::vector<Mat> best_p;
        for (int j = 0; j < p; ++j) {
            Mat zc = polar_factor(m / (lam * std::pow(g, j)));
            auto pc = projections_from_z(zc, p, g);
            if (best_p.empty() || lex_greater(pc[0], best_p[0])) {
                best_z = zc;
                best_p = pc;
            }
        }
        prof.projections = best_p;
        prof.z = Mat::Zero(d, d);
        for (int a = 0; a < p; ++a) prof.z += std::pow(g, a) * prof.projections[a];
    }

    auto& res = prof.residuals;
    Mat sum = Mat::Zero(d, d);
    double idem = 0.0, cyc = 0.0, comm = 0.0, tr_dev = 0.0;
    for (int a = 0; a < p; ++a) {
        const Mat& pa = prof.projections[a];
        sum += pa;
        idem = std::max(idem, max_abs(pa * pa - pa));
        cyc = std::max(cyc, max_abs(prof.heis.apply(prof.projections[(a + 1) % p]) - pa));
        comm = std::max(comm, max_abs(rho * pa - pa * rho));
        tr_dev = std::max(tr_dev, std::abs((rho * pa).trace().real() - 1.0 / p));
        prof.block_dims.push_back(static_cast<int>(std::lround(pa.trace().real())));
    }
    res.emplace_back("sum_projections", max_abs(sum - Mat::Identity(d, d)));
    res.emplace_back("idempotence", idem);
    res.emplace_back("cyclic_relation", cyc);
    res.emplace_back("z_eigen", max_abs(prof.heis.apply(prof.z) - g * prof.z));
    res.emplace_back("stationarity", max_abs(prof.schr.apply(rho) - rho));
    res.emplace_back("rho_commutes_projections", comm);
    res.emplace_back("block_trace", tr_dev);
    if (cyc > kLabelTol) {
        std::ostringstream os;
        os << "T(P_{a+1}) = P_a violated by " << cyc;
        throw Error(ErrorKind::LabelingFailure, os.str());
    }

    for (int j = 0; j < p; ++j) {
        Mat zj = matrix_power(prof.z, j);
        prof.peripheral.push_back({std::pow(g, j), zj, rho * zj.adjoint()});
    }

    Mat aug(d2 + 1, d2);
    aug.topRows(d2) = Mat::Identity(d2, d2) - prof.heis.matrix;
    aug.row(d2) = vec(rho.transpose()).transpose();
    Eigen::JacobiSVD<Mat> svd(aug, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    prof.resolvent_cond = s(0) / s(s.size() - 1);
    Eigen::VectorXd sinv = s.cwiseInverse();
    prof.resolvent_pinv = svd.matrixV() * sinv.asDiagonal() * svd.matrixU().adjoint();
    return prof;
}

void require_irreducible(const SpectralProfile& profile) {
    if (!profile.is_irreducible)
        throw Error(ErrorKind::NotIrreducible, profile.verdict.failing_check);
}

std::vector<Mat> periodic_projections(const SpectralProfile& profile) {
    require_irreducible(profile);
    return profile.projections;
}

Mat ergodic_projection(const SpectralProfile& profile, const Mat& rho) {
    require_irreducible(profile);
    Mat out = Mat::Zero(profile.d, profile.d);
    for (int a = 0; a < profile.period; ++a)
        out += (rho * profile.projections[a]).trace() * profile.rho_block(a);
    return static_cast<double>(profile.period) * out;
}

Mat restricted_resolvent(const SpectralProfile& profile, const Mat& y) {
    require_irreducible(profile);
    if (profile.resolvent_cond > kResolventCondMax) {
        std::ostringstream os;
        os << "condition number " << profile.resolvent_cond;
        throw Error(ErrorKind::SingularResolvent, os.str());
    }
    const int d = profile.d;
    Vec rhs(d * d + 1);
    rhs.head(d * d) = vec(y);
    rhs(d * d) = 0.0;
    return unvec(profile.resolvent_pinv * rhs, d, d);
}

Mat output_state(const Isometry& iso, const Mat& rho_in, int n, long cap) {
    if (rho_in.rows() != iso.d || rho_in.cols() != iso.d)
        throw Error(ErrorKind::DimensionMismatch, "input state dimension");
    auto ks = multi_kraus(iso, n, cap);
    Mat sq = matrix_sqrt_psd(rho_in, 1e-8);
    const auto d2 = static_cast<Eigen::Index>(iso.d) * iso.d;
    Mat w(static_cast<Eigen::Index>(ks.size()), d2);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        Mat ki = ks[i] * sq;
        w.row(static_cast<Eigen::Index>(i)) = vec(ki).transpose();
    }
    return w * w.adjoint();
}

bool access_span_check(const Isometry& iso, const Vec& v, int depth_cap, double tol) {
    if (v.size() != iso.d) throw Error(ErrorKind::DimensionMismatch, "vector dimension");
    if (v.norm() == 0.0) throw Error(ErrorKind::InvalidInput, "zero vector");
    std::vector<Vec> basis{v.normalized()};
    std::vector<Vec> frontier = basis;
    const auto ks = iso.kraus_list();
    for (int depth = 0; depth < depth_cap && static_cast<int>(basis.size()) < iso.d; ++depth) {
        std::vector<Vec> added;
        for (const auto& f : frontier) {
            for (const auto& kr : ks) {
                Vec w = kr * f;
                for (int pass = 0; pass < 2; ++pass)
                    for (const auto& b : basis) w -= b.dot(w) * b;
                if (w.norm() > tol) {
                    basis.push_back(w.normalized());
                    added.push_back(basis.back());
                    if (static_cast<int>(basis.size()) == iso.d) return true;
                }
            }
        }
        if (added.empty()) return false;
        frontier = std::move(added);
    }
    return static_cast<int>(basis.size()) == iso.d;
}

}  // namespace qmc
