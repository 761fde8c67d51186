#include "qmc/statmodel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmc {

double DeformedChannel::spectral_radius() const {
    SandwichMap s = sandwich_map(left, right);
    Eigen::ComplexEigenSolver<Mat> es(s.matrix, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

DeformedChannel deformed_channel(const Isometry& left, const Isometry& right) {
    if (left.d != right.d) throw Error(ErrorKind::DimensionMismatch, "system dimensions differ");
    if (left.k != right.k) throw Error(ErrorKind::UnitDimMismatch, "unit dimensions differ");
    return {left, right};
}

LocalObservable make_observable(const Mat& q, int k, int b_cap, double tol) {
    long dim = k;
    int b = 1;
    while (dim < q.rows() && b < b_cap) {
        dim *= k;
        ++b;
    }
    if (q.rows() != q.cols() || q.rows() != dim)
        throw Error(ErrorKind::DimensionMismatch, "observable must act on k^b with b within cap");
    if (max_abs(q - q.adjoint()) > tol) throw Error(ErrorKind::InvalidInput, "observable not Hermitian");
    return {b, hermitian_part(q)};
}

cplx joint_overlap(const Isometry& iso1, const Isometry& iso2, const Vec& phi, int n) {
    if (iso1.d != iso2.d || phi.size() != iso1.d)
        throw Error(ErrorKind::DimensionMismatch, "overlap dimensions");
    Mat x = Mat::Identity(iso1.d, iso1.d);
    for (int s = 0; s < n; ++s) x = sandwich_apply(iso1, iso2, x);
    return phi.dot(x * phi);
}

Isometry retract(const Isometry& base, const Mat& x, double t) {
    if (x.rows() != base.v.rows() || x.cols() != base.d)
        throw Error(ErrorKind::DimensionMismatch, "tangent matrix shape");
    double smin = 0.0;
    Mat u = polar_factor(base.v + I_UNIT * t * x, &smin);
    if (smin < 1e-6) {
        std::ostringstream os;
        os << "V + itX nearly rank deficient, min singular value " << smin;
        throw Error(ErrorKind::RetractionFailure, os.str());
    }
    double r = max_abs(u.adjoint() * u - Mat::Identity(base.d, base.d));
    if (r > 1e-6) throw Error(ErrorKind::RetractionFailure, "polar factor is not an isometry");
    return Isometry{base.d, base.k, u};
}

QlanPoint weak_qlan(const SpectralProfile& profile, const Mat& x, const Mat& y, const Vec& phi, int n,
                    bool phase_correction) {
    require_irreducible(profile);
    const double t = 1.0 / std::sqrt(static_cast<double>(n));
    const Isometry& v0 = profile.iso;
    Isometry vx = retract(v0, x, t);
    Isometry vy = retract(v0, y, t);
    if (phase_correction) {
        double tx = (profile.rho_ss * v0.v.adjoint() * x).trace().real();
        double ty = (profile.rho_ss * v0.v.adjoint() * y).trace().real();
        vx.v *= std::polar(1.0, -tx * t);
        vy.v *= std::polar(1.0, -ty * t);
    }
    QlanPoint pt;
    pt.overlap = joint_overlap(vx, vy, phi, n);
    Mat xi = identifiable_projection(profile, x);
    Mat yi = identifiable_projection(profile, y);
    Mat diff = xi - yi;
    pt.prediction = std::exp(cplx(-0.5 * beta(profile, diff, diff), sigma(profile, xi, yi)));
    pt.error = std::abs(pt.overlap - pt.prediction);
    return pt;
}

double weak_qlan_error(const SpectralProfile& profile, const Mat& x, const Mat& y, const Vec& phi, int n,
                       bool phase_correction) {
    return weak_qlan(profile, x, y, phi, n, phase_correction).error;
}

double qfi_finite(const TangentVector& a, const Vec& phi, int n) {
    const Isometry& iso = a.base;
    const int d = iso.d;
    if (phi.size() != d) throw Error(ErrorKind::DimensionMismatch, "initial vector dimension");
    if (n < 1) throw Error(ErrorKind::InvalidInput, "n must be positive");
    TangentVector tv = make_tangent(iso, a.a);

    std::vector<Mat> sigmas;
    sigmas.reserve(n);
    sigmas.push_back(phi * phi.adjoint());
    for (int s = 1; s < n; ++s) sigmas.push_back(schrodinger_apply(iso, sigmas.back()));

    // F is unchanged by A -> A - cV (a global phase of the curve); removing the
    // mean generator avoids cancelling O(n^2) terms.
    double c = 0.0;
    for (const auto& sg : sigmas) c += (sg * (iso.v.adjoint() * tv.a)).trace().real();
    c /= n;
    const Mat am = tv.a - c * iso.v;
    const Mat h = iso.v.adjoint() * am;
    const Mat aa = am.adjoint() * am;

    // S_m = sum_{s<=m} T^s(V^*A), m = 0..n-2
    std::vector<Mat> partial;
    partial.reserve(std::max(0, n - 1));
    if (n >= 2) {
        partial.push_back(h);
        for (int m = 1; m <= n - 2; ++m) partial.push_back(h + heisenberg_apply(iso, partial.back()));
    }
    auto e_a = [&](const Mat& x) {
        Mat out = Mat::Zero(d, d);
        for (int i = 0; i < iso.k; ++i)
            out.noalias() += am.middleRows(i * d, d).adjoint() * x * iso.v.middleRows(i * d, d);
        return out;
    };

    cplx ip = 0.0, term2 = 0.0;
    double term1 = 0.0;
    for (int s = 1; s <= n; ++s) {
        const Mat& sig = sigmas[s - 1];
        ip += (sig * h).trace();
        term1 += (sig * aa).trace().real();
        if (s <= n - 1) term2 += (sig * e_a(partial[n - s - 1])).trace();
    }
    double norm2 = term1 + 2.0 * term2.real();
    return 4.0 * (norm2 - std::norm(ip));
}

double qfi_rate(const SpectralProfile& profile, const TangentVector& a, const TangentVector& b) {
    TangentSplit sa = split(profile, a);
    TangentSplit sb = split(profile, b);
    return 4.0 * beta(profile, sa.a_id, sb.a_id);
}

QfiReport qfi_report(const SpectralProfile& profile, const TangentVector& a, const Vec& phi,
                     const std::vector<int>& n_values) {
    QfiReport rep;
    rep.rate = qfi_rate(profile, a, a);
    for (int n : n_values) {
        double f = qfi_finite(a, phi, n);
        rep.n_values.push_back(n);
        rep.f_n.push_back(f);
        rep.residuals.push_back(f / n - rep.rate);
    }
    return rep;
}

StationaryBasis stationary_basis(const SpectralProfile& profile) {
    require_irreducible(profile);
    const int d = profile.d;
    StationaryBasis sb;
    sb.by_block.resize(profile.period);
    for (int a = 0; a < profile.period; ++a) {
        Eigen::SelfAdjointEigenSolver<Mat> pes(profile.projections[a]);
        std::vector<Eigen::Index> cols;
        for (Eigen::Index i = 0; i < d; ++i)
            if (pes.eigenvalues()(i) > 0.5) cols.push_back(i);
        Mat q(d, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) q.col(static_cast<Eigen::Index>(c)) = pes.eigenvectors().col(cols[c]);
        Mat r = hermitian_part(q.adjoint() * profile.rho_ss * q);
        Eigen::SelfAdjointEigenSolver<Mat> res(r);
        const Eigen::Index da = r.rows();
        // descending weights; degenerate clusters re-based against the standard basis
        Eigen::Index hi = da;
        while (hi > 0) {
            Eigen::Index lo = hi - 1;
            while (lo > 0 && std::abs(res.eigenvalues()(lo - 1) - res.eigenvalues()(hi - 1)) < 1e-9) --lo;
            Mat u = q * res.eigenvectors().middleCols(lo, hi - lo);
            std::vector<Vec> chosen;
            for (int e = 0; e < d && static_cast<Eigen::Index>(chosen.size()) < hi - lo; ++e) {
                Vec w = u * (u.adjoint() * Vec::Unit(d, e));
                for (const auto& c : chosen) w -= c.dot(w) * c;
                if (w.norm() > 1e-8) chosen.push_back(w.normalized());
            }
            double weight = res.eigenvalues().segment(lo, hi - lo).mean();
            for (auto& c : chosen) {
                sb.by_block[a].push_back(static_cast<int>(sb.entries.size()));
                sb.entries.push_back({a, weight, c});
            }
            hi = lo;
        }
    }
    return sb;
}

ComponentVectors output_component_vectors(const SpectralProfile& profile, int n, long cap) {
    if (n > 8) throw Error(ErrorKind::SizeCap, "component vectors limited to n <= 8");
    ComponentVectors cv;
    cv.n = n;
    cv.basis = stationary_basis(profile);
    auto ks = multi_kraus(profile.iso, n, cap);
    const std::size_t m = cv.basis.entries.size();
    cv.psi.assign(m, std::vector<Vec>(m, Vec::Zero(static_cast<Eigen::Index>(ks.size()))));
    for (std::size_t s = 0; s < m; ++s) {
        const Vec& start = cv.basis.entries[s].phi;
        for (std::size_t idx = 0; idx < ks.size(); ++idx) {
            Vec img = ks[idx] * start;
            for (std::size_t e = 0; e < m; ++e)
                cv.psi[s][e](static_cast<Eigen::Index>(idx)) = cv.basis.entries[e].phi.dot(img);
        }
    }
    return cv;
}

cplx component_overlap(const Isometry& left, const Isometry& right, const Vec& start, const Vec& start2,
                       const Vec& end, const Vec& end2, int n) {
    Mat x = end * end2.adjoint();
    for (int s = 0; s < n; ++s) x = sandwich_apply(left, right, x);
    return start.dot(x * start2);
}

Mat observable_sandwich(const Isometry& block_iso, const Mat& q, const Mat& x) {
    const int kb = block_iso.k, d = block_iso.d;
    if (q.rows() != kb || q.cols() != kb) throw Error(ErrorKind::DimensionMismatch, "observable dimension");
    Mat out = Mat::Zero(d, d);
    for (int i = 0; i < kb; ++i) {
        Mat qi = Mat::Zero(d, d);
        for (int j = 0; j < kb; ++j)
            if (q(i, j) != cplx(0.0)) qi += q(i, j) * block_iso.kraus(j);
        out.noalias() += block_iso.kraus(i).adjoint() * x * qi;
    }
    return out;
}

double stationary_mean(const SpectralProfile& profile, const LocalObservable& q, long cap) {
    require_irreducible(profile);
    Isometry vb = block_isometry(profile.iso, q.b, cap);
    const Mat one = Mat::Identity(profile.d, profile.d);
    return (profile.rho_ss * observable_sandwich(vb, q.q, one)).trace().real();
}

double asymptotic_variance(const SpectralProfile& profile, const LocalObservable& q, long cap) {
    require_irreducible(profile);
    if (profile.resolvent_cond > 1e10) {
        std::ostringstream os;
        os << "restricted resolvent condition number " << profile.resolvent_cond;
        throw Error(ErrorKind::ResolventIllConditioned, os.str());
    }
    const int d = profile.d, k = profile.k, b = q.b;
    const Mat one = Mat::Identity(d, d);
    const Mat& rho = profile.rho_ss;
    const double m = stationary_mean(profile, q, cap);
    const long kb = ipow(k, b);
    const Mat qt = q.q - m * Mat::Identity(kb, kb);

    Isometry vb = block_isometry(profile.iso, b, cap);
    double c0 = (rho * observable_sandwich(vb, qt * qt, one)).trace().real();
    double overlap_sum = 0.0;
    for (int s = 1; s < b; ++s) {
        const long ks = ipow(k, s);
        Mat prod = kron(qt, Mat::Identity(ks, ks)) * kron(Mat::Identity(ks, ks), qt);
        Isometry vbs = block_isometry(profile.iso, b + s, cap);
        overlap_sum += (rho * observable_sandwich(vbs, prod, one)).trace().real();
    }
    Mat y = observable_sandwich(vb, qt, one);
    Mat r = restricted_resolvent(profile, y);
    double tail = (rho * observable_sandwich(vb, qt, r)).trace().real();
    double s2 = c0 + 2.0 * overlap_sum + 2.0 * tail;
    if (s2 < 0.0 && s2 > -1e-9) s2 = 0.0;
    return s2;
}

}  // namespace qmc
