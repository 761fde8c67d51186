#include "qmc/gauge.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace qmc {

namespace {

Mat mat_pow(const Mat& m, int e) {
    Mat r = Mat::Identity(m.rows(), m.cols());
    for (int i = 0; i < e; ++i) r = r * m;
    return r;
}

int wrap(int a, int p) {
    return ((a % p) + p) % p;
}

void check_shape(const SpectralProfile& profile, const Mat& a) {
    if (a.rows() != static_cast<Eigen::Index>(profile.d) * profile.k || a.cols() != profile.d)
        throw Error(ErrorKind::DimensionMismatch, "tangent matrix must be (d*k) x d");
}

}  // namespace

GaugeElement compose(const GaugeElement& g, const GaugeElement& h) {
    return {g.phase * h.phase, g.unitary * h.unitary};
}

GaugeElement inverse(const GaugeElement& g) {
    return {std::conj(g.phase), g.unitary.adjoint()};
}

Isometry act(const GaugeElement& g, const Isometry& iso) {
    if (g.unitary.rows() != iso.d || g.unitary.cols() != iso.d)
        throw Error(ErrorKind::DimensionMismatch, "gauge unitary dimension");
    return Isometry{iso.d, iso.k, act_tangent(g, iso.v, iso.k)};
}

Mat act_tangent(const GaugeElement& g, const Mat& a, int k) {
    return std::conj(g.phase) * lift(g.unitary, k) * a * g.unitary.adjoint();
}

TangentVector make_tangent(const Isometry& base, const Mat& a, double tol) {
    if (a.rows() != base.v.rows() || a.cols() != base.d)
        throw Error(ErrorKind::DimensionMismatch, "tangent matrix must be (d*k) x d");
    Mat h = base.v.adjoint() * a;
    Mat skew = 0.5 * (h - h.adjoint());
    double r = max_abs(skew);
    if (r > tol) {
        std::ostringstream os;
        os << "V^*A not Hermitian, residual " << r;
        throw Error(ErrorKind::NotTangent, os.str());
    }
    return {base, a - base.v * skew};
}

std::optional<Witness> equivalence_witness(const Isometry& iso1, const Isometry& iso2, double tol) {
    if (iso1.d != iso2.d)
        throw Error(ErrorKind::DimensionMismatch,
                    "system dimensions differ; equivalent irreducible chains have equal dimension");
    if (iso1.k != iso2.k) throw Error(ErrorKind::UnitDimMismatch, "unit dimensions differ");
    for (const Isometry* iso : {&iso1, &iso2}) require_irreducible(analyze(*iso));

    const int d = iso1.d;
    SandwichMap t12 = sandwich_map(iso1, iso2);
    Eigen::ComplexEigenSolver<Mat> es(t12.matrix);
    Eigen::Index top;
    es.eigenvalues().cwiseAbs().maxCoeff(&top);
    cplx c = es.eigenvalues()(top);
    if (std::abs(c) < 1.0 - tol) return std::nullopt;

    Mat f = unvec(es.eigenvectors().col(top), d, d);
    Mat ff = f.adjoint() * f;
    double s = ff.trace().real() / d;
    double dev = max_abs(ff - s * Mat::Identity(d, d)) / s;
    if (dev > 1e-6) {
        std::ostringstream os;
        os << "peripheral eigenvector not proportional to a unitary, deviation " << dev;
        throw Error(ErrorKind::WitnessInconsistent, os.str());
    }
    Mat w = polar_factor(f / std::sqrt(s));
    for (int i = 0; i < d; ++i) {
        if (std::abs(w(i, 0)) > 1e-8) {
            w *= std::conj(w(i, 0)) / std::abs(w(i, 0));
            break;
        }
    }
    c /= std::abs(c);
    double r = max_abs(lift(w, iso1.k) * iso2.v - c * iso1.v * w);
    if (r > 1e-8) {
        std::ostringstream os;
        os << "(W x 1) V2 = c V1 W violated by " << r;
        throw Error(ErrorKind::WitnessInconsistent, os.str());
    }
    return Witness{c, w};
}

Stabiliser stabiliser(const SpectralProfile& profile) {
    require_irreducible(profile);
    Stabiliser st;
    st.order = profile.period;
    for (int m = 0; m < profile.period; ++m) {
        GaugeElement g{std::pow(profile.gamma, m), mat_pow(profile.z, m)};
        double r = max_abs(act(g, profile.iso).v - profile.iso.v);
        if (r > 1e-9) {
            std::ostringstream os;
            os << "stabiliser element " << m << " moves V by " << r;
            throw Error(ErrorKind::LabelingFailure, os.str());
        }
        st.elements.push_back(std::move(g));
    }
    return st;
}

namespace {

Mat dmu_raw(const SpectralProfile& profile, cplx theta, const Mat& kgen) {
    const Mat& v = profile.iso.v;
    return theta * v - lift(kgen, profile.k) * v + v * kgen;
}

}  // namespace

TangentVector dmu(const SpectralProfile& profile, double theta, const Mat& kgen, double tol) {
    require_irreducible(profile);
    if (kgen.rows() != profile.d || kgen.cols() != profile.d)
        throw Error(ErrorKind::DimensionMismatch, "generator dimension");
    double herm = max_abs(kgen - kgen.adjoint());
    double tr = std::abs((profile.rho_ss * kgen).trace());
    if (herm > 1e-9 || tr > tol) {
        std::ostringstream os;
        os << "need K Hermitian with Tr(rho K) = 0; got asymmetry " << herm << ", trace " << tr;
        throw Error(ErrorKind::GaugeConstraintViolated, os.str());
    }
    return {profile.iso, dmu_raw(profile, theta, kgen)};
}

TangentSplit split(const SpectralProfile& profile, const TangentVector& t) {
    require_irreducible(profile);
    check_shape(profile, t.a);
    const Mat& v = profile.iso.v;
    if (max_abs(t.base.v - v) > 1e-12)
        throw Error(ErrorKind::ProfileMismatch, "tangent based at a different isometry");
    TangentVector tv = make_tangent(profile.iso, t.a);
    Mat h = hermitian_part(v.adjoint() * tv.a);
    const int d = profile.d;

    TangentSplit out;
    out.theta = (profile.rho_ss * h).trace().real();
    Mat y = h - out.theta * Mat::Identity(d, d);
    out.kgen = hermitian_part(restricted_resolvent(profile, y));
    out.a_id = tv.a - dmu_raw(profile, out.theta, out.kgen);
    double solve_res = max_abs(out.kgen - profile.heis.apply(out.kgen) - y);
    out.residual = std::max(solve_res, max_abs(v.adjoint() * out.a_id));
    return out;
}

Mat identifiable_projection(const SpectralProfile& profile, const Mat& a) {
    require_irreducible(profile);
    check_shape(profile, a);
    const Mat& v = profile.iso.v;
    Mat h = v.adjoint() * a;
    cplx m = (profile.rho_ss * h).trace();
    Mat kgen = restricted_resolvent(profile, h - m * Mat::Identity(profile.d, profile.d));
    return a - dmu_raw(profile, m, kgen);
}

bool is_identifiable(const SpectralProfile& profile, const Mat& a, double tol) {
    return max_abs(profile.iso.v.adjoint() * a) <= tol * std::max(1.0, max_abs(a));
}

cplx tangent_inner(const SpectralProfile& profile, const Mat& a_id, const Mat& b_id, double tol) {
    check_shape(profile, a_id);
    check_shape(profile, b_id);
    if (!is_identifiable(profile, a_id, tol) || !is_identifiable(profile, b_id, tol))
        throw Error(ErrorKind::NotIdentifiable, "V V^* A must vanish");
    return (profile.rho_ss * a_id.adjoint() * b_id).trace();
}

double beta(const SpectralProfile& profile, const Mat& a_id, const Mat& b_id) {
    return (profile.rho_ss * a_id.adjoint() * b_id).trace().real();
}

double sigma(const SpectralProfile& profile, const Mat& a_id, const Mat& b_id) {
    return (profile.rho_ss * a_id.adjoint() * b_id).trace().imag();
}

double tangent_norm(const SpectralProfile& profile, const Mat& a_id) {
    return std::sqrt(std::max(0.0, beta(profile, a_id, a_id)));
}

Mat stabiliser_tangent_action(const SpectralProfile& profile, int m, const Mat& a_id) {
    require_irreducible(profile);
    check_shape(profile, a_id);
    const int mm = wrap(m, profile.period);
    Mat zm = mat_pow(profile.z, mm);
    return std::pow(profile.gamma, mm) * lift(zm.adjoint(), profile.k) * a_id * zm;
}

std::vector<Mat> mode_decompose(const SpectralProfile& profile, const Mat& a_id) {
    require_irreducible(profile);
    check_shape(profile, a_id);
    const int p = profile.period;
    std::vector<Mat> modes(p, Mat::Zero(a_id.rows(), a_id.cols()));
    std::vector<Mat> lifted(p);
    for (int a = 0; a < p; ++a) lifted[a] = lift(profile.projections[a], profile.k);
    for (int m = 0; m < p; ++m)
        for (int a = 0; a < p; ++a)
            modes[m] += lifted[wrap(a + 1 - m, p)] * a_id * profile.projections[a];
    return modes;
}

SingularDimension singular_dimension(const SpectralProfile& profile) {
    require_irreducible(profile);
    const int d = profile.d, k = profile.k, p = profile.period;
    SingularDimension sd;
    for (int a = 0; a < p; ++a)
        sd.l += 2 * (profile.block_dims[wrap(a + 1, p)] * k - profile.block_dims[a]) * profile.block_dims[a];
    sd.d_id = 2 * d * d * (k - 1);
    sd.d_nonid = d * d;

    const Mat& v = profile.iso.v;
    const Eigen::Index rows = static_cast<Eigen::Index>(d) * k;
    Mat pid = Mat::Identity(rows, rows) - v * v.adjoint();
    Mat map(rows * d, rows * d);
    for (Eigen::Index col = 0; col < rows * d; ++col) {
        Mat e = Mat::Zero(rows, d);
        e(col % rows, col / rows) = 1.0;
        map.col(col) = vec(mode_decompose(profile, pid * e)[0]);
    }
    Eigen::JacobiSVD<Mat> svd(map);
    int rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-9) ++rank;
    sd.l_numeric = 2 * rank;
    return sd;
}

}  // namespace qmc
