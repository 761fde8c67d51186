#include "qmc/core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace qmc {

const char* kind_name(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::NotDensity: return "NotDensity";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::UnitDimMismatch: return "UnitDimMismatch";
    case ErrorKind::SizeCap: return "SizeCap";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::PeripheralMismatch: return "PeripheralMismatch";
    case ErrorKind::LabelingFailure: return "LabelingFailure";
    case ErrorKind::GaugeConstraintViolated: return "GaugeConstraintViolated";
    case ErrorKind::NotTangent: return "NotTangent";
    case ErrorKind::SingularResolvent: return "SingularResolvent";
    case ErrorKind::NotIdentifiable: return "NotIdentifiable";
    case ErrorKind::WitnessInconsistent: return "WitnessInconsistent";
    case ErrorKind::ResolventIllConditioned: return "ResolventIllConditioned";
    case ErrorKind::RetractionFailure: return "RetractionFailure";
    case ErrorKind::ProfileMismatch: return "ProfileMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::GramNotPSD: return "GramNotPSD";
    case ErrorKind::IncompleteMeasurement: return "IncompleteMeasurement";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::OutOfInterval: return "OutOfInterval";
    case ErrorKind::ReducibleParameters: return "ReducibleParameters";
    case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, std::string detail)
    : std::runtime_error(std::string(kind_name(kind)) + ": " + detail),
      kind_(kind),
      detail_(std::move(detail)) {}

std::vector<Mat> Isometry::kraus_list() const {
    std::vector<Mat> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(kraus(i));
    return out;
}

double Isometry::residual() const {
    return max_abs(v.adjoint() * v - Mat::Identity(d, d));
}

Isometry isometry_from_matrix(const Mat& v, int d, int k, double tol) {
    if (d <= 0 || k <= 0 || v.rows() != static_cast<Eigen::Index>(d) * k || v.cols() != d)
        throw Error(ErrorKind::DimensionMismatch, "isometry matrix must be (d*k) x d");
    if (!v.allFinite()) throw Error(ErrorKind::InvalidInput, "non-finite entry");
    Isometry iso{d, k, v};
    double r = (v.adjoint() * v - Mat::Identity(d, d)).norm();
    if (r > tol) {
        std::ostringstream os;
        os << "completeness residual " << r;
        throw Error(ErrorKind::NotIsometry, os.str());
    }
    return iso;
}

Isometry isometry_from_kraus(const std::vector<Mat>& kraus, double tol) {
    if (kraus.empty()) throw Error(ErrorKind::DimensionMismatch, "empty Kraus list");
    const auto d = kraus.front().rows();
    for (const auto& kr : kraus)
        if (kr.rows() != d || kr.cols() != d)
            throw Error(ErrorKind::DimensionMismatch, "Kraus operators must be square of equal size");
    const int k = static_cast<int>(kraus.size());
    Mat v(d * k, d);
    for (int i = 0; i < k; ++i) v.middleRows(i * d, d) = kraus[i];
    return isometry_from_matrix(v, static_cast<int>(d), k, tol);
}

Mat hk_to_block(const Mat& m, int d, int k) {
    if (m.rows() != static_cast<Eigen::Index>(d) * k)
        throw Error(ErrorKind::DimensionMismatch, "H (x) K layout needs d*k rows");
    Mat out(m.rows(), m.cols());
    for (int h = 0; h < d; ++h)
        for (int i = 0; i < k; ++i) out.row(i * d + h) = m.row(h * k + i);
    return out;
}

Mat block_to_hk(const Mat& m, int d, int k) {
    if (m.rows() != static_cast<Eigen::Index>(d) * k)
        throw Error(ErrorKind::DimensionMismatch, "block layout needs d*k rows");
    Mat out(m.rows(), m.cols());
    for (int h = 0; h < d; ++h)
        for (int i = 0; i < k; ++i) out.row(h * k + i) = m.row(i * d + h);
    return out;
}

Isometry from_hk_layout(const Mat& vp, int d, int k, double tol) {
    return isometry_from_matrix(hk_to_block(vp, d, k), d, k, tol);
}

DensityMatrix make_density(const Mat& rho, double tol) {
    if (rho.rows() != rho.cols() || rho.rows() == 0)
        throw Error(ErrorKind::DimensionMismatch, "density matrix must be square");
    if (max_abs(rho - rho.adjoint()) > tol * 100)
        throw Error(ErrorKind::NotDensity, "not Hermitian");
    Mat h = hermitian_part(rho);
    if (std::abs(h.trace() - cplx(1.0)) > tol)
        throw Error(ErrorKind::NotDensity, "trace differs from 1");
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.eigenvalues().minCoeff() < -tol)
        throw Error(ErrorKind::NotDensity, "negative eigenvalue");
    return {static_cast<int>(h.rows()), h};
}

Mat Superoperator::apply(const Mat& x) const {
    return unvec(matrix * vec(x), d, d);
}

Superoperator channel(const Isometry& iso, Picture picture) {
    const int d = iso.d;
    Superoperator s{d, picture, Mat::Zero(d * d, d * d)};
    for (int i = 0; i < iso.k; ++i) {
        Mat kr = iso.kraus(i);
        if (picture == Picture::schrodinger)
            s.matrix += kron(kr.conjugate(), kr);
        else
            s.matrix += kron(kr.transpose(), kr.adjoint());
    }
    return s;
}

Mat SandwichMap::apply(const Mat& x) const {
    return unvec(matrix * vec(x), d1, d2);
}

SandwichMap sandwich_map(const Isometry& iso1, const Isometry& iso2) {
    if (iso1.k != iso2.k) throw Error(ErrorKind::UnitDimMismatch, "unit dimensions differ");
    SandwichMap s{iso1.d, iso2.d, Mat::Zero(iso1.d * iso2.d, iso1.d * iso2.d)};
    // vec(A X B) = (B^T (x) A) vec X
    for (int i = 0; i < iso1.k; ++i)
        s.matrix += kron(iso2.kraus(i).transpose(), iso1.kraus(i).adjoint());
    return s;
}

Mat heisenberg_apply(const Isometry& iso, const Mat& x) {
    Mat out = Mat::Zero(iso.d, iso.d);
    for (int i = 0; i < iso.k; ++i) {
        auto kr = iso.v.middleRows(static_cast<Eigen::Index>(i) * iso.d, iso.d);
        out.noalias() += kr.adjoint() * x * kr;
    }
    return out;
}

Mat schrodinger_apply(const Isometry& iso, const Mat& rho) {
    Mat out = Mat::Zero(iso.d, iso.d);
    for (int i = 0; i < iso.k; ++i) {
        auto kr = iso.v.middleRows(static_cast<Eigen::Index>(i) * iso.d, iso.d);
        out.noalias() += kr * rho * kr.adjoint();
    }
    return out;
}

Mat sandwich_apply(const Isometry& left, const Isometry& right, const Mat& x) {
    if (left.k != right.k) throw Error(ErrorKind::UnitDimMismatch, "unit dimensions differ");
    Mat out = Mat::Zero(left.d, right.d);
    for (int i = 0; i < left.k; ++i) {
        auto kl = left.v.middleRows(static_cast<Eigen::Index>(i) * left.d, left.d);
        auto kr = right.v.middleRows(static_cast<Eigen::Index>(i) * right.d, right.d);
        out.noalias() += kl.adjoint() * x * kr;
    }
    return out;
}

Mat matrix_sqrt_psd(const Mat& a, double tol) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "square matrix required");
    if (max_abs(a - a.adjoint()) > tol) throw Error(ErrorKind::NotPSD, "not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(a));
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -tol) {
        std::ostringstream os;
        os << "min eigenvalue " << ev.minCoeff();
        throw Error(ErrorKind::NotPSD, os.str());
    }
    Eigen::VectorXd s = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Mat lift(const Mat& x, int k) {
    return kron(Mat::Identity(k, k), x);
}

Mat partial_trace(const Mat& m, int dim_first, int dim_second, Factor traced) {
    const Eigen::Index n = static_cast<Eigen::Index>(dim_first) * dim_second;
    if (m.rows() != n || m.cols() != n)
        throw Error(ErrorKind::DimensionMismatch, "partial_trace dimension mismatch");
    if (traced == Factor::first) {
        Mat out = Mat::Zero(dim_second, dim_second);
        for (int a = 0; a < dim_first; ++a)
            out += m.block(a * dim_second, a * dim_second, dim_second, dim_second);
        return out;
    }
    Mat out(dim_first, dim_first);
    for (int a = 0; a < dim_first; ++a)
        for (int b = 0; b < dim_first; ++b)
            out(a, b) = m.block(a * dim_second, b * dim_second, dim_second, dim_second).trace();
    return out;
}

Vec vec(const Mat& m) {
    return Eigen::Map<const Vec>(m.data(), m.size());
}

Mat unvec(const Vec& v, int rows, int cols) {
    if (v.size() != static_cast<Eigen::Index>(rows) * cols)
        throw Error(ErrorKind::DimensionMismatch, "unvec size mismatch");
    return Eigen::Map<const Mat>(v.data(), rows, cols);
}

Mat hermitian_part(const Mat& m) {
    return 0.5 * (m + m.adjoint());
}

double trace_norm(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().sum();
}

double max_abs(const Mat& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Mat polar_factor(const Mat& a, double* min_singular) {
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (min_singular) *min_singular = svd.singularValues().minCoeff();
    return svd.matrixU() * svd.matrixV().adjoint();
}

long ipow(long base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<Mat> multi_kraus(const Isometry& iso, int n, long cap) {
    if (n < 0) throw Error(ErrorKind::InvalidInput, "negative block length");
    const long count = ipow(iso.k, n);
    if (count > cap) throw Error(ErrorKind::SizeCap, "k^n exceeds cap");
    std::vector<Mat> cur{Mat::Identity(iso.d, iso.d)};
    const auto ks = iso.kraus_list();
    for (int step = 0; step < n; ++step) {
        std::vector<Mat> next;
        next.reserve(cur.size() * iso.k);
        for (const auto& prev : cur)
            for (int i = 0; i < iso.k; ++i) next.push_back(ks[i] * prev);
        cur = std::move(next);
    }
    return cur;
}

Isometry block_isometry(const Isometry& iso, int b, long cap) {
    if (b < 1) throw Error(ErrorKind::InvalidInput, "block length must be positive");
    auto ks = multi_kraus(iso, b, cap);
    Mat v(static_cast<Eigen::Index>(ks.size()) * iso.d, iso.d);
    for (std::size_t i = 0; i < ks.size(); ++i) v.middleRows(static_cast<Eigen::Index>(i) * iso.d, iso.d) = ks[i];
    return Isometry{iso.d, static_cast<int>(ks.size()), v};
}

Mat random_matrix(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Mat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = cplx(nd(rng), nd(rng));
    return m;
}

Mat random_unitary(int d, std::mt19937_64& rng) {
    Eigen::HouseholderQR<Mat> qr(random_matrix(d, d, rng));
    Mat q = qr.householderQ() * Mat::Identity(d, d);
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        cplx ph = r(i, i) / std::abs(r(i, i));
        q.col(i) *= ph;
    }
    return q;
}

Isometry random_isometry(int d, int k, std::mt19937_64& rng) {
    Mat v = polar_factor(random_matrix(d * k, d, rng));
    return Isometry{d, k, v};
}

Mat random_density(int d, std::mt19937_64& rng) {
    Mat g = random_matrix(d, d, rng);
    Mat rho = g * g.adjoint();
    return rho / rho.trace();
}

Mat random_hermitian(int d, std::mt19937_64& rng) {
    return hermitian_part(random_matrix(d, d, rng));
}

}  // namespace qmc
