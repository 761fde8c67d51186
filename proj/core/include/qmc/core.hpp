#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cplx I_UNIT{0.0, 1.0};

enum class ErrorKind {
    DimensionMismatch,
    NotIsometry,
    NotDensity,
    NotPSD,
    UnitDimMismatch,
    SizeCap,
    NotIrreducible,
    PeripheralMismatch,
    LabelingFailure,
    GaugeConstraintViolated,
    NotTangent,
    SingularResolvent,
    NotIdentifiable,
    WitnessInconsistent,
    ResolventIllConditioned,
    RetractionFailure,
    ProfileMismatch,
    IndexOutOfRange,
    GramNotPSD,
    IncompleteMeasurement,
    DegenerateState,
    OutOfInterval,
    ReducibleParameters,
    InvalidInput,
};

const char* kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string detail);
    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

// V : H -> K (x) H stored block-row: Kraus K_i is rows [i*d, (i+1)*d).
struct Isometry {
    int d = 0;
    int k = 0;
    Mat v;

    Mat kraus(int i) const { return v.middleRows(static_cast<Eigen::Index>(i) * d, d); }
    std::vector<Mat> kraus_list() const;
    double residual() const;
};

Isometry isometry_from_kraus(const std::vector<Mat>& kraus, double tol = 1e-8);
Isometry isometry_from_matrix(const Mat& v, int d, int k, double tol = 1e-8);

// Model matrices are written in H (x) K order (row h*k + i). These convert any
// (d*k) x d matrix between that order and the internal block layout.
Mat hk_to_block(const Mat& m, int d, int k);
Mat block_to_hk(const Mat& m, int d, int k);
Isometry from_hk_layout(const Mat& vp, int d, int k, double tol = 1e-8);

struct DensityMatrix {
    int dim = 0;
    Mat rho;
};

DensityMatrix make_density(const Mat& rho, double tol = 1e-10);

enum class Picture { schrodinger, heisenberg };

struct Superoperator {
    int d = 0;
    Picture picture = Picture::schrodinger;
    Mat matrix;  // acts on column-stacked operators

    Mat apply(const Mat& x) const;
};

Superoperator channel(const Isometry& iso, Picture picture);

// X -> sum_i K1_i^* X K2_i on d1 x d2 matrices.
struct SandwichMap {
    int d1 = 0;
    int d2 = 0;
    Mat matrix;

    Mat apply(const Mat& x) const;
};

SandwichMap sandwich_map(const Isometry& iso1, const Isometry& iso2);

// Direct Kraus sums, cheaper than forming the transfer matrix.
Mat heisenberg_apply(const Isometry& iso, const Mat& x);
Mat schrodinger_apply(const Isometry& iso, const Mat& rho);
Mat sandwich_apply(const Isometry& left, const Isometry& right, const Mat& x);

Mat matrix_sqrt_psd(const Mat& a, double tol = 1e-10);

Mat kron(const Mat& a, const Mat& b);
// X (x) 1_K in block layout.
Mat lift(const Mat& x, int k);

enum class Factor { first, second };
Mat partial_trace(const Mat& m, int dim_first, int dim_second, Factor traced);

Vec vec(const Mat& m);
Mat unvec(const Vec& v, int rows, int cols);

Mat hermitian_part(const Mat& m);
double trace_norm(const Mat& m);
double max_abs(const Mat& m);
Mat polar_factor(const Mat& a, double* min_singular = nullptr);

// Kraus products K_{i_n}...K_{i_1}, index i_1 most significant.
std::vector<Mat> multi_kraus(const Isometry& iso, int n, long cap = 4096);
// Isometry of b consecutive steps with unit dimension k^b.
Isometry block_isometry(const Isometry& iso, int b, long cap = 4096);

long ipow(long base, int exp);

Mat random_unitary(int d, std::mt19937_64& rng);
Isometry random_isometry(int d, int k, std::mt19937_64& rng);
Mat random_density(int d, std::mt19937_64& rng);
Mat random_hermitian(int d, std::mt19937_64& rng);
Mat random_matrix(int rows, int cols, std::mt19937_64& rng);

}  // namespace qmc
