#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace avfc {

using Vec = std::vector<double>;

/// Dense row-major matrix for the small systems handled here (n <= 10).
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
    Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat identity(std::size_t n);
    static Mat column(std::span<const double> v);
    static Mat row(std::span<const double> v);
    static Mat diag(std::span<const double> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> entries() const noexcept { return data_; }
    std::span<const double> row_span(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    Mat transpose() const;
    double max_abs() const;
    bool all_finite() const;

    friend bool operator==(const Mat&, const Mat&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);
Vec operator*(const Mat& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double max_abs_diff(const Mat& a, const Mat& b);

using Derivative = std::function<Vec(double, std::span<const double>)>;

/// One classical fourth-order Runge-Kutta step. Throws NonFiniteDerivative
/// if any stage slope contains a non-finite entry.
Vec rk4_step(const Derivative& deriv, double t, std::span<const double> x, double h);

/// Solves A^T P + P A = -Q via the Kronecker-vectorized n^2 x n^2 system.
Mat solve_lyapunov(const Mat& a, const Mat& q);

/// Solves the square system M z = rhs by Gaussian elimination with partial
/// pivoting. Throws SingularSystem when a pivot falls below `pivot_tol`
/// relative to the largest entry of M.
Vec solve_dense(Mat m, Vec rhs, double pivot_tol = 1e-13);

/// Numerical rank by Gaussian elimination with full pivoting.
std::size_t elimination_rank(Mat m, double tol = 1e-9);

inline constexpr double kSymmetryTol = 1e-9;
inline constexpr double kPivotThreshold = 1e-12;

/// Throws NotSymmetric if max |M - M^T| exceeds kSymmetryTol; returns (M + M^T)/2.
Mat symmetrized(const Mat& m);

/// Cholesky-based test; true iff every pivot exceeds kPivotThreshold.
bool is_positive_definite(const Mat& m);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> eig_symmetric(const Mat& m);

/// (b^T b)^{-1} b^T for a nonzero column b.
Mat left_pinv_col(const Mat& b);

} // namespace avfc
