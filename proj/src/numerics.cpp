#include "avfc/numerics.hpp"

#include "avfc/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace avfc {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw DimensionMismatch(what);
}

} // namespace

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require(data_.size() == rows * cols, "matrix entry count does not match rows x cols");
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require(r.size() == cols_, "ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::column(std::span<const double> v) { return Mat(v.size(), 1, Vec(v.begin(), v.end())); }

Mat Mat::row(std::span<const double> v) { return Mat(1, v.size(), Vec(v.begin(), v.end())); }

Mat Mat::diag(std::span<const double> v) {
    Mat m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
    return m;
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Mat::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool Mat::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Mat operator+(const Mat& a, const Mat& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum dimension mismatch");
    Mat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

Mat operator-(const Mat& a, const Mat& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix difference dimension mismatch");
    Mat c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

Mat operator*(const Mat& a, const Mat& b) {
    require(a.cols() == b.rows(), "matrix product dimension mismatch");
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Mat operator*(double s, const Mat& a) {
    Mat c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
    return c;
}

Vec operator*(const Mat& a, std::span<const double> x) {
    require(a.cols() == x.size(), "matrix-vector dimension mismatch");
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "dot product dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).max_abs(); }

Vec rk4_step(const Derivative& deriv, double t, std::span<const double> x, double h) {
    const std::size_t n = x.size();
    auto checked = [&](double ts, std::span<const double> xs) {
        Vec k = deriv(ts, xs);
        if (k.size() != n) throw DimensionMismatch("derivative returned wrong dimension");
        for (double v : k)
            if (!std::isfinite(v))
                throw NonFiniteDerivative("non-finite derivative at t = " + std::to_string(ts));
        return k;
    };
    auto offset = [&](const Vec& k, double s) {
        Vec y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + s * k[i];
        return y;
    };

    const Vec k1 = checked(t, x);
    const Vec k2 = checked(t + 0.5 * h, offset(k1, 0.5 * h));
    const Vec k3 = checked(t + 0.5 * h, offset(k2, 0.5 * h));
    const Vec k4 = checked(t + h, offset(k3, h));

    Vec out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

Vec solve_dense(Mat m, Vec rhs, double pivot_tol) {
    const std::size_t n = m.rows();
    require(m.is_square() && rhs.size() == n, "solve_dense dimension mismatch");
    const double scale = std::max(m.max_abs(), 1e-300);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (std::abs(m(piv, col)) <= pivot_tol * scale)
            throw SingularSystem("linear system is numerically singular");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(piv, j));
            std::swap(rhs[col], rhs[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m(r, col) / m(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
            rhs[r] -= f * rhs[col];
        }
    }
    Vec z(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= m(i, j) * z[j];
        z[i] = s / m(i, i);
    }
    return z;
}

std::size_t elimination_rank(Mat m, double tol) {
    const std::size_t rows = m.rows(), cols = m.cols();
    const double scale = std::max(m.max_abs(), 1e-300);
    std::size_t rank = 0;
    std::vector<bool> col_used(cols, false);
    std::vector<bool> row_used(rows, false);
    for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
        double best = 0.0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < rows; ++i) {
            if (row_used[i]) continue;
            for (std::size_t j = 0; j < cols; ++j) {
                if (col_used[j]) continue;
                if (std::abs(m(i, j)) > best) {
                    best = std::abs(m(i, j));
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best <= tol * scale) break;
        row_used[bi] = true;
        col_used[bj] = true;
        ++rank;
        for (std::size_t i = 0; i < rows; ++i) {
            if (row_used[i]) continue;
            const double f = m(i, bj) / m(bi, bj);
            for (std::size_t j = 0; j < cols; ++j) m(i, j) -= f * m(bi, j);
        }
    }
    return rank;
}

Mat solve_lyapunov(const Mat& a, const Mat& q) {
    require(a.is_square() && q.is_square() && a.rows() == q.rows(), "solve_lyapunov dimension mismatch");
    const std::size_t n = a.rows();
    const std::size_t nn = n * n;
    // Column-stacked vec(P): index p(i,j) -> j*n + i.
    // (A^T P)(i,j) = sum_k A(k,i) P(k,j); (P A)(i,j) = sum_k P(i,k) A(k,j).
    Mat k(nn, nn);
    Vec rhs(nn);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t row = j * n + i;
            for (std::size_t kk = 0; kk < n; ++kk) {
                k(row, j * n + kk) += a(kk, i);
                k(row, kk * n + i) += a(kk, j);
            }
            rhs[row] = -q(i, j);
        }
    }
    const Vec p = solve_dense(std::move(k), std::move(rhs));
    Mat out(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) out(i, j) = p[j * n + i];
    // Remove round-off asymmetry; the exact solution is symmetric for symmetric Q.
    Mat sym(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sym(i, j) = 0.5 * (out(i, j) + out(j, i));
    return sym;
}

Mat symmetrized(const Mat& m) {
    require(m.is_square(), "symmetry test requires a square matrix");
    const std::size_t n = m.rows();
    Mat s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol)
                throw NotSymmetric("matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ")");
            s(i, j) = 0.5 * (m(i, j) + m(j, i));
        }
    return s;
}

bool is_positive_definite(const Mat& m) {
    Mat l = symmetrized(m);
    const std::size_t n = l.rows();
    for (std::size_t j = 0; j < n; ++j) {
        double d = l(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > kPivotThreshold)) return false;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = l(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return true;
}

std::vector<double> eig_symmetric(const Mat& m) {
    Mat a = symmetrized(m);
    const std::size_t n = a.rows();
    constexpr int kMaxSweeps = 100;
    double frob = 0.0;
    for (double v : a.entries()) frob += v * v;
    // Absolute 1e-12 for unit-scale input, scaled up for large entries.
    const double kOffTol = 1e-12 * std::max(1.0, std::sqrt(frob));

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    int sweep = 0;
    for (; sweep < kMaxSweeps && off_norm() >= kOffTol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
            }
        }
    }
    if (off_norm() >= kOffTol) throw NoConvergence("Jacobi eigensolver did not converge in 100 sweeps");

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

Mat left_pinv_col(const Mat& b) {
    require(b.cols() == 1, "left_pinv_col expects a column");
    const double btb = dot(b.entries(), b.entries());
    if (std::sqrt(btb) < 1e-14) throw ZeroColumn("input column b is zero");
    Mat out(1, b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i) out(0, i) = b(i, 0) / btb;
    return out;
}

} // namespace avfc
