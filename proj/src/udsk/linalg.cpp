#include "udsk/linalg.hpp"

#include <cmath>
#include <cstdlib>

namespace udsk {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vec matvec(const Mat& a, std::span<const double> x) {
    Vec y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        y[i] = dot(std::span<const double>(a.row(i), a.cols()), x);
    }
    return y;
}

Vec matvec_transposed(const Mat& a, std::span<const double> x) {
    Vec y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        const double* row = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += row[j] * xi;
    }
    return y;
}

Mat matmul(const Mat& a, const Mat& b) {
    Mat out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            const double* brow = b.row(k);
            double* orow = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Mat transpose(const Mat& a) {
    Mat out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Mat conjugate(const Mat& a, const Mat& b) { return matmul(matmul(a, b), transpose(a)); }

double trace(const Mat& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows() && i < a.cols(); ++i) t += a(i, i);
    return t;
}

bool is_symmetric(const Mat& a, double tol) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    return true;
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double max_abs_diff(const Mat& a, const Mat& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

double row_orthonormality_error(const Mat& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i; j < m.rows(); ++j) {
            const double g = dot(std::span<const double>(m.row(i), m.cols()),
                                 std::span<const double>(m.row(j), m.cols()));
            worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

void orthonormalize_rows(Mat& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double* ri = m.row(i);
        std::span<double> si(ri, m.cols());
        for (std::size_t k = 0; k < i; ++k) {
            const double* rk = m.row(k);
            const double proj = dot(si, std::span<const double>(rk, m.cols()));
            for (std::size_t j = 0; j < m.cols(); ++j) ri[j] -= proj * rk[j];
        }
        const double len = norm2(si);
        if (len > 0.0) {
            for (std::size_t j = 0; j < m.cols(); ++j) ri[j] /= len;
        }
    }
}

std::size_t argmax_abs(std::span<const double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    return best;
}

}  // namespace udsk
