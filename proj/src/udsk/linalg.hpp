#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace udsk {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. Small and allocation-transparent;
/// everything this library needs is matvec-shaped or c x c.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::size_t size() const { return data_.size(); }

    bool operator==(const Mat& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// y = A x
Vec matvec(const Mat& a, std::span<const double> x);
/// y = A^T x
Vec matvec_transposed(const Mat& a, std::span<const double> x);

Mat matmul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);

/// A B A^T for square A, symmetric-intent B.
Mat conjugate(const Mat& a, const Mat& b);

double trace(const Mat& a);
bool is_symmetric(const Mat& a, double tol);
bool all_finite(std::span<const double> v);

/// max_ij |A_ij - B_ij|
double max_abs_diff(const Mat& a, const Mat& b);

/// ||M M^T - I||_inf over entries, measuring row orthonormality.
double row_orthonormality_error(const Mat& m);

/// Modified Gram-Schmidt on the rows, in place.
void orthonormalize_rows(Mat& m);

std::size_t argmax_abs(std::span<const double> v);

}  // namespace udsk
