#include "tlsmp/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "tlsmp/errors.hpp"

namespace tlsmp {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows)
{
    const std::size_t m = rows.size();
    const std::size_t n = m ? rows.begin()->size() : 0;
    Matrix out(m, n);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != n) throw DimensionError("ragged row list");
        std::size_t j = 0;
        for (double v : row) out(i, j++) = v;
        ++i;
    }
    return out;
}

Matrix Matrix::column(std::span<const double> v)
{
    Matrix out(v.size(), 1);
    std::copy(v.begin(), v.end(), out.values().begin());
    return out;
}

Matrix Matrix::transposed() const
{
    Matrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::frobenius_norm() const
{
    // Scaled sum of squares, as in LAPACK's dnrm2.
    double scale = 0.0, ssq = 1.0;
    for (double v : data_) {
        if (v == 0.0) continue;
        const double a = std::fabs(v);
        if (scale < a) {
            ssq = 1.0 + ssq * (scale / a) * (scale / a);
            scale = a;
        } else {
            ssq += (a / scale) * (a / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

Matrix multiply(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            if (bkj == 0.0) continue;
            for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) += a(i, k) * bkj;
        }
    return c;
}

Vector multiply(const Matrix& a, std::span<const double> x)
{
    if (a.cols() != x.size()) throw DimensionError("multiply: vector length differs");
    Vector y(a.rows(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) y[i] += a(i, j) * x[j];
    return y;
}

Matrix append_column(const Matrix& a, std::span<const double> b)
{
    if (a.rows() != b.size()) throw DimensionError("append_column: length differs");
    Matrix c(a.rows(), a.cols() + 1);
    std::copy(a.values().begin(), a.values().end(), c.values().begin());
    std::copy(b.begin(), b.end(), c.col(a.cols()).begin());
    return c;
}

} // namespace tlsmp
