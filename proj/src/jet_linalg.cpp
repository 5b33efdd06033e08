#include "cfdual/jet_linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace cfdual {

JetMatrix::JetMatrix(std::size_t rows, std::size_t cols, const Jet& fill)
    : rows_(rows), cols_(cols), a_(rows * cols, fill)
{
}

JetMatrix JetMatrix::constant(const Eigen::MatrixXd& m, std::size_t dim, int order)
{
    JetMatrix r(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()), Jet(dim, order, 0.0));
    for (std::size_t i = 0; i < r.rows_; ++i)
        for (std::size_t j = 0; j < r.cols_; ++j)
            r(i, j) = Jet(dim, order, m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    return r;
}

int JetMatrix::order() const
{
    if (a_.empty()) return 0;
    int k = a_.front().order();
    for (const auto& j : a_) k = std::min(k, j.order());
    return k;
}

Eigen::MatrixXd JetMatrix::value() const
{
    Eigen::MatrixXd m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).value();
    return m;
}

JetMatrix JetMatrix::derivative(std::size_t axis) const
{
    JetMatrix r = *this;
    for (auto& j : r.a_) j = j.derivative(axis);
    return r;
}

JetMatrix JetMatrix::truncated(int order) const
{
    JetMatrix r = *this;
    for (auto& j : r.a_) j = j.truncated(order);
    return r;
}

JetMatrix JetMatrix::transposed() const
{
    JetMatrix r;
    r.rows_ = cols_;
    r.cols_ = rows_;
    r.a_.resize(a_.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

JetMatrix& JetMatrix::operator+=(const JetMatrix& o)
{
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("JetMatrix shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

JetMatrix& JetMatrix::operator-=(const JetMatrix& o)
{
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("JetMatrix shape mismatch");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

JetMatrix& JetMatrix::operator*=(double s)
{
    for (auto& j : a_) j *= s;
    return *this;
}

JetMatrix operator+(JetMatrix a, const JetMatrix& b) { return a += b; }
JetMatrix operator-(JetMatrix a, const JetMatrix& b) { return a -= b; }
JetMatrix operator*(JetMatrix a, double s) { return a *= s; }
JetMatrix operator*(double s, JetMatrix a) { return a *= s; }

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b)
{
    if (a.cols() != b.rows()) throw std::invalid_argument("JetMatrix product shape mismatch");
    if (a.cols() == 0) throw std::invalid_argument("JetMatrix product of empty matrices");
    const int order = std::min(a.order(), b.order());
    JetMatrix r(a.rows(), b.cols(), Jet(a.dim(), order, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Jet s = a(i, 0) * b(0, j);
            for (std::size_t k = 1; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            r(i, j) = std::move(s);
        }
    return r;
}

JetMatrix inverse(const JetMatrix& m)
{
    if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("inverse: matrix must be square");
    const std::size_t dim = m.dim();
    const int order = m.order();
    const Eigen::MatrixXd v = m.value();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
    if (!lu.isInvertible()) throw std::domain_error("inverse: singular matrix");
    const Eigen::MatrixXd v_inv = lu.inverse();

    // m = v + E with E free of constant terms, so (-v^{-1}E)^k vanishes beyond the order.
    JetMatrix e = m - JetMatrix::constant(v, dim, order);
    const JetMatrix v_inv_j = JetMatrix::constant(v_inv, dim, order);
    const JetMatrix step = (-1.0) * (v_inv_j * e);
    JetMatrix term = v_inv_j;
    JetMatrix sum = v_inv_j;
    for (int k = 1; k <= order; ++k) {
        term = step * term;
        sum += term;
    }
    return sum;
}

Jet trace(const JetMatrix& m)
{
    if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("trace: matrix must be square");
    Jet t = m(0, 0);
    for (std::size_t i = 1; i < m.rows(); ++i) t += m(i, i);
    return t;
}

Jet determinant(const JetMatrix& m)
{
    const std::size_t n = m.rows();
    if (n != m.cols() || n == 0) throw std::invalid_argument("determinant: matrix must be square");
    if (n == 1) return m(0, 0);
    // Cofactor expansion along the first row; sizes here stay small.
    Jet det(m.dim(), m.order(), 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        JetMatrix minor(n - 1, n - 1, m(0, 0));
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0, jj = 0; j < n; ++j)
                if (j != c) minor(i - 1, jj++) = m(i, j);
        const Jet term = m(0, c) * determinant(minor);
        if (c % 2) det -= term;
        else det += term;
    }
    return det;
}

Tensor value(const JetTensor& t)
{
    Tensor r(t.dim(), t.rank());
    for (std::size_t k = 0; k < t.size(); ++k) r.flat(k) = t.flat(k).value();
    return r;
}

} // namespace cfdual
