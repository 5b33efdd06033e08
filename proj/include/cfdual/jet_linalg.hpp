#pragma once

#include "cfdual/jet.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace cfdual {

/// Dense matrix of jets sharing one dimension. Order is that of the
/// lowest-order entry after arithmetic.
class JetMatrix {
public:
    JetMatrix() = default;
    JetMatrix(std::size_t rows, std::size_t cols, const Jet& fill);
    /// Constant matrix lifted to jets of the given dimension and order.
    static JetMatrix constant(const Eigen::MatrixXd& m, std::size_t dim, int order);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t dim() const { return a_.empty() ? 0 : a_.front().dim(); }
    int order() const;

    Jet& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Jet& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Eigen::MatrixXd value() const;
    JetMatrix derivative(std::size_t axis) const;
    JetMatrix truncated(int order) const;
    JetMatrix transposed() const;

    JetMatrix& operator+=(const JetMatrix& o);
    JetMatrix& operator-=(const JetMatrix& o);
    JetMatrix& operator*=(double s);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Jet> a_;
};

JetMatrix operator+(JetMatrix a, const JetMatrix& b);
JetMatrix operator-(JetMatrix a, const JetMatrix& b);
JetMatrix operator*(const JetMatrix& a, const JetMatrix& b);
JetMatrix operator*(JetMatrix a, double s);
JetMatrix operator*(double s, JetMatrix a);

/// Inverse as a jet: Neumann series about the (invertible) value.
JetMatrix inverse(const JetMatrix& m);
Jet trace(const JetMatrix& m);
Jet determinant(const JetMatrix& m);

/// Jets indexed by several indices of a common range, row-major.
template <class T>
class DenseTensor {
public:
    DenseTensor() = default;
    DenseTensor(std::size_t dim, std::size_t rank, const T& fill = T{})
        : dim_(dim), rank_(rank), a_(ipow(dim, rank), fill)
    {
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t rank() const noexcept { return rank_; }
    std::size_t size() const noexcept { return a_.size(); }
    T& flat(std::size_t k) { return a_[k]; }
    const T& flat(std::size_t k) const { return a_[k]; }

    template <class... I>
    T& operator()(I... idx)
    {
        return a_[offset(idx...)];
    }
    template <class... I>
    const T& operator()(I... idx) const
    {
        return a_[offset(idx...)];
    }

private:
    static std::size_t ipow(std::size_t b, std::size_t e)
    {
        std::size_t r = 1;
        while (e--) r *= b;
        return r;
    }
    template <class... I>
    std::size_t offset(I... idx) const
    {
        std::size_t k = 0;
        ((k = k * dim_ + static_cast<std::size_t>(idx)), ...);
        return k;
    }

    std::size_t dim_ = 0, rank_ = 0;
    std::vector<T> a_;
};

using Tensor = DenseTensor<double>;
using JetTensor = DenseTensor<Jet>;

Tensor value(const JetTensor& t);

} // namespace cfdual
