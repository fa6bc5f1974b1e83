// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyla {

using cdouble = std::complex<double>;
using Index = Eigen::Index;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;

/// Dense complex tensor of arbitrary order. Storage is a fixed canonical
/// linearization with the first index fastest-varying (the column-major
/// generalization), so an order-2 tensor coincides with a column-major matrix.
class ComplexTensor {
public:
    ComplexTensor() = default;

    explicit ComplexTensor(std::vector<Index> shape)
        : shape_(std::move(shape)), data_(checked_size(shape_), cdouble(0.0, 0.0)) {}

    ComplexTensor(std::vector<Index> shape, std::vector<cdouble> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (static_cast<Index>(data_.size()) != checked_size(shape_))
            throw std::invalid_argument("ComplexTensor: data length does not match shape");
    }

    Index order() const { return static_cast<Index>(shape_.size()); }
    Index extent(Index mode) const { return shape_.at(static_cast<size_t>(mode)); }
    const std::vector<Index>& shape() const { return shape_; }
    Index size() const { return static_cast<Index>(data_.size()); }

    const std::vector<cdouble>& data() const { return data_; }
    std::vector<cdouble>& data() { return data_; }

    cdouble& operator[](Index linear) { return data_[static_cast<size_t>(linear)]; }
    const cdouble& operator[](Index linear) const { return data_[static_cast<size_t>(linear)]; }

    /// Element access by multi-index (first index fastest in memory).
    cdouble& at(std::span<const Index> idx) { return data_[static_cast<size_t>(linear_index(idx))]; }
    const cdouble& at(std::span<const Index> idx) const {
        return data_[static_cast<size_t>(linear_index(idx))];
    }
    cdouble& at(std::initializer_list<Index> idx) { return at(std::span<const Index>(idx.begin(), idx.size())); }
    const cdouble& at(std::initializer_list<Index> idx) const {
        return at(std::span<const Index>(idx.begin(), idx.size()));
    }

    Index linear_index(std::span<const Index> idx) const {
        if (static_cast<Index>(idx.size()) != order())
            throw std::invalid_argument("ComplexTensor: index order mismatch");
        Index lin = 0, stride = 1;
        for (Index n = 0; n < order(); ++n) {
            const Index i = idx[static_cast<size_t>(n)];
            if (i < 0 || i >= shape_[static_cast<size_t>(n)])
                throw std::out_of_range("ComplexTensor: index out of range in mode " + std::to_string(n));
            lin += i * stride;
            stride *= shape_[static_cast<size_t>(n)];
        }
        return lin;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const cdouble& v : data_) acc += std::norm(v);
        return std::sqrt(acc);
    }

    ComplexTensor& operator+=(const ComplexTensor& other) {
        if (other.shape_ != shape_)
            throw std::invalid_argument("ComplexTensor: shape mismatch in accumulation");
        for (size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
        return *this;
    }

    ComplexTensor& operator*=(cdouble s) {
        for (cdouble& v : data_) v *= s;
        return *this;
    }

    static Index checked_size(const std::vector<Index>& shape) {
        if (shape.empty()) throw std::invalid_argument("ComplexTensor: order must be >= 1");
        Index total = 1;
        for (Index e : shape) {
            if (e < 0) throw std::invalid_argument("ComplexTensor: negative extent");
            total *= e;
        }
        return total;
    }

private:
    std::vector<Index> shape_;
    std::vector<cdouble> data_;
};

namespace detail {

/// Modes contributing to the columns of the mode-n unfolding, slowest-varying
/// first. The cycle n+1,...,N-1,0,...,n-1 keeps the unfolding consistent with
/// the Kronecker chain B(n+1) x ... x B(N) x B(1) x ... x B(n-1) used by the
/// multilinear-product identity, whose leftmost factor indexes the most
/// significant digit of the column index.
inline std::vector<Index> unfold_cycle(Index order, Index mode) {
    std::vector<Index> cycle;
    cycle.reserve(static_cast<size_t>(order - 1));
    for (Index m = mode + 1; m < order; ++m) cycle.push_back(m);
    for (Index m = 0; m < mode; ++m) cycle.push_back(m);
    return cycle;
}

inline void check_mode(const ComplexTensor& t, Index mode) {
    if (mode < 0 || mode >= t.order())
        throw std::invalid_argument("tensor mode index out of range: " + std::to_string(mode));
}

}  // namespace detail

/// Mode-n unfolding: an extent(n) x (size/extent(n)) matrix whose columns are
/// the mode-n fibers, ordered cyclically over the remaining modes.
inline MatC unfold(const ComplexTensor& t, Index mode) {
    detail::check_mode(t, mode);
    const Index order = t.order();
    const Index rows = t.extent(mode);
    const Index cols = rows == 0 ? 0 : t.size() / rows;
    MatC m(rows, cols);

    const std::vector<Index> cycle = detail::unfold_cycle(order, mode);
    std::vector<Index> col_stride(static_cast<size_t>(order), 0);
    Index stride = 1;
    for (auto it = cycle.rbegin(); it != cycle.rend(); ++it) {
        col_stride[static_cast<size_t>(*it)] = stride;
        stride *= t.extent(*it);
    }

    std::vector<Index> idx(static_cast<size_t>(order), 0);
    for (Index lin = 0; lin < t.size(); ++lin) {
        Index col = 0;
        for (Index n = 0; n < order; ++n)
            if (n != mode) col += idx[static_cast<size_t>(n)] * col_stride[static_cast<size_t>(n)];
        m(idx[static_cast<size_t>(mode)], col) = t[lin];
        for (Index n = 0; n < order; ++n) {
            if (++idx[static_cast<size_t>(n)] < t.extent(n)) break;
            idx[static_cast<size_t>(n)] = 0;
        }
    }
    return m;
}

/// Inverse of unfold: rebuilds the tensor of the given shape from its mode-n
/// unfolding.
inline ComplexTensor fold(const MatC& m, const std::vector<Index>& shape, Index mode) {
    ComplexTensor t(shape);
    detail::check_mode(t, mode);
    if (m.rows() != t.extent(mode) || m.size() != t.size())
        throw std::invalid_argument("fold: matrix dimensions do not match target shape");

    const Index order = t.order();
    const std::vector<Index> cycle = detail::unfold_cycle(order, mode);
    std::vector<Index> col_stride(static_cast<size_t>(order), 0);
    Index stride = 1;
    for (auto it = cycle.rbegin(); it != cycle.rend(); ++it) {
        col_stride[static_cast<size_t>(*it)] = stride;
        stride *= t.extent(*it);
    }

    std::vector<Index> idx(static_cast<size_t>(order), 0);
    for (Index lin = 0; lin < t.size(); ++lin) {
        Index col = 0;
        for (Index n = 0; n < order; ++n)
            if (n != mode) col += idx[static_cast<size_t>(n)] * col_stride[static_cast<size_t>(n)];
        t[lin] = m(idx[static_cast<size_t>(mode)], col);
        for (Index n = 0; n < order; ++n) {
            if (++idx[static_cast<size_t>(n)] < t.extent(n)) break;
            idx[static_cast<size_t>(n)] = 0;
        }
    }
    return t;
}

/// Mode-n product t x_n m. The matrix columns must match extent(n); the result
/// has mode-n extent m.rows().
inline ComplexTensor mode_product(const ComplexTensor& t, const MatC& m, Index mode) {
    detail::check_mode(t, mode);
    if (m.cols() != t.extent(mode))
        throw std::invalid_argument("mode_product: matrix columns must equal tensor extent in mode " +
                                    std::to_string(mode));
    std::vector<Index> out_shape = t.shape();
    out_shape[static_cast<size_t>(mode)] = m.rows();
    return fold(m * unfold(t, mode), out_shape, mode);
}

/// Multilinear product core x_0 F0 x_1 F1 ... ; a null factor leaves that mode
/// untouched.
inline ComplexTensor multilinear(const ComplexTensor& core, const std::vector<const MatC*>& factors) {
    if (static_cast<Index>(factors.size()) != core.order())
        throw std::invalid_argument("multilinear: one factor slot per mode required");
    ComplexTensor out = core;
    for (Index n = 0; n < core.order(); ++n)
        if (factors[static_cast<size_t>(n)] != nullptr) out = mode_product(out, *factors[static_cast<size_t>(n)], n);
    return out;
}

inline ComplexTensor multilinear(const ComplexTensor& core, const std::vector<MatC>& factors) {
    std::vector<const MatC*> ptrs;
    ptrs.reserve(factors.size());
    for (const MatC& f : factors) ptrs.push_back(&f);
    return multilinear(core, ptrs);
}

/// Concatenation along one mode; all other extents must agree.
inline ComplexTensor concat(const ComplexTensor& a, const ComplexTensor& b, Index mode) {
    detail::check_mode(a, mode);
    if (a.order() != b.order())
        throw std::invalid_argument("concat: tensor orders differ");
    for (Index n = 0; n < a.order(); ++n)
        if (n != mode && a.extent(n) != b.extent(n))
            throw std::invalid_argument("concat: extents differ off the concatenation mode");

    std::vector<Index> out_shape = a.shape();
    out_shape[static_cast<size_t>(mode)] = a.extent(mode) + b.extent(mode);
    ComplexTensor out(out_shape);

    std::vector<Index> idx(static_cast<size_t>(a.order()), 0);
    auto copy_block = [&](const ComplexTensor& src, Index offset) {
        std::fill(idx.begin(), idx.end(), 0);
        for (Index lin = 0; lin < src.size(); ++lin) {
            std::vector<Index> out_idx = idx;
            out_idx[static_cast<size_t>(mode)] += offset;
            out.at(out_idx) = src[lin];
            for (Index n = 0; n < src.order(); ++n) {
                if (++idx[static_cast<size_t>(n)] < src.extent(n)) break;
                idx[static_cast<size_t>(n)] = 0;
            }
        }
    };
    copy_block(a, 0);
    copy_block(b, a.extent(mode));
    return out;
}

/// Contiguous selection of `count` indices starting at `start` in one mode.
inline ComplexTensor slice(const ComplexTensor& t, Index mode, Index start, Index count) {
    detail::check_mode(t, mode);
    if (start < 0 || count < 0 || start + count > t.extent(mode))
        throw std::invalid_argument("slice: range exceeds extent of mode " + std::to_string(mode));
    std::vector<Index> out_shape = t.shape();
    out_shape[static_cast<size_t>(mode)] = count;
    ComplexTensor out(out_shape);

    std::vector<Index> idx(static_cast<size_t>(out.order()), 0);
    for (Index lin = 0; lin < out.size(); ++lin) {
        std::vector<Index> src_idx = idx;
        src_idx[static_cast<size_t>(mode)] += start;
        out[lin] = t.at(src_idx);
        for (Index n = 0; n < out.order(); ++n) {
            if (++idx[static_cast<size_t>(n)] < out.extent(n)) break;
            idx[static_cast<size_t>(n)] = 0;
        }
    }
    return out;
}

/// Outer product v0 o v1 o ... o v(N-1) as an order-N rank-one tensor.
inline ComplexTensor outer(const std::vector<VecC>& vectors) {
    if (vectors.empty()) throw std::invalid_argument("outer: at least one vector required");
    std::vector<Index> shape;
    shape.reserve(vectors.size());
    for (const VecC& v : vectors) shape.push_back(v.size());
    ComplexTensor out(shape);

    std::vector<Index> idx(vectors.size(), 0);
    for (Index lin = 0; lin < out.size(); ++lin) {
        cdouble prod(1.0, 0.0);
        for (size_t n = 0; n < vectors.size(); ++n) prod *= vectors[n](idx[n]);
        out[lin] = prod;
        for (size_t n = 0; n < vectors.size(); ++n) {
            if (++idx[n] < out.extent(static_cast<Index>(n))) break;
            idx[n] = 0;
        }
    }
    return out;
}

/// Identity superdiagonal tensor of the given order: 1 where all indices
/// coincide, 0 elsewhere.
inline ComplexTensor superdiagonal_identity(Index order, Index k) {
    if (order < 2) throw std::invalid_argument("superdiagonal_identity: order must be >= 2");
    if (k < 1) throw std::invalid_argument("superdiagonal_identity: size must be >= 1");
    ComplexTensor t(std::vector<Index>(static_cast<size_t>(order), k));
    Index stride = 0, step = 1;
    for (Index n = 0; n < order; ++n) {
        stride += step;
        step *= k;
    }
    for (Index i = 0; i < k; ++i) t[i * stride] = cdouble(1.0, 0.0);
    return t;
}

/// Kronecker product with the usual convention: the left factor indexes the
/// most significant digit of the composite index.
inline MatC kron(const MatC& a, const MatC& b) {
    MatC out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline VecC kron(const VecC& a, const VecC& b) {
    VecC out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

/// Number of singular values above tol_factor times the largest.
inline Index numerical_rank(const Eigen::VectorXd& singular_values, double tol_factor = 1e-8) {
    if (singular_values.size() == 0) return 0;
    const double thresh = tol_factor * singular_values.maxCoeff();
    Index r = 0;
    for (Index i = 0; i < singular_values.size(); ++i)
        if (singular_values(i) > thresh) ++r;
    return r;
}

}  // namespace cyla
