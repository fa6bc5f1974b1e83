// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cyla/tensor.hpp"

#include <Eigen/Eigenvalues>

namespace cyla {

/// Tucker model produced by (truncated) HOSVD: t ~= core x_0 U0 x_1 U1 ...
/// Factors are unitary for the full decomposition and column-orthonormal when
/// truncated. mode_singular_values holds the full descending singular-value
/// list of each mode-n unfolding regardless of truncation.
struct HosvdModel {
    ComplexTensor core;
    std::vector<MatC> factors;
    std::vector<Eigen::VectorXd> mode_singular_values;

    ComplexTensor reconstruct() const { return multilinear(core, factors); }
};

namespace detail {

/// Left singular vectors and singular values of a (typically wide) complex
/// matrix via the Hermitian eigendecomposition of A A^H. Returns the full
/// unitary basis with columns in descending singular-value order.
inline void left_singular_basis(const MatC& a, MatC& u, Eigen::VectorXd& sigma) {
    const Index m = a.rows();
    MatC gram = a * a.adjoint();
    Eigen::SelfAdjointEigenSolver<MatC> eig(gram);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("hosvd: eigendecomposition of mode Gram matrix failed");
    u.resize(m, m);
    sigma.resize(m);
    for (Index i = 0; i < m; ++i) {
        const Index src = m - 1 - i;  // ascending -> descending
        u.col(i) = eig.eigenvectors().col(src);
        sigma(i) = std::sqrt(std::max(0.0, eig.eigenvalues()(src)));
    }
}

/// Per-mode slice norms of a tensor, all modes in one pass: out[n](i) is the
/// Frobenius norm of the subtensor with mode-n index fixed to i.
inline std::vector<Eigen::VectorXd> mode_slice_norms(const ComplexTensor& t) {
    const Index order = t.order();
    std::vector<Eigen::VectorXd> acc(static_cast<size_t>(order));
    for (Index n = 0; n < order; ++n) acc[static_cast<size_t>(n)] = Eigen::VectorXd::Zero(t.extent(n));

    std::vector<Index> idx(static_cast<size_t>(order), 0);
    for (Index lin = 0; lin < t.size(); ++lin) {
        const double p = std::norm(t[lin]);
        for (Index n = 0; n < order; ++n) acc[static_cast<size_t>(n)](idx[static_cast<size_t>(n)]) += p;
        for (Index n = 0; n < order; ++n) {
            if (++idx[static_cast<size_t>(n)] < t.extent(n)) break;
            idx[static_cast<size_t>(n)] = 0;
        }
    }
    for (auto& v : acc) v = v.cwiseSqrt();
    return acc;
}

}  // namespace detail

/// Full higher-order SVD: factors are the left singular matrices of the mode-n
/// unfoldings; the core is the tensor multiplied by their adjoints. The mode-n
/// singular values are read off the core (sigma_{n,m} is the norm of the
/// mode-n slice m), which keeps trailing values at machine-precision scale.
inline HosvdModel hosvd(const ComplexTensor& t) {
    const Index order = t.order();
    HosvdModel model;
    model.factors.resize(static_cast<size_t>(order));
    model.mode_singular_values.resize(static_cast<size_t>(order));

    for (Index n = 0; n < order; ++n) {
        Eigen::VectorXd ignored;
        detail::left_singular_basis(unfold(t, n), model.factors[static_cast<size_t>(n)], ignored);
    }
    model.core = t;
    for (Index n = 0; n < order; ++n)
        model.core = mode_product(model.core, model.factors[static_cast<size_t>(n)].adjoint(), n);
    model.mode_singular_values = detail::mode_slice_norms(model.core);
    return model;
}

/// Truncated HOSVD keeping the leading ranks[n] left singular vectors per
/// mode. For a tensor of exact multilinear rank (K,...,K) truncated to those
/// ranks the reconstruction is exact up to rounding.
inline HosvdModel truncated_hosvd(const ComplexTensor& t, const std::vector<Index>& ranks) {
    const Index order = t.order();
    if (static_cast<Index>(ranks.size()) != order)
        throw std::invalid_argument("truncated_hosvd: one rank per mode required");
    for (Index n = 0; n < order; ++n) {
        const Index r = ranks[static_cast<size_t>(n)];
        if (r < 1 || r > t.extent(n))
            throw std::invalid_argument("truncated_hosvd: rank out of range in mode " + std::to_string(n));
    }

    HosvdModel model;
    model.factors.resize(static_cast<size_t>(order));
    model.mode_singular_values.resize(static_cast<size_t>(order));
    for (Index n = 0; n < order; ++n) {
        MatC u;
        Eigen::VectorXd sigma;
        detail::left_singular_basis(unfold(t, n), u, sigma);
        model.factors[static_cast<size_t>(n)] = u.leftCols(ranks[static_cast<size_t>(n)]);
        model.mode_singular_values[static_cast<size_t>(n)] = sigma;
    }
    model.core = t;
    for (Index n = 0; n < order; ++n)
        model.core = mode_product(model.core, model.factors[static_cast<size_t>(n)].adjoint(), n);
    return model;
}

}  // namespace cyla
