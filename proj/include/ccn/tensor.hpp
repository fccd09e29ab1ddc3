#pragma once

#include <span>
#include <vector>

#include "ccn/common.hpp"
#include "ccn/graph.hpp"

namespace ccn {

/// Dense k-order real tensor with explicit shape, row-major storage.
/// An order-0 tensor is a single scalar with empty shape.
class DenseTensor {
public:
    DenseTensor() : data_(1, 0.0) {}  // order-0 zero scalar

    explicit DenseTensor(std::vector<int> shape, real_t fill = 0.0);
    DenseTensor(std::vector<int> shape, std::vector<real_t> data);

    static DenseTensor scalar(real_t v);

    int order() const { return static_cast<int>(shape_.size()); }
    const std::vector<int>& shape() const { return shape_; }
    index_t size() const { return static_cast<index_t>(data_.size()); }

    std::span<const real_t> data() const { return data_; }
    std::span<real_t> data() { return data_; }

    real_t operator[](index_t flat) const { return data_[flat]; }
    real_t& operator[](index_t flat) { return data_[flat]; }

    real_t at(std::span<const int> idx) const { return data_[flat_index(idx)]; }
    real_t& at(std::span<const int> idx) { return data_[flat_index(idx)]; }
    real_t at(std::initializer_list<int> idx) const {
        return at(std::span<const int>(idx.begin(), idx.size()));
    }
    real_t& at(std::initializer_list<int> idx) {
        return data_[flat_index(std::span<const int>(idx.begin(), idx.size()))];
    }

    index_t flat_index(std::span<const int> idx) const;

    /// True when every extent equals every other (vacuously true for order 0).
    bool is_cubic() const;
    /// Extent shared by all dimensions of a cubic tensor; 1 for order 0.
    int cubic_extent() const;

    bool same_shape(const DenseTensor& o) const { return shape_ == o.shape_; }
    bool operator==(const DenseTensor& o) const {
        return shape_ == o.shape_ && data_ == o.data_;
    }

private:
    std::vector<int> shape_;
    std::vector<real_t> data_;
};

std::vector<index_t> row_major_strides(const std::vector<int>& shape);

/// Advances idx through shape in row-major order; returns false after the last index.
bool next_index(std::vector<int>& idx, const std::vector<int>& shape);

// The four basic tensor operations, plus linear combinations.

/// C[i...,j...] = A[i...] * B[j...]; order k+p.
DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b);

/// C[i1..ik] = A[i1..ik] * B[i_{dims[0]},..,i_{dims[p-1]}]; order k.
DenseTensor elementwise_product(const DenseTensor& a, const DenseTensor& b,
                                std::span<const int> dims);

/// Sums A over the listed dimensions; survivors keep their relative order.
DenseTensor project(const DenseTensor& a, std::span<const int> dims);

/// Scales and sums tensors of equal shape.
DenseTensor linear_combination(std::span<const DenseTensor> tensors,
                               std::span<const real_t> coeffs);

// Permutation actions on cubic tensors.

/// The k-fold permutation-matrix action: out[pi(j1),..,pi(jk)] = a[j1,..,jk].
DenseTensor permute_action(const DenseTensor& a, const Permutation& pi);

/// Applies the explicit m^2 x m^2 Kronecker matrix P_pi (x) P_pi to a
/// length-m^2 vector (the flattened form of the order-2 action).
DenseTensor kron_action_order2(const DenseTensor& f, const Permutation& pi);

} // namespace ccn
