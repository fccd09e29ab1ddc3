#include "ccn/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace ccn {

DenseTensor::DenseTensor(std::vector<int> shape, real_t fill) : shape_(std::move(shape)) {
    index_t total = 1;
    for (int e : shape_) {
        require(e > 0, "tensor extent must be positive, got ", e);
        total *= e;
    }
    data_.assign(static_cast<size_t>(total), fill);
}

DenseTensor::DenseTensor(std::vector<int> shape, std::vector<real_t> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    index_t total = 1;
    for (int e : shape_) {
        require(e > 0, "tensor extent must be positive, got ", e);
        total *= e;
    }
    require(static_cast<index_t>(data_.size()) == total, "data length ", data_.size(),
            " does not match shape product ", total);
}

DenseTensor DenseTensor::scalar(real_t v) {
    DenseTensor t;
    t.data_[0] = v;
    return t;
}

index_t DenseTensor::flat_index(std::span<const int> idx) const {
    require(static_cast<int>(idx.size()) == order(), "index arity ", idx.size(),
            " does not match order ", order());
    index_t flat = 0;
    for (int d = 0; d < order(); ++d) {
        require(idx[d] >= 0 && idx[d] < shape_[d], "index ", idx[d], " out of range for dim ", d);
        flat = flat * shape_[d] + idx[d];
    }
    return flat;
}

bool DenseTensor::is_cubic() const {
    for (int e : shape_)
        if (e != shape_[0]) return false;
    return true;
}

int DenseTensor::cubic_extent() const {
    require(is_cubic(), "tensor is not cubic");
    return order() == 0 ? 1 : shape_[0];
}

std::vector<index_t> row_major_strides(const std::vector<int>& shape) {
    std::vector<index_t> strides(shape.size(), 1);
    for (int d = static_cast<int>(shape.size()) - 2; d >= 0; --d)
        strides[d] = strides[d + 1] * shape[d + 1];
    return strides;
}

bool next_index(std::vector<int>& idx, const std::vector<int>& shape) {
    for (int d = static_cast<int>(shape.size()) - 1; d >= 0; --d) {
        if (++idx[d] < shape[d]) return true;
        idx[d] = 0;
    }
    return false;
}

DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b) {
    std::vector<int> shape = a.shape();
    shape.insert(shape.end(), b.shape().begin(), b.shape().end());
    std::vector<real_t> data(static_cast<size_t>(a.size()) * b.size());
    const auto av = a.data();
    const auto bv = b.data();
    index_t pos = 0;
    for (index_t i = 0; i < a.size(); ++i) {
        const real_t ai = av[i];
        for (index_t j = 0; j < b.size(); ++j) data[pos++] = ai * bv[j];
    }
    return DenseTensor(std::move(shape), std::move(data));
}

DenseTensor elementwise_product(const DenseTensor& a, const DenseTensor& b,
                                std::span<const int> dims) {
    require(static_cast<int>(dims.size()) == b.order(), "dims arity ", dims.size(),
            " does not match second operand order ", b.order());
    for (int t = 0; t < static_cast<int>(dims.size()); ++t) {
        const int d = dims[t];
        require(d >= 0 && d < a.order(), "dimension ", d, " out of range");
        require(a.shape()[d] == b.shape()[t], "extent mismatch along dim ", d, ": ", a.shape()[d],
                " vs ", b.shape()[t]);
    }
    DenseTensor out(a.shape());
    const auto b_strides = row_major_strides(b.shape());
    std::vector<int> idx(a.order(), 0);
    index_t flat = 0;
    do {
        index_t bpos = 0;
        for (int t = 0; t < static_cast<int>(dims.size()); ++t) bpos += b_strides[t] * idx[dims[t]];
        out[flat] = a[flat] * b[bpos];
        ++flat;
    } while (next_index(idx, a.shape()));
    return out;
}

DenseTensor project(const DenseTensor& a, std::span<const int> dims) {
    std::vector<char> removed(a.order(), 0);
    for (int d : dims) {
        require(d >= 0 && d < a.order(), "projection dim ", d, " out of range");
        require(!removed[d], "duplicate projection dim ", d);
        removed[d] = 1;
    }
    std::vector<int> out_shape;
    for (int d = 0; d < a.order(); ++d)
        if (!removed[d]) out_shape.push_back(a.shape()[d]);
    DenseTensor out(out_shape);
    const auto out_strides = row_major_strides(out_shape);
    // Per-input-dim contribution to the output flat index (0 for removed dims).
    std::vector<index_t> contrib(a.order(), 0);
    int keep = 0;
    for (int d = 0; d < a.order(); ++d)
        if (!removed[d]) contrib[d] = out_strides[keep++];
    std::vector<int> idx(a.order(), 0);
    index_t flat = 0;
    do {
        index_t opos = 0;
        for (int d = 0; d < a.order(); ++d) opos += contrib[d] * idx[d];
        out[opos] += a[flat];
        ++flat;
    } while (next_index(idx, a.shape()));
    return out;
}

DenseTensor linear_combination(std::span<const DenseTensor> tensors,
                               std::span<const real_t> coeffs) {
    require(!tensors.empty(), "linear combination of zero tensors");
    require(tensors.size() == coeffs.size(), "got ", tensors.size(), " tensors but ",
            coeffs.size(), " coefficients");
    DenseTensor out(tensors[0].shape());
    for (size_t t = 0; t < tensors.size(); ++t) {
        require(tensors[t].same_shape(out), "shape mismatch in linear combination at tensor ", t);
        const auto v = tensors[t].data();
        const real_t c = coeffs[t];
        for (index_t i = 0; i < out.size(); ++i) out[i] += c * v[i];
    }
    return out;
}

DenseTensor permute_action(const DenseTensor& a, const Permutation& pi) {
    require(a.is_cubic(), "permutation action requires a cubic tensor");
    if (a.order() == 0) return a;
    require(a.cubic_extent() == pi.size(), "tensor extent ", a.cubic_extent(),
            " does not match permutation size ", pi.size());
    DenseTensor out(a.shape());
    const auto strides = row_major_strides(a.shape());
    std::vector<int> idx(a.order(), 0);
    index_t flat = 0;
    do {
        index_t opos = 0;
        for (int d = 0; d < a.order(); ++d) opos += strides[d] * pi(idx[d]);
        out[opos] = a[flat];
        ++flat;
    } while (next_index(idx, a.shape()));
    return out;
}

DenseTensor kron_action_order2(const DenseTensor& f, const Permutation& pi) {
    require(f.order() == 1, "expected an order-1 tensor, got order ", f.order());
    const index_t len = f.size();
    const int m = static_cast<int>(std::llround(std::sqrt(static_cast<double>(len))));
    require(static_cast<index_t>(m) * m == len, "vector length ", len, " is not a perfect square");
    require(m == pi.size(), "implied extent ", m, " does not match permutation size ", pi.size());

    // P[i][j] = 1 iff pi(j) = i; K = P (x) P materialized in full.
    std::vector<real_t> p(static_cast<size_t>(m) * m, 0.0);
    for (int j = 0; j < m; ++j) p[static_cast<size_t>(pi(j)) * m + j] = 1.0;
    std::vector<real_t> kron(static_cast<size_t>(len) * len, 0.0);
    for (int i1 = 0; i1 < m; ++i1)
        for (int i2 = 0; i2 < m; ++i2)
            for (int j1 = 0; j1 < m; ++j1)
                for (int j2 = 0; j2 < m; ++j2)
                    kron[static_cast<size_t>(i1 * m + i2) * len + (j1 * m + j2)] =
                        p[static_cast<size_t>(i1) * m + j1] * p[static_cast<size_t>(i2) * m + j2];

    DenseTensor out(f.shape());
    for (index_t r = 0; r < len; ++r) {
        real_t acc = 0.0;
        for (index_t c = 0; c < len; ++c) acc += kron[static_cast<size_t>(r) * len + c] * f[c];
        out[r] = acc;
    }
    return out;
}

} // namespace ccn
