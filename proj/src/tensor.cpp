#include "ruledistill/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "ruledistill/errors.hpp"

namespace rd {

Shape::Shape(std::initializer_list<std::size_t> dims) {
    if (dims.size() > kMaxRank) throw InvalidArgument("tensor rank above 4 is not supported");
    for (auto d : dims) dims_[rank_++] = d;
}

Shape::Shape(const std::vector<std::size_t>& dims) {
    if (dims.size() > kMaxRank) throw InvalidArgument("tensor rank above 4 is not supported");
    for (auto d : dims) dims_[rank_++] = d;
}

std::size_t Shape::elements() const noexcept {
    return std::accumulate(begin(), end(), std::size_t{1}, std::multiplies<>());
}

bool operator==(const Shape& a, const Shape& b) noexcept { return std::equal(a.begin(), a.end(), b.begin(), b.end()); }

namespace {

void require(bool ok, const char* op, const Tensor& a, const Tensor& b) {
    if (!ok) throw InvalidArgument(std::string(op) + ": incompatible shapes " + a.shape_string() + " and " + b.shape_string());
}

void require_rank2(const Tensor& a, const char* op) {
    if (a.shape().size() != 2) throw InvalidArgument(std::string(op) + ": expected a matrix, got " + a.shape_string());
}

} // namespace

Tensor::Tensor(Shape shape, double fill) : shape_(shape), data_(shape_.elements(), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != shape_.elements())
        throw InvalidArgument("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                              shape_string());
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values) {
    return Tensor({rows, cols}, std::vector<double>(values));
}

std::size_t Tensor::rows() const { return shape_.empty() ? 1 : shape_.front(); }

std::size_t Tensor::cols() const {
    if (shape_.size() < 2) return 1;
    return data_.size() / shape_.front();
}

double Tensor::item() const {
    if (data_.size() != 1) throw InvalidArgument("item() on a tensor of shape " + shape_string());
    return data_[0];
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

std::string Tensor::shape_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape_.size(); ++i) s += (i ? ", " : "") + std::to_string(shape_[i]);
    return s + "]";
}

namespace kernel {

Tensor matmul(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul");
    require_rank2(b, "matmul");
    require(a.cols() == b.rows(), "matmul", a, b);
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Tensor out({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        double* o = &out.data()[i * n];
        for (std::size_t p = 0; p < k; ++p) {
            const double av = a.data()[i * k + p];
            if (av == 0.0) continue;
            const double* br = &b.data()[p * n];
            for (std::size_t j = 0; j < n; ++j) o[j] += av * br[j];
        }
    }
    return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul_nt");
    require_rank2(b, "matmul_nt");
    require(a.cols() == b.cols(), "matmul_nt", a, b);
    const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
    Tensor out({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        const double* ar = &a.data()[i * k];
        for (std::size_t j = 0; j < n; ++j) {
            const double* br = &b.data()[j * k];
            double s = 0.0;
            for (std::size_t p = 0; p < k; ++p) s += ar[p] * br[p];
            out.data()[i * n + j] = s;
        }
    }
    return out;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
    require_rank2(a, "matmul_tn");
    require_rank2(b, "matmul_tn");
    require(a.rows() == b.rows(), "matmul_tn", a, b);
    const std::size_t m = a.cols(), k = a.rows(), n = b.cols();
    Tensor out({m, n});
    for (std::size_t p = 0; p < k; ++p) {
        const double* ar = &a.data()[p * m];
        const double* br = &b.data()[p * n];
        for (std::size_t i = 0; i < m; ++i) {
            const double av = ar[i];
            if (av == 0.0) continue;
            double* o = &out.data()[i * n];
            for (std::size_t j = 0; j < n; ++j) o[j] += av * br[j];
        }
    }
    return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
    require(a.same_shape(b), "add", a, b);
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require(a.same_shape(b), "sub", a, b);
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require(a.same_shape(b), "mul", a, b);
    Tensor out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
    return out;
}

Tensor affine(const Tensor& a, double scale, double shift) {
    Tensor out = a;
    for (auto& v : out.data()) v = scale * v + shift;
    return out;
}

Tensor add_row(const Tensor& a, const Tensor& row) {
    require_rank2(a, "add_row");
    require(row.shape().size() == 2 && row.rows() == 1 && row.cols() == a.cols(), "add_row", a, row);
    Tensor out = a;
    const std::size_t n = a.cols();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) out.data()[i * n + j] += row[j];
    return out;
}

Tensor sum_rows(const Tensor& a) {
    require_rank2(a, "sum_rows");
    const std::size_t n = a.cols();
    Tensor out({1, n});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) out[j] += a.data()[i * n + j];
    return out;
}

Tensor broadcast_rows(const Tensor& row, std::size_t rows) {
    require_rank2(row, "broadcast_rows");
    if (row.rows() != 1) throw InvalidArgument("broadcast_rows: expected a single row, got " + row.shape_string());
    const std::size_t n = row.cols();
    Tensor out({rows, n});
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < n; ++j) out.data()[i * n + j] = row[j];
    return out;
}

Tensor fill_like(const Tensor& shape_of, double v) { return Tensor(shape_of.shape(), v); }

} // namespace kernel

} // namespace rd
