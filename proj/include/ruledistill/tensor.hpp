#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace rd {

/// Dimension list stored inline (rank at most 4).
class Shape {
public:
    static constexpr std::size_t kMaxRank = 4;

    Shape() = default;
    Shape(std::initializer_list<std::size_t> dims);
    explicit Shape(const std::vector<std::size_t>& dims);

    std::size_t size() const noexcept { return rank_; }
    bool empty() const noexcept { return rank_ == 0; }
    std::size_t operator[](std::size_t i) const { return dims_[i]; }
    std::size_t front() const { return dims_[0]; }
    const std::size_t* begin() const noexcept { return dims_; }
    const std::size_t* end() const noexcept { return dims_ + rank_; }
    std::size_t elements() const noexcept;

    friend bool operator==(const Shape& a, const Shape& b) noexcept;

private:
    std::size_t dims_[kMaxRank] = {};
    std::size_t rank_ = 0;
};

/// Dense row-major array of doubles. The MLP only needs rank 2; scalars
/// are [1, 1] tensors.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, double fill = 0.0);
    Tensor(Shape shape, std::vector<double> data);

    static Tensor scalar(double v) { return Tensor({1, 1}, v); }
    static Tensor matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t rows() const;
    std::size_t cols() const;

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

    /// Value of a [1, 1] tensor.
    double item() const;

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool same_shape(const Tensor& other) const noexcept { return shape_ == other.shape_; }
    bool all_finite() const;
    std::string shape_string() const;

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    Shape shape_;
    std::vector<double> data_;
};

// Kernels. All throw InvalidArgument on shape mismatch.
namespace kernel {

Tensor matmul(const Tensor& a, const Tensor& b);    // a b
Tensor matmul_nt(const Tensor& a, const Tensor& b); // a b^T
Tensor matmul_tn(const Tensor& a, const Tensor& b); // a^T b
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor affine(const Tensor& a, double scale, double shift);
Tensor add_row(const Tensor& a, const Tensor& row);
Tensor sum_rows(const Tensor& a);
Tensor broadcast_rows(const Tensor& row, std::size_t rows);
Tensor fill_like(const Tensor& shape_of, double v);

} // namespace kernel

} // namespace rd
