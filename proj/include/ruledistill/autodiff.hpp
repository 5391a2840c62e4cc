#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "ruledistill/tensor.hpp"

namespace rd {

struct Node;

/// Handle to a node in the computation trace. Copies share the node.
class Var {
public:
    Var() = default;
    /// A leaf holding `value`.
    explicit Var(Tensor value, bool requires_grad = false);
    explicit Var(std::shared_ptr<Node> node) : node_(std::move(node)) {}

    static Var constant(Tensor value) { return Var(std::move(value), false); }
    static Var parameter(Tensor value) { return Var(std::move(value), true); }

    bool defined() const noexcept { return node_ != nullptr; }
    const Tensor& value() const;
    bool requires_grad() const noexcept;
    double item() const { return value().item(); }
    const std::shared_ptr<Node>& node() const noexcept { return node_; }

    /// Drops the history: a constant leaf with the same value.
    Var detach() const { return constant(value()); }

private:
    std::shared_ptr<Node> node_;
};

enum class Op : unsigned char {
    leaf,
    matmul,
    matmul_nt,
    matmul_tn,
    add,
    sub,
    mul,
    affine,
    add_row,
    sum_rows,
    broadcast_rows,
    sum,
    expand,
    mul_const,
    relu,
    sigmoid,
    softplus,
    reciprocal,
    log_clamped,
};

const char* op_name(Op op);

/// One recorded operation. The backward rule of every op is expressed with
/// the ops themselves, so gradients computed with create_graph are recorded
/// and can be differentiated again.
struct Node {
    Tensor value;
    bool requires_grad = false;
    Op op = Op::leaf;
    std::array<Var, 2> parents;
    double a = 0.0, b = 0.0;            // affine scale/shift, log floor
    Shape shape;                         // expand target, broadcast rows
    std::shared_ptr<const Tensor> aux;   // constant operand or mask

    // scratch state of the traversal currently running on this trace
    std::uint64_t visit = 0;
    std::uint64_t target = 0; // equals the epoch for grad's wrt nodes
    bool needed = false;      // some wrt node is this node or an ancestor
    Var grad_acc;

    std::size_t arity() const noexcept { return parents[1].defined() ? 2 : (parents[0].defined() ? 1 : 0); }
};

inline const Tensor& Var::value() const { return node_->value; }
inline bool Var::requires_grad() const noexcept { return node_ && node_->requires_grad; }

bool grad_mode_enabled() noexcept;

/// Disables recording on this thread for the guard's lifetime.
class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
    bool previous_;
};

/// Reverse-mode gradients of a scalar `y` with respect to `wrt`. With
/// create_graph the returned gradients are recorded ops of the same trace.
/// Inputs that `y` does not depend on get zero gradients.
std::vector<Var> grad(const Var& y, const std::vector<Var>& wrt, bool create_graph = false);

/// Recomputes y from the leaf values through the recorded ops.
Tensor replay(const Var& y);

// ---------------------------------------------------------------------------
// ops

Var matmul(const Var& a, const Var& b);
Var matmul_nt(const Var& a, const Var& b); // a b^T
Var matmul_tn(const Var& a, const Var& b); // a^T b
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
/// scale * a + shift, elementwise.
Var affine(const Var& a, double scale, double shift = 0.0);
/// Adds a [1, n] row to every row of a.
Var add_row(const Var& a, const Var& row);
Var sum_rows(const Var& a);
Var broadcast_rows(const Var& row, std::size_t rows);
/// Sum of all elements as a [1, 1] tensor.
Var sum(const Var& a);
Var mean(const Var& a);
/// Broadcasts a [1, 1] tensor to `shape`.
Var expand(const Var& scalar, const Shape& shape);
/// Elementwise product with a constant tensor (dropout masks, labels).
Var mul_const(const Var& a, const Tensor& c);
Var relu(const Var& a);
Var sigmoid(const Var& a);
/// log(1 + e^a), computed stably.
Var softplus(const Var& a);
Var reciprocal(const Var& a);
/// log(max(a, floor)); the gradient is zero where the floor is active.
Var log_clamped(const Var& a, double floor);

inline Var operator+(const Var& a, const Var& b) { return add(a, b); }
inline Var operator-(const Var& a, const Var& b) { return sub(a, b); }
inline Var operator*(const Var& a, const Var& b) { return mul(a, b); }
inline Var operator*(double s, const Var& a) { return affine(a, s); }

} // namespace rd
