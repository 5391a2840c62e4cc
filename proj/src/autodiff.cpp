#include "ruledistill/autodiff.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <unordered_map>

#include "ruledistill/errors.hpp"

namespace rd {

namespace {
thread_local bool g_grad_mode = true;
}

bool grad_mode_enabled() noexcept { return g_grad_mode; }

NoGradGuard::NoGradGuard() : previous_(g_grad_mode) { g_grad_mode = false; }
NoGradGuard::~NoGradGuard() { g_grad_mode = previous_; }

Var::Var(Tensor value, bool requires_grad) : node_(std::make_shared<Node>()) {
    node_->value = std::move(value);
    node_->requires_grad = requires_grad;
}

const char* op_name(Op op) {
    switch (op) {
    case Op::leaf: return "leaf";
    case Op::matmul: return "matmul";
    case Op::matmul_nt: return "matmul_nt";
    case Op::matmul_tn: return "matmul_tn";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::mul: return "mul";
    case Op::affine: return "affine";
    case Op::add_row: return "add_row";
    case Op::sum_rows: return "sum_rows";
    case Op::broadcast_rows: return "broadcast_rows";
    case Op::sum: return "sum";
    case Op::expand: return "expand";
    case Op::mul_const: return "mul_const";
    case Op::relu: return "relu";
    case Op::sigmoid: return "sigmoid";
    case Op::softplus: return "softplus";
    case Op::reciprocal: return "reciprocal";
    case Op::log_clamped: return "log_clamped";
    }
    return "?";
}

namespace {

double stable_sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

template <class F>
Tensor map(const Tensor& x, F f) {
    Tensor out = x;
    for (auto& v : out.data()) v = f(v);
    return out;
}

/// Forward rule of every op; shared by op construction and replay.
Tensor compute(const Node& n, const Tensor& x, const Tensor* y) {
    switch (n.op) {
    case Op::leaf: return x;
    case Op::matmul: return kernel::matmul(x, *y);
    case Op::matmul_nt: return kernel::matmul_nt(x, *y);
    case Op::matmul_tn: return kernel::matmul_tn(x, *y);
    case Op::add: return kernel::add(x, *y);
    case Op::sub: return kernel::sub(x, *y);
    case Op::mul: return kernel::mul(x, *y);
    case Op::affine: return kernel::affine(x, n.a, n.b);
    case Op::add_row: return kernel::add_row(x, *y);
    case Op::sum_rows: return kernel::sum_rows(x);
    case Op::broadcast_rows: return kernel::broadcast_rows(x, n.shape[0]);
    case Op::sum: {
        double s = 0.0;
        for (double v : x.data()) s += v;
        return Tensor::scalar(s);
    }
    case Op::expand: return Tensor(n.shape, x.item());
    case Op::mul_const:
    case Op::relu: return kernel::mul(x, *n.aux);
    case Op::sigmoid: return map(x, stable_sigmoid);
    case Op::softplus: return map(x, [](double v) { return std::max(v, 0.0) + std::log1p(std::exp(-std::abs(v))); });
    case Op::reciprocal: return map(x, [](double v) { return 1.0 / v; });
    case Op::log_clamped: return map(x, [f = n.a](double v) { return std::log(std::max(v, f)); });
    }
    throw InvalidArgument("unknown op");
}

bool op_arity_two(Op op) {
    switch (op) {
    case Op::matmul:
    case Op::matmul_nt:
    case Op::matmul_tn:
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::add_row: return true;
    default: return false;
    }
}

struct Attrs {
    double a = 0.0, b = 0.0;
    Shape shape;
    std::shared_ptr<const Tensor> aux;
};

Var build(Op op, const Var& x, const Var& y, Attrs attrs = {}) {
    if (!x.defined() || (op_arity_two(op) && !y.defined()))
        throw InvalidArgument(std::string(op_name(op)) + ": undefined input");
    auto node = std::make_shared<Node>();
    node->op = op;
    node->a = attrs.a;
    node->b = attrs.b;
    node->shape = attrs.shape;
    node->aux = std::move(attrs.aux);
    node->value = compute(*node, x.value(), y.defined() ? &y.value() : nullptr);
    if (g_grad_mode && (x.requires_grad() || y.requires_grad())) {
        node->requires_grad = true;
        node->parents = {x, y};
    } else {
        node->op = Op::leaf;
        node->aux.reset();
    }
    return Var(std::move(node));
}

} // namespace

namespace {

Var mul_shared(const Var& a, std::shared_ptr<const Tensor> c) {
    if (!a.value().same_shape(*c))
        throw InvalidArgument("mul_const: incompatible shapes " + a.value().shape_string() + " and " + c->shape_string());
    return build(Op::mul_const, a, Var(), {0.0, 0.0, {}, std::move(c)});
}

/// Gradients of node's inputs given the gradient of its output.
std::array<Var, 2> backward(const Var& self, const Var& g) {
    const Node& n = *self.node();
    const Var& p = n.parents[0];
    const Var& q = n.parents[1];
    switch (n.op) {
    case Op::leaf: return {};
    case Op::matmul:
        return {p.requires_grad() ? matmul_nt(g, q) : Var(), q.requires_grad() ? matmul_tn(p, g) : Var()};
    case Op::matmul_nt:
        return {p.requires_grad() ? matmul(g, q) : Var(), q.requires_grad() ? matmul_tn(g, p) : Var()};
    case Op::matmul_tn:
        return {p.requires_grad() ? matmul_nt(q, g) : Var(), q.requires_grad() ? matmul(p, g) : Var()};
    case Op::add: return {g, g};
    case Op::sub: return {g, q.requires_grad() ? affine(g, -1.0) : Var()};
    case Op::mul: return {p.requires_grad() ? mul(g, q) : Var(), q.requires_grad() ? mul(g, p) : Var()};
    case Op::affine: return {affine(g, n.a)};
    case Op::add_row: return {g, q.requires_grad() ? sum_rows(g) : Var()};
    case Op::sum_rows: return {broadcast_rows(g, p.value().rows())};
    case Op::broadcast_rows: return {sum_rows(g)};
    case Op::sum: return {expand(g, p.value().shape())};
    case Op::expand: return {sum(g)};
    case Op::mul_const:
    case Op::relu: return {mul_shared(g, n.aux)};
    case Op::sigmoid: return {mul(g, mul(self, affine(self, -1.0, 1.0)))};
    case Op::softplus: return {mul(g, sigmoid(p))};
    case Op::reciprocal: return {mul(g, affine(mul(self, self), -1.0))};
    case Op::log_clamped: {
        // 1/a where the floor is inactive and 0 elsewhere, without dividing
        // by clamped values
        auto filler = std::make_shared<Tensor>(map(*n.aux, [](double v) { return 1.0 - v; }));
        const Var safe = add(mul_shared(p, n.aux), Var::constant(*filler));
        return {mul_shared(mul(g, reciprocal(safe)), n.aux)};
    }
    }
    return {};
}

std::atomic<std::uint64_t> g_visit_epoch{0};

/// Nodes reachable from y through recorded parents, parents first. Marks
/// visited nodes with `epoch` and sets `needed` on nodes from which some
/// node with target == epoch is reachable (the node itself included).
std::vector<Var> topo_order(const Var& y, std::uint64_t epoch) {
    std::vector<Var> order;
    std::vector<std::pair<const Var*, std::size_t>> stack;
    stack.emplace_back(&y, 0);
    y.node()->visit = epoch;
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        Node& node = *v->node();
        if (next < node.parents.size()) {
            const Var& p = node.parents[next++];
            if (p.defined() && p.node()->visit != epoch) {
                p.node()->visit = epoch;
                stack.emplace_back(&p, 0);
            }
            continue;
        }
        node.needed = node.target == epoch;
        for (const auto& p : node.parents) node.needed = node.needed || (p.defined() && p.node()->needed);
        order.push_back(*v);
        stack.pop_back();
    }
    return order;
}

} // namespace

std::vector<Var> grad(const Var& y, const std::vector<Var>& wrt, bool create_graph) {
    if (!y.defined() || y.value().size() != 1)
        throw InvalidArgument("grad: target must be a scalar, got shape " +
                              (y.defined() ? y.value().shape_string() : std::string("undefined")));
    std::optional<NoGradGuard> guard;
    if (!create_graph) guard.emplace();

    std::vector<Var> out;
    out.reserve(wrt.size());
    if (!y.requires_grad()) {
        for (const auto& w : wrt) out.push_back(Var::constant(kernel::fill_like(w.value(), 0.0)));
        return out;
    }
    // gradients accumulate in the nodes' scratch slots; the trace belongs to
    // this thread while grad runs
    const std::uint64_t epoch = ++g_visit_epoch;
    for (const auto& w : wrt)
        if (w.defined()) w.node()->target = epoch;
    const auto order = topo_order(y, epoch);
    struct ClearSlots {
        const std::vector<Var>& nodes;
        ~ClearSlots() {
            for (const auto& v : nodes) v.node()->grad_acc = Var();
        }
    } clear_slots{order};
    y.node()->grad_acc = Var::constant(kernel::fill_like(y.value(), 1.0));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node* node = it->node().get();
        if (node->op == Op::leaf || !node->needed || !node->grad_acc.defined()) continue;
        const auto parent_grads = backward(*it, node->grad_acc);
        for (std::size_t i = 0; i < 2; ++i) {
            const Var& p = node->parents[i];
            if (!p.requires_grad() || !p.node()->needed || !parent_grads[i].defined()) continue;
            Var& slot = p.node()->grad_acc;
            slot = slot.defined() ? add(slot, parent_grads[i]) : parent_grads[i];
        }
    }
    for (const auto& w : wrt) {
        if (w.defined() && w.node()->visit == epoch && w.node()->grad_acc.defined())
            out.push_back(w.node()->grad_acc);
        else
            out.push_back(Var::constant(kernel::fill_like(w.value(), 0.0)));
    }
    return out;
}

Tensor replay(const Var& y) {
    std::unordered_map<const Node*, Tensor> values;
    for (const auto& v : topo_order(y, ++g_visit_epoch)) {
        const Node& node = *v.node();
        if (node.op == Op::leaf) {
            values.emplace(&node, node.value);
            continue;
        }
        const Tensor& x = values.at(node.parents[0].node().get());
        const Tensor* other = node.parents[1].defined() ? &values.at(node.parents[1].node().get()) : nullptr;
        values.emplace(&node, compute(node, x, other));
    }
    return values.at(y.node().get());
}

// ---------------------------------------------------------------------------

Var matmul(const Var& a, const Var& b) { return build(Op::matmul, a, b); }
Var matmul_nt(const Var& a, const Var& b) { return build(Op::matmul_nt, a, b); }
Var matmul_tn(const Var& a, const Var& b) { return build(Op::matmul_tn, a, b); }
Var add(const Var& a, const Var& b) { return build(Op::add, a, b); }
Var sub(const Var& a, const Var& b) { return build(Op::sub, a, b); }
Var mul(const Var& a, const Var& b) { return build(Op::mul, a, b); }
Var affine(const Var& a, double scale, double shift) { return build(Op::affine, a, Var(), {scale, shift, {}, {}}); }
Var add_row(const Var& a, const Var& row) { return build(Op::add_row, a, row); }
Var sum_rows(const Var& a) { return build(Op::sum_rows, a, Var()); }

Var broadcast_rows(const Var& row, std::size_t rows) {
    return build(Op::broadcast_rows, row, Var(), {0.0, 0.0, Shape{rows}, {}});
}

Var sum(const Var& a) { return build(Op::sum, a, Var()); }

Var mean(const Var& a) { return affine(sum(a), 1.0 / static_cast<double>(a.value().size())); }

Var expand(const Var& scalar, const Shape& shape) {
    if (scalar.value().size() != 1) throw InvalidArgument("expand: expected a scalar");
    return build(Op::expand, scalar, Var(), {0.0, 0.0, shape, {}});
}

Var mul_const(const Var& a, const Tensor& c) { return mul_shared(a, std::make_shared<const Tensor>(c)); }

Var relu(const Var& a) {
    auto mask = std::make_shared<const Tensor>(map(a.value(), [](double v) { return v > 0.0 ? 1.0 : 0.0; }));
    return build(Op::relu, a, Var(), {0.0, 0.0, {}, std::move(mask)});
}

Var sigmoid(const Var& a) { return build(Op::sigmoid, a, Var()); }
Var softplus(const Var& a) { return build(Op::softplus, a, Var()); }
Var reciprocal(const Var& a) { return build(Op::reciprocal, a, Var()); }

Var log_clamped(const Var& a, double floor) {
    auto active = std::make_shared<const Tensor>(map(a.value(), [floor](double v) { return v > floor ? 1.0 : 0.0; }));
    return build(Op::log_clamped, a, Var(), {floor, 0.0, {}, std::move(active)});
}

} // namespace rd
