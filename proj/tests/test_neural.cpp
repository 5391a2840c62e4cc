#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "ruledistill/autodiff.hpp"
#include "ruledistill/errors.hpp"
#include "ruledistill/mlp.hpp"

using namespace rd;

namespace {

Tensor random_tensor(Shape s, Rng& rng, double scale = 1.0) {
    Tensor t(s);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = scale * (2.0 * rng.uniform() - 1.0);
    return t;
}

Tensor labels_of(std::initializer_list<double> v) {
    Tensor t({v.size(), 1});
    std::size_t i = 0;
    for (double x : v) t[i++] = x;
    return t;
}

// Compares autodiff gradients of loss(params) with central differences.
void check_gradients(ParamSet params, const std::function<Var(const std::vector<Var>&)>& loss) {
    const auto vars = as_parameters(params);
    const auto grads = grad(loss(vars), vars);
    const double h = 1e-6;
    for (std::size_t k = 0; k < params.size(); ++k) {
        for (std::size_t i = 0; i < params[k].size(); ++i) {
            const double saved = params[k][i];
            params[k][i] = saved + h;
            const double up = loss(as_parameters(params)).item();
            params[k][i] = saved - h;
            const double down = loss(as_parameters(params)).item();
            params[k][i] = saved;
            const double fd = (up - down) / (2 * h);
            const double g = grads[k].value()[i];
            const double scale = std::max({std::abs(fd), std::abs(g), 1e-3});
            CHECK_MESSAGE(std::abs(fd - g) / scale <= 1e-4, "tensor " << k << " entry " << i << ": " << g << " vs " << fd);
        }
    }
}

std::vector<Object> some_objects() {
    std::vector<Object> out;
    for (const char* s : {"0000", "0101", "1110", "0011", "1001", "1111"}) out.push_back(Object::parse(s));
    return out;
}

} // namespace

TEST_CASE("tensor kernels") {
    const Tensor a = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
    const Tensor b = Tensor::matrix(3, 2, {1, 0, 0, 1, 1, 1});
    CHECK(kernel::matmul(a, b) == Tensor::matrix(2, 2, {4, 5, 10, 11}));
    CHECK(kernel::matmul_nt(a, a) == Tensor::matrix(2, 2, {14, 32, 32, 77}));
    CHECK(kernel::matmul_tn(a, a) == Tensor::matrix(3, 3, {17, 22, 27, 22, 29, 36, 27, 36, 45}));
    CHECK(kernel::sum_rows(a) == Tensor::matrix(1, 3, {5, 7, 9}));
    CHECK_THROWS_AS(kernel::matmul(a, a), InvalidArgument);
    CHECK_THROWS_AS(kernel::add(a, b), InvalidArgument);
    CHECK_THROWS_AS(Tensor(Shape{2, 2}, std::vector<double>{1, 2, 3}), InvalidArgument);
}

TEST_CASE("encode_objects") {
    const std::vector<Object> objs = {Object::parse("0101"), Object::parse("0000")};
    const Tensor x = encode_objects(objs, 4);
    CHECK(x == Tensor::matrix(2, 4, {-1, 1, -1, 1, -1, -1, -1, -1}));
    const auto all = all_objects(4);
    const Tensor e = encode_objects(all, 4);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            bool same = true;
            for (std::size_t c = 0; c < 4; ++c) same = same && e.at(i, c) == e.at(j, c);
            CHECK_FALSE(same);
        }
}

TEST_CASE("elementary gradients") {
    SUBCASE("(theta - c)^2") {
        const Var t = Var::parameter(Tensor::scalar(1.5));
        const Var d = affine(t, 1.0, -4.0);
        const auto g = grad(d * d, {t});
        CHECK(g[0].item() == doctest::Approx(2.0 * (1.5 - 4.0)));
    }
    SUBCASE("second order of theta^4") {
        const Var t = Var::parameter(Tensor::scalar(2.0));
        const Var t2 = t * t;
        const Var y = t2 * t2;
        const auto g = grad(y, {t}, true);
        CHECK(g[0].item() == doctest::Approx(32.0));
        const auto gg = grad(g[0], {t});
        CHECK(gg[0].item() == doctest::Approx(48.0));
    }
    SUBCASE("non-scalar target") {
        const Var t = Var::parameter(Tensor::matrix(1, 2, {1, 2}));
        CHECK_THROWS_AS(grad(t * t, {t}), InvalidArgument);
    }
    SUBCASE("unrelated inputs get zero") {
        const Var a = Var::parameter(Tensor::scalar(3.0));
        const Var b = Var::parameter(Tensor::matrix(1, 2, {1, 1}));
        const auto g = grad(a * a, {a, b});
        CHECK(g[1].value() == Tensor::matrix(1, 2, {0, 0}));
    }
    SUBCASE("every op against finite differences") {
        Rng rng(2);
        ParamSet p = {random_tensor({3, 2}, rng), random_tensor({2, 2}, rng), random_tensor({1, 2}, rng)};
        const Tensor c = random_tensor({3, 2}, rng);
        check_gradients(p, [&](const std::vector<Var>& v) {
            Var h = add_row(matmul(v[0], v[1]), v[2]);
            h = sigmoid(h) + softplus(h) + relu(affine(h, 2.0, 0.1));
            h = h + mul_const(h, c);
            Var s = sum_rows(h);
            Var r = reciprocal(affine(mul(s, s), 1.0, 1.0));
            Var q = matmul_tn(v[0], matmul(v[0], v[1]));
            Var w = log_clamped(affine(sigmoid(h), 1.0, 0.01), 1e-12);
            return sum(r) + mean(q) + affine(sum(matmul_nt(h, h)), 0.01) + sum(w) + sum(broadcast_rows(v[2], 3) * v[0]) +
                   sum(expand(sum(v[2]), Shape{2, 2}) * v[1]);
        });
    }
}

TEST_CASE("replay reproduces the forward value") {
    Rng rng(3);
    const MLPConfig cfg{4, 4, 16, 0.0, true};
    const auto params = as_parameters(init_params(cfg, rng));
    const auto objs = some_objects();
    const Var y = bce_with_logits(forward_logits(params, cfg, Var::constant(encode_objects(objs, 4)), Mode::eval),
                                  labels_of({1, 0, 1, 1, 0, 0}));
    CHECK(replay(y) == y.value());
    const auto g = grad(y, params, true);
    const Var gsum = sum(g[0] * g[0]);
    CHECK(replay(gsum) == gsum.value());
}

TEST_CASE("MLP forward") {
    const auto objs = some_objects();
    const Tensor x = encode_objects(objs, 4);
    SUBCASE("zero parameters give 0.5") {
        for (bool skip : {false, true}) {
            const MLPConfig cfg{4, 3, 8, 0.2, skip};
            Rng rng(1);
            const Tensor p = forward(zero_params(cfg), cfg, x, Mode::train, &rng);
            for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == 0.5);
        }
    }
    Rng init(5);
    MLPConfig cfg{4, 5, 32, 0.5, true};
    const ParamSet params = init_params(cfg, init);
    SUBCASE("eval mode is deterministic") {
        CHECK(forward(params, cfg, x, Mode::eval) == forward(params, cfg, x, Mode::eval));
    }
    SUBCASE("dropout masks come from the rng") {
        Rng a(9), b(9), c(10);
        const Tensor pa = forward(params, cfg, x, Mode::train, &a);
        CHECK(pa == forward(params, cfg, x, Mode::train, &b));
        CHECK_FALSE(pa == forward(params, cfg, x, Mode::train, &c));
        CHECK_FALSE(pa == forward(params, cfg, x, Mode::eval));
        CHECK_THROWS_AS(forward(params, cfg, x, Mode::train, nullptr), InvalidArgument);
    }
    SUBCASE("no dropout: train equals eval") {
        cfg.dropout_rate = 0.0;
        Rng r(1);
        CHECK(forward(params, cfg, x, Mode::train, &r) == forward(params, cfg, x, Mode::eval));
    }
    SUBCASE("zeroed skip block is the identity") {
        const MLPConfig deep{4, 3, 8, 0.0, true};
        const MLPConfig shallow{4, 2, 8, 0.0, false};
        Rng r(4);
        ParamSet p = init_params(deep, r);
        p[2] = Tensor(p[2].shape());
        p[3] = Tensor(p[3].shape());
        const ParamSet q = {p[0], p[1], p[4], p[5]};
        const Tensor a = forward(p, deep, x, Mode::eval);
        const Tensor b = forward(q, shallow, x, Mode::eval);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
    }
    SUBCASE("shape checks") {
        CHECK_THROWS_AS(forward(params, cfg, Tensor({6, 3}), Mode::eval), InvalidArgument);
        ParamSet bad = params;
        bad.pop_back();
        CHECK_THROWS_AS(check_params(bad, cfg), InvalidArgument);
    }
    CHECK(param_shapes(MLPConfig::baseline(4)).size() == 10);
    CHECK(parameter_count(MLPConfig{4, 2, 3, 0.0, false}) == 4 * 3 + 3 + 3 + 1);
    CHECK_THROWS_AS((MLPConfig{4, 0, 8, 0.1, false}).validate(), InvalidArgument);
    CHECK_THROWS_AS((MLPConfig{4, 2, 8, 1.0, false}).validate(), InvalidArgument);
}

TEST_CASE("bce") {
    const Tensor half({3, 1}, 0.5);
    CHECK(bce_loss(half, labels_of({1, 0, 1})) == doctest::Approx(std::log(2.0)));
    CHECK(bce_loss(labels_of({0.8}), labels_of({1})) == doctest::Approx(-std::log(0.8)));
    const double exact = bce_loss(labels_of({1, 0}), labels_of({1, 0}));
    CHECK(exact >= 0.0);
    CHECK(exact <= 1e-11);
    CHECK(std::isfinite(bce_loss(labels_of({0, 1}), labels_of({1, 0}))));
    // logits form agrees with the probability form
    const Tensor logits = labels_of({-2.0, 0.3, 4.0});
    const Tensor y = labels_of({1, 0, 1});
    const double from_logits = bce_with_logits(Var::constant(logits), y).item();
    const double from_probs = bce_loss(sigmoid(Var::constant(logits)).value(), y);
    CHECK(from_logits == doctest::Approx(from_probs).epsilon(1e-12));
}

TEST_CASE("MLP gradients against finite differences") {
    const auto objs = some_objects();
    const Tensor x = encode_objects(objs, 4);
    const Tensor y = labels_of({1, 0, 1, 1, 0, 0});
    for (const MLPConfig cfg : {MLPConfig{4, 1, 4, 0.0, false}, MLPConfig{4, 3, 6, 0.0, false},
                                MLPConfig{4, 4, 5, 0.0, true}}) {
        Rng rng(cfg.depth);
        const ParamSet p = init_params(cfg, rng);
        check_gradients(p, [&](const std::vector<Var>& v) {
            return bce_with_logits(forward_logits(v, cfg, Var::constant(x), Mode::eval), y);
        });
        check_gradients(p, [&](const std::vector<Var>& v) {
            return bce_loss(sigmoid(forward_logits(v, cfg, Var::constant(x), Mode::eval)), y);
        });
    }
}

TEST_CASE("no-grad guard") {
    const Var t = Var::parameter(Tensor::scalar(2.0));
    {
        NoGradGuard guard;
        CHECK_FALSE(grad_mode_enabled());
        CHECK_FALSE((t * t).requires_grad());
    }
    CHECK(grad_mode_enabled());
    CHECK((t * t).requires_grad());
}
