#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "irsmec/nn.hpp"

using namespace irsmec;

namespace {

// Straight-line reimplementation used as the forward oracle.
std::vector<double> naive_forward(const std::vector<int>& widths, Activation act,
                                  const std::vector<double>& params,
                                  std::vector<double> x) {
    size_t off = 0;
    for (size_t l = 0; l + 1 < widths.size(); ++l) {
        const int in_w = widths[l];
        const int out_w = widths[l + 1];
        std::vector<double> y(out_w, 0.0);
        for (int o = 0; o < out_w; ++o) {
            double acc = params[off + out_w * in_w + o];  // bias
            for (int i = 0; i < in_w; ++i) acc += params[off + o * in_w + i] * x[i];
            if (l + 2 < widths.size())
                y[o] = act == Activation::tanh_act ? std::tanh(acc) : std::max(acc, 0.0);
            else
                y[o] = acc;
        }
        off += out_w * in_w + out_w;
        x = std::move(y);
    }
    return x;
}

}  // namespace

TEST_CASE("forward with zero weights returns the bias") {
    Rng rng(1u);
    Mlp mlp({3, 2}, Activation::tanh_act, rng);
    std::fill(mlp.params().begin(), mlp.params().end(), 0.0);
    mlp.params()[3 * 2 + 0] = 0.25;
    mlp.params()[3 * 2 + 1] = -1.5;
    const auto y = mlp.forward({0.7, -0.1, 0.3});
    CHECK(y[0] == doctest::Approx(0.25));
    CHECK(y[1] == doctest::Approx(-1.5));
}

TEST_CASE("identity linear layer passes the input through") {
    Rng rng(2u);
    Mlp mlp({3, 3}, Activation::tanh_act, rng);
    std::fill(mlp.params().begin(), mlp.params().end(), 0.0);
    for (int i = 0; i < 3; ++i) mlp.params()[i * 3 + i] = 1.0;
    const auto y = mlp.forward({0.4, -2.0, 1.0});
    CHECK(y[0] == doctest::Approx(0.4));
    CHECK(y[1] == doctest::Approx(-2.0));
    CHECK(y[2] == doctest::Approx(1.0));
}

TEST_CASE("forward matches an independent reimplementation") {
    Rng rng(3u);
    const std::vector<int> widths{4, 6, 5, 2};
    Mlp mlp(widths, Activation::tanh_act, rng);
    std::vector<double> x{0.3, -0.8, 1.2, 0.05};
    const auto got = mlp.forward(x);
    const auto want = naive_forward(widths, Activation::tanh_act, mlp.params(), x);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("backward of a 1x1 linear net") {
    Rng rng(4u);
    Mlp mlp({1, 1}, Activation::tanh_act, rng);
    Mlp::Cache cache;
    mlp.forward({3.0}, cache);
    std::vector<double> grads(mlp.num_params(), 0.0);
    mlp.backward(cache, {1.0}, grads);
    CHECK(grads[0] == doctest::Approx(3.0));  // dL/dW = input
    CHECK(grads[1] == doctest::Approx(1.0));  // dL/db = 1
}

TEST_CASE("zero upstream gradient gives zero parameter gradients") {
    Rng rng(5u);
    Mlp mlp({3, 8, 2}, Activation::tanh_act, rng);
    Mlp::Cache cache;
    mlp.forward({0.1, 0.2, 0.3}, cache);
    std::vector<double> grads(mlp.num_params(), 0.0);
    mlp.backward(cache, {0.0, 0.0}, grads);
    for (double g : grads) CHECK(g == 0.0);
}

TEST_CASE("backward matches central finite differences") {
    for (const Activation act : {Activation::tanh_act, Activation::relu_act}) {
        Rng rng(6u);
        Mlp mlp({3, 8, 5, 2}, act, rng);
        const std::vector<double> x{0.4, -0.7, 0.9};
        const std::vector<double> upstream{0.8, -1.3};

        Mlp::Cache cache;
        mlp.forward(x, cache);
        std::vector<double> grads(mlp.num_params(), 0.0);
        mlp.backward(cache, upstream, grads);

        auto loss = [&] {
            const auto y = mlp.forward(x);
            return upstream[0] * y[0] + upstream[1] * y[1];
        };
        const double h = 1e-5;
        double max_rel = 0.0;
        for (int p = 0; p < mlp.num_params(); ++p) {
            const double keep = mlp.params()[p];
            mlp.params()[p] = keep + h;
            const double lp = loss();
            mlp.params()[p] = keep - h;
            const double lm = loss();
            mlp.params()[p] = keep;
            const double numeric = (lp - lm) / (2.0 * h);
            const double denom = std::max({std::abs(numeric), std::abs(grads[p]), 1e-8});
            max_rel = std::max(max_rel, std::abs(numeric - grads[p]) / denom);
        }
        CHECK(max_rel < 1e-4);
    }
}

TEST_CASE("tanh forward stays finite on large inputs") {
    Rng rng(7u);
    Mlp mlp({2, 16, 16, 3}, Activation::tanh_act, rng);
    const auto y = mlp.forward({1e3, -1e3});
    for (double v : y) CHECK(std::isfinite(v));
}

TEST_CASE("adam ignores zero gradients and solves a scalar quadratic") {
    SUBCASE("zero gradients leave parameters unchanged") {
        std::vector<double> params{0.7, -0.2};
        Adam opt(0.05, 2);
        const auto before = params;
        opt.update(params, {0.0, 0.0});
        CHECK(params[0] == before[0]);
        CHECK(params[1] == before[1]);
    }
    SUBCASE("minimizes x squared") {
        std::vector<double> params{1.0};
        Adam opt(0.05, 1);
        for (int i = 0; i < 200; ++i) opt.update(params, {2.0 * params[0]});
        CHECK(std::abs(params[0]) < 0.05);
    }
    SUBCASE("identical runs are identical") {
        std::vector<double> a{1.0}, b{1.0};
        Adam oa(0.05, 1), ob(0.05, 1);
        for (int i = 0; i < 50; ++i) {
            oa.update(a, {2.0 * a[0]});
            ob.update(b, {2.0 * b[0]});
        }
        CHECK(a[0] == b[0]);
    }
}

TEST_CASE("parameter files round-trip") {
    Rng rng(8u);
    Mlp mlp({5, 12, 4}, Activation::relu_act, rng);
    const std::string path = "/tmp/irsmec_nn_roundtrip.bin";
    mlp.save(path);
    const Mlp loaded = Mlp::load(path);
    CHECK(loaded.widths() == mlp.widths());
    CHECK(loaded.activation() == mlp.activation());
    REQUIRE(loaded.params().size() == mlp.params().size());
    for (size_t i = 0; i < mlp.params().size(); ++i) CHECK(loaded.params()[i] == mlp.params()[i]);
    std::remove(path.c_str());
}
