#include "irsmec/nn.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace irsmec {

namespace {
constexpr char kMagic[4] = {'I', 'M', 'L', 'P'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

Mlp::Mlp(std::vector<int> widths, Activation act, Rng& rng)
    : widths_(std::move(widths)), act_(act) {
    if (widths_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output widths");
    for (int w : widths_)
        if (w < 1) throw std::invalid_argument("Mlp: layer widths must be >= 1");
    build_offsets();
    // Xavier-uniform weights, zero biases.
    for (size_t l = 0; l + 1 < widths_.size(); ++l) {
        const int fan_in = widths_[l];
        const int fan_out = widths_[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        double* w = params_.data() + layer_offset_[l];
        for (int i = 0; i < fan_out * fan_in; ++i) w[i] = rng.uniform(-bound, bound);
    }
}

void Mlp::build_offsets() {
    int total = 0;
    layer_offset_.clear();
    for (size_t l = 0; l + 1 < widths_.size(); ++l) {
        layer_offset_.push_back(total);
        total += widths_[l + 1] * widths_[l] + widths_[l + 1];
    }
    params_.assign(total, 0.0);
}

std::vector<double> Mlp::forward(const std::vector<double>& input) const {
    Cache cache;
    return forward(input, cache);
}

std::vector<double> Mlp::forward(const std::vector<double>& input, Cache& cache) const {
    if (static_cast<int>(input.size()) != widths_.front())
        throw std::invalid_argument("Mlp::forward: input size mismatch");
    cache.layer_out.assign(widths_.size(), {});
    cache.layer_out[0] = input;
    const size_t last = widths_.size() - 1;
    for (size_t l = 0; l + 1 < widths_.size(); ++l) {
        const int in_w = widths_[l];
        const int out_w = widths_[l + 1];
        const double* w = params_.data() + layer_offset_[l];
        const double* b = w + out_w * in_w;
        const auto& x = cache.layer_out[l];
        auto& y = cache.layer_out[l + 1];
        y.assign(out_w, 0.0);
        for (int o = 0; o < out_w; ++o) {
            double acc = b[o];
            const double* row = w + o * in_w;
            for (int i = 0; i < in_w; ++i) acc += row[i] * x[i];
            if (l + 1 < last) {
                y[o] = act_ == Activation::tanh_act ? std::tanh(acc) : (acc > 0.0 ? acc : 0.0);
            } else {
                y[o] = acc;
            }
        }
    }
    return cache.layer_out.back();
}

std::vector<double> Mlp::backward(const Cache& cache, const std::vector<double>& upstream,
                                  std::vector<double>& grads) const {
    if (grads.size() != params_.size())
        throw std::invalid_argument("Mlp::backward: gradient buffer size mismatch");
    if (static_cast<int>(upstream.size()) != widths_.back())
        throw std::invalid_argument("Mlp::backward: upstream size mismatch");

    std::vector<double> delta = upstream;  // dLoss/d(post-activation of current layer)
    const size_t last = widths_.size() - 1;
    for (size_t l = widths_.size() - 1; l >= 1; --l) {
        const int in_w = widths_[l - 1];
        const int out_w = widths_[l];
        const double* w = params_.data() + layer_offset_[l - 1];
        double* gw = grads.data() + layer_offset_[l - 1];
        double* gb = gw + out_w * in_w;
        const auto& x = cache.layer_out[l - 1];
        const auto& y = cache.layer_out[l];

        // Through the activation (output layer is linear).
        if (l < last) {
            for (int o = 0; o < out_w; ++o) {
                const double dact = act_ == Activation::tanh_act ? 1.0 - y[o] * y[o]
                                                                 : (y[o] > 0.0 ? 1.0 : 0.0);
                delta[o] *= dact;
            }
        }
        std::vector<double> prev(in_w, 0.0);
        for (int o = 0; o < out_w; ++o) {
            const double d = delta[o];
            gb[o] += d;
            double* grow = gw + o * in_w;
            const double* wrow = w + o * in_w;
            for (int i = 0; i < in_w; ++i) {
                grow[i] += d * x[i];
                prev[i] += d * wrow[i];
            }
        }
        delta = std::move(prev);
    }
    return delta;
}

void Mlp::save(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("Mlp::save: cannot open " + path);
    std::fwrite(kMagic, 1, 4, f);
    std::uint32_t v = kVersion;
    std::fwrite(&v, sizeof v, 1, f);
    std::uint32_t n = static_cast<std::uint32_t>(widths_.size());
    std::fwrite(&n, sizeof n, 1, f);
    for (int w : widths_) {
        std::uint32_t u = static_cast<std::uint32_t>(w);
        std::fwrite(&u, sizeof u, 1, f);
    }
    std::uint8_t a = static_cast<std::uint8_t>(act_);
    std::fwrite(&a, sizeof a, 1, f);
    std::fwrite(params_.data(), sizeof(double), params_.size(), f);
    std::fclose(f);
}

Mlp Mlp::load(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("Mlp::load: cannot open " + path);
    char magic[4];
    std::uint32_t version = 0, n = 0;
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, kMagic, 4) != 0 ||
        std::fread(&version, sizeof version, 1, f) != 1 || version != kVersion ||
        std::fread(&n, sizeof n, 1, f) != 1 || n < 2) {
        std::fclose(f);
        throw std::runtime_error("Mlp::load: bad header in " + path);
    }
    Mlp mlp;
    mlp.widths_.resize(n);
    for (auto& w : mlp.widths_) {
        std::uint32_t u = 0;
        if (std::fread(&u, sizeof u, 1, f) != 1) {
            std::fclose(f);
            throw std::runtime_error("Mlp::load: truncated header in " + path);
        }
        w = static_cast<int>(u);
    }
    std::uint8_t a = 0;
    if (std::fread(&a, sizeof a, 1, f) != 1) {
        std::fclose(f);
        throw std::runtime_error("Mlp::load: truncated header in " + path);
    }
    mlp.act_ = static_cast<Activation>(a);
    mlp.build_offsets();
    const size_t got = std::fread(mlp.params_.data(), sizeof(double), mlp.params_.size(), f);
    std::fclose(f);
    if (got != mlp.params_.size()) throw std::runtime_error("Mlp::load: truncated params in " + path);
    return mlp;
}

void Adam::update(std::vector<double>& params, const std::vector<double>& grads) {
    if (params.size() != m.size() || grads.size() != m.size())
        throw std::invalid_argument("Adam::update: size mismatch");
    ++step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    for (size_t i = 0; i < params.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
        params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

}  // namespace irsmec
