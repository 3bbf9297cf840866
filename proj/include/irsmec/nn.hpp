#ifndef IRSMEC_NN_HPP
#define IRSMEC_NN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "irsmec/rng.hpp"

namespace irsmec {

enum class Activation : std::uint8_t { tanh_act = 0, relu_act = 1 };

/// Dense feed-forward network: hidden layers use the configured activation,
/// the output layer is linear. Parameters live in one flat vector laid out
/// per layer as W (out x in, row-major) then b.
class Mlp {
  public:
    Mlp(std::vector<int> widths, Activation act, Rng& rng);

    int input_size() const { return widths_.front(); }
    int output_size() const { return widths_.back(); }
    int num_params() const { return static_cast<int>(params_.size()); }
    const std::vector<int>& widths() const { return widths_; }
    Activation activation() const { return act_; }

    std::vector<double>& params() { return params_; }
    const std::vector<double>& params() const { return params_; }

    /// Per-layer post-activation values recorded by forward, consumed by
    /// backward. Reusable across calls.
    struct Cache {
        std::vector<std::vector<double>> layer_out;
    };

    std::vector<double> forward(const std::vector<double>& input) const;
    std::vector<double> forward(const std::vector<double>& input, Cache& cache) const;

    /// Accumulates dLoss/dparams into `grads` (size num_params) given the
    /// upstream gradient dLoss/doutput; returns dLoss/dinput.
    std::vector<double> backward(const Cache& cache, const std::vector<double>& upstream,
                                 std::vector<double>& grads) const;

    void save(const std::string& path) const;
    static Mlp load(const std::string& path);

  private:
    Mlp() = default;
    std::vector<int> widths_;
    Activation act_ = Activation::tanh_act;
    std::vector<double> params_;
    std::vector<int> layer_offset_;  // offset of each layer's W block

    void build_offsets();
};

/// Adaptive-moment gradient step with bias correction.
struct Adam {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<double> m;
    std::vector<double> v;

    Adam(double learning_rate, int num_params)
        : lr(learning_rate), m(num_params, 0.0), v(num_params, 0.0) {}

    void update(std::vector<double>& params, const std::vector<double>& grads);
};

}  // namespace irsmec

#endif
