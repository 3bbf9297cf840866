#include "irsmec/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace irsmec {

NoiseSchedule build_schedule(int steps, double beta_min, double beta_max) {
    if (steps < 1) throw std::invalid_argument("build_schedule: steps must be >= 1");
    if (!(beta_min > 0.0) || beta_min > beta_max)
        throw std::invalid_argument("build_schedule: need 0 < beta_min <= beta_max");

    NoiseSchedule s;
    s.steps = steps;
    s.beta_min = beta_min;
    s.beta_max = beta_max;
    s.beta.resize(steps);
    s.alpha.resize(steps);
    s.alpha_bar.resize(steps);
    s.beta_tilde.resize(steps);

    const double t_count = static_cast<double>(steps);
    double running = 1.0;
    for (int t = 1; t <= steps; ++t) {
        const double exponent =
            -beta_min / t_count - (2.0 * t - 1.0) / (2.0 * t_count * t_count) * (beta_max - beta_min);
        const double b = 1.0 - std::exp(exponent);
        s.beta[t - 1] = b;
        s.alpha[t - 1] = 1.0 - b;
        running *= s.alpha[t - 1];
        s.alpha_bar[t - 1] = running;
        const double abar_prev = t == 1 ? 1.0 : s.alpha_bar[t - 2];
        s.beta_tilde[t - 1] = (1.0 - abar_prev) / (1.0 - s.alpha_bar[t - 1]) * b;
    }
    return s;
}

namespace {
void check_step(int t, const NoiseSchedule& sched) {
    if (t < 1 || t > sched.steps) throw std::out_of_range("diffusion: step index out of range");
}
}  // namespace

std::vector<double> forward_sample(const std::vector<double>& x0, int t,
                                   const std::vector<double>& eps, const NoiseSchedule& sched) {
    check_step(t, sched);
    if (eps.size() != x0.size()) throw std::invalid_argument("forward_sample: eps size mismatch");
    const double abar = sched.alpha_bar[t - 1];
    const double a = std::sqrt(abar);
    const double b = std::sqrt(1.0 - abar);
    std::vector<double> x(x0.size());
    for (size_t i = 0; i < x0.size(); ++i) x[i] = a * x0[i] + b * eps[i];
    return x;
}

std::vector<double> predict_x0(const std::vector<double>& x_t, const std::vector<double>& eps_pred,
                               int t, const NoiseSchedule& sched) {
    check_step(t, sched);
    const double abar = sched.alpha_bar[t - 1];
    const double inv = 1.0 / std::sqrt(abar);
    const double b = std::sqrt(1.0 - abar);
    std::vector<double> x0(x_t.size());
    for (size_t i = 0; i < x_t.size(); ++i) x0[i] = inv * (x_t[i] - b * eps_pred[i]);
    return x0;
}

std::vector<double> posterior_step(const std::vector<double>& x_t, int t,
                                   const std::vector<double>& eps_pred, const NoiseSchedule& sched,
                                   Rng* rng, bool deterministic) {
    check_step(t, sched);
    const double alpha = sched.alpha[t - 1];
    const double abar = sched.alpha_bar[t - 1];
    const double coef = sched.beta[t - 1] / std::sqrt(1.0 - abar);
    const double inv = 1.0 / std::sqrt(alpha);
    const double sigma = std::sqrt(sched.beta_tilde[t - 1]);
    const bool add_noise = !deterministic && t > 1;
    std::vector<double> x(x_t.size());
    for (size_t i = 0; i < x_t.size(); ++i) {
        double v = inv * (x_t[i] - coef * eps_pred[i]);
        if (add_noise) v += sigma * rng->normal();
        x[i] = v;
    }
    return x;
}

Denoiser::Denoiser(int latent_dim, const std::vector<int>& hidden, int time_embed_dim, Rng& rng)
    : latent_dim_(latent_dim),
      time_embed_dim_(time_embed_dim),
      mlp_(
          [&] {
              std::vector<int> widths;
              widths.push_back(latent_dim + time_embed_dim);
              widths.insert(widths.end(), hidden.begin(), hidden.end());
              widths.push_back(latent_dim);
              return widths;
          }(),
          Activation::tanh_act, rng) {}

std::vector<double> Denoiser::time_embedding(int t) const {
    std::vector<double> emb(time_embed_dim_);
    const int half = time_embed_dim_ / 2;
    for (int m = 0; m < half; ++m) {
        const double freq = std::pow(10000.0, -static_cast<double>(m) / half);
        emb[2 * m] = std::sin(t * freq);
        emb[2 * m + 1] = std::cos(t * freq);
    }
    if (time_embed_dim_ % 2 == 1) emb.back() = static_cast<double>(t);
    return emb;
}

std::vector<double> Denoiser::predict(const std::vector<double>& x, int t) const {
    std::vector<double> input;
    input.reserve(latent_dim_ + time_embed_dim_);
    input.insert(input.end(), x.begin(), x.end());
    const auto emb = time_embedding(t);
    input.insert(input.end(), emb.begin(), emb.end());
    return mlp_.forward(input);
}

std::vector<double> reverse_sample(const Denoiser& denoiser, const NoiseSchedule& sched, int dim,
                                   Rng& rng, bool deterministic) {
    if (dim != denoiser.latent_dim())
        throw std::invalid_argument("reverse_sample: dimension does not match the denoiser");
    std::vector<double> x(dim);
    for (auto& v : x) v = rng.normal();
    for (int t = sched.steps; t >= 1; --t) {
        const auto eps = denoiser.predict(x, t);
        x = posterior_step(x, t, eps, sched, &rng, deterministic);
    }
    return x;
}

SlotDecision decode_latent(const std::vector<double>& x, const std::vector<Task>& tasks,
                           double f_bs_max, int num_elements, int phase_grid, int resource_grid) {
    const int v_count = static_cast<int>(tasks.size());
    if (static_cast<int>(x.size()) != latent_dim_for(v_count, num_elements))
        throw std::invalid_argument("decode_latent: latent dimension mismatch");

    SlotDecision d;
    d.action.assign(v_count, Action::none);
    d.theta.assign(num_elements, 0.0);
    d.alloc_hz.assign(v_count, 0.0);

    for (int i = 0; i < v_count; ++i) {
        if (!tasks[i].present) continue;
        d.action[i] = x[2 * i + 1] > x[2 * i] ? Action::offload : Action::local;
    }

    for (int k = 0; k < num_elements; ++k) {
        double phase = normalize_phase(x[2 * v_count + k]);
        if (phase_grid >= 2) {
            const double step = kTwoPi / phase_grid;
            int m = static_cast<int>(std::llround(phase / step)) % phase_grid;
            phase = m * step;
        }
        d.theta[k] = phase;
    }

    // Softmax over the offloading set, scaled to the full BS budget.
    std::vector<int> offloaders;
    for (int i = 0; i < v_count; ++i)
        if (d.action[i] == Action::offload) offloaders.push_back(i);
    if (!offloaders.empty()) {
        double max_score = -1e300;
        for (int i : offloaders) max_score = std::max(max_score, x[2 * v_count + num_elements + i]);
        double z = 0.0;
        std::vector<double> e(offloaders.size());
        for (size_t j = 0; j < offloaders.size(); ++j) {
            e[j] = std::exp(x[2 * v_count + num_elements + offloaders[j]] - max_score);
            z += e[j];
        }
        for (size_t j = 0; j < offloaders.size(); ++j) {
            double frac = e[j] / z;
            if (resource_grid >= 2) {
                const int levels = resource_grid - 1;
                frac = std::floor(frac * levels) / levels;
            }
            d.alloc_hz[offloaders[j]] = frac * f_bs_max;
        }
    }
    return d;
}

std::vector<double> encode_decision(const SlotDecision& decision, const std::vector<Task>& tasks,
                                    double f_bs_max, int num_elements) {
    const int v_count = static_cast<int>(tasks.size());
    std::vector<double> x(latent_dim_for(v_count, num_elements), 0.0);
    double alloc_sum = 0.0;
    for (int i = 0; i < v_count; ++i)
        if (decision.action[i] == Action::offload) alloc_sum += decision.alloc_hz[i];

    for (int i = 0; i < v_count; ++i) {
        if (decision.action[i] == Action::local) {
            x[2 * i] = 1.5;
            x[2 * i + 1] = -1.5;
        } else if (decision.action[i] == Action::offload) {
            x[2 * i] = -1.5;
            x[2 * i + 1] = 1.5;
            const double frac = alloc_sum > 0.0 ? decision.alloc_hz[i] / alloc_sum : 1.0;
            x[2 * v_count + num_elements + i] = std::log(std::max(frac, 1e-9));
        }
    }
    for (int k = 0; k < num_elements; ++k) x[2 * v_count + k] = decision.theta[k];
    (void)f_bs_max;
    return x;
}

void EliteBuffer::insert(std::vector<double> latent, double score) {
    auto pos = std::lower_bound(items_.begin(), items_.end(), score,
                                [](const auto& item, double s) { return item.second > s; });
    if (items_.size() >= capacity_ && pos == items_.end()) return;
    items_.insert(pos, {std::move(latent), score});
    if (items_.size() > capacity_) items_.pop_back();
}

std::vector<double> elite_weights(const EliteBuffer& buffer) {
    const auto& items = buffer.items();
    double max_score = -1e300;
    for (const auto& it : items) max_score = std::max(max_score, it.second);
    std::vector<double> w(items.size());
    double z = 0.0;
    for (size_t b = 0; b < items.size(); ++b) {
        w[b] = std::exp(items[b].second - max_score);
        z += w[b];
    }
    for (auto& v : w) v /= z;
    return w;
}

double train_step(Denoiser& denoiser, const EliteBuffer& buffer, const NoiseSchedule& sched,
                  Adam& optimizer, Rng& rng) {
    if (buffer.empty()) throw std::invalid_argument("train_step: empty elite buffer");
    const auto& items = buffer.items();
    const std::vector<double> w = elite_weights(buffer);

    Mlp& mlp = denoiser.mlp();
    std::vector<double> grads(mlp.num_params(), 0.0);
    Mlp::Cache cache;
    const int dim = denoiser.latent_dim();
    double loss = 0.0;
    for (size_t b = 0; b < items.size(); ++b) {
        const int t = rng.uniform_int(1, sched.steps);
        std::vector<double> eps(dim);
        for (auto& e : eps) e = rng.normal();
        const auto x_t = forward_sample(items[b].first, t, eps, sched);

        std::vector<double> input;
        input.reserve(dim + denoiser.time_embed_dim());
        input.insert(input.end(), x_t.begin(), x_t.end());
        const auto emb = denoiser.time_embedding(t);
        input.insert(input.end(), emb.begin(), emb.end());

        const auto pred = mlp.forward(input, cache);
        std::vector<double> upstream(dim);
        for (int i = 0; i < dim; ++i) {
            const double diff = pred[i] - eps[i];
            loss += w[b] * diff * diff / dim;
            upstream[i] = 2.0 * w[b] * diff / dim;
        }
        mlp.backward(cache, upstream, grads);
    }
    optimizer.update(mlp.params(), grads);
    return loss;
}

}  // namespace irsmec
