#ifndef IRSMEC_DIFFUSION_HPP
#define IRSMEC_DIFFUSION_HPP

#include <utility>
#include <vector>

#include "irsmec/game.hpp"
#include "irsmec/nn.hpp"
#include "irsmec/rng.hpp"

namespace irsmec {

/// Precomputed variance-schedule tables, 1-indexed by step t (stored at t-1).
/// beta_t = 1 - exp(-beta_min/T - (2t-1)/(2T^2) * (beta_max - beta_min)).
struct NoiseSchedule {
    int steps = 0;
    double beta_min = 0.0;
    double beta_max = 0.0;
    std::vector<double> beta;
    std::vector<double> alpha;
    std::vector<double> alpha_bar;
    std::vector<double> beta_tilde;

    double alpha_bar_at(int t) const { return t == 0 ? 1.0 : alpha_bar[t - 1]; }
};

NoiseSchedule build_schedule(int steps, double beta_min, double beta_max);

/// Closed-form noising: sqrt(abar_t) x0 + sqrt(1 - abar_t) eps. Test-facing;
/// the solver only runs the reverse phase.
std::vector<double> forward_sample(const std::vector<double>& x0, int t,
                                   const std::vector<double>& eps, const NoiseSchedule& sched);

/// Reconstruction (x_t - sqrt(1 - abar_t) eps) / sqrt(abar_t).
std::vector<double> predict_x0(const std::vector<double>& x_t, const std::vector<double>& eps_pred,
                               int t, const NoiseSchedule& sched);

/// One reverse transition: mean (x_t - beta_t/sqrt(1-abar_t) eps)/sqrt(alpha_t),
/// variance beta_tilde_t. No noise is added when deterministic or at t = 1.
std::vector<double> posterior_step(const std::vector<double>& x_t, int t,
                                   const std::vector<double>& eps_pred, const NoiseSchedule& sched,
                                   Rng* rng, bool deterministic);

/// Noise predictor: MLP over the latent concatenated with a sinusoidal
/// embedding of the step index.
class Denoiser {
  public:
    Denoiser(int latent_dim, const std::vector<int>& hidden, int time_embed_dim, Rng& rng);

    int latent_dim() const { return latent_dim_; }
    int time_embed_dim() const { return time_embed_dim_; }
    Mlp& mlp() { return mlp_; }
    const Mlp& mlp() const { return mlp_; }

    std::vector<double> time_embedding(int t) const;
    std::vector<double> predict(const std::vector<double>& x, int t) const;

  private:
    int latent_dim_;
    int time_embed_dim_;
    Mlp mlp_;
};

/// Full reverse chain from x_T ~ N(0, I) down to x_0; exactly `steps`
/// denoiser evaluations.
std::vector<double> reverse_sample(const Denoiser& denoiser, const NoiseSchedule& sched, int dim,
                                   Rng& rng, bool deterministic = false);

/// Latent layout per slot: [2V action logits | K phases | V resource scores].
inline int latent_dim_for(int num_vehicles, int num_elements) {
    return 3 * num_vehicles + num_elements;
}

/// Maps a latent to a feasible per-slot strategy: per-vehicle action by logit
/// argmax (none without a task), phases folded into [0, 2*pi), allocation by
/// softmax over the offloading set scaled to f_b^max. Optional grids snap
/// phases to 2*pi*m/phase_grid and allocations down to multiples of
/// f_b^max/(resource_grid-1).
SlotDecision decode_latent(const std::vector<double>& x, const std::vector<Task>& tasks,
                           double f_bs_max, int num_elements, int phase_grid = 0,
                           int resource_grid = 0);

/// Inverse-ish of decode_latent: builds a latent that decodes back to the
/// given strategy, used as a training target for elite decisions.
std::vector<double> encode_decision(const SlotDecision& decision, const std::vector<Task>& tasks,
                                    double f_bs_max, int num_elements);

/// Fixed-capacity pool of the best-scoring latents found so far.
class EliteBuffer {
  public:
    explicit EliteBuffer(size_t capacity) : capacity_(capacity) {}

    void insert(std::vector<double> latent, double score);
    bool empty() const { return items_.empty(); }
    size_t size() const { return items_.size(); }
    const std::vector<std::pair<std::vector<double>, double>>& items() const { return items_; }

  private:
    size_t capacity_;
    std::vector<std::pair<std::vector<double>, double>> items_;  // sorted by score desc
};

/// Softmax of the elite scores: the per-item weights used by train_step.
std::vector<double> elite_weights(const EliteBuffer& buffer);

/// One reward-weighted denoising regression step over the buffer: for each
/// elite draw (t, eps), noise it with the closed form and regress the
/// predicted noise, weighting terms by a softmax over elite scores.
/// Returns the weighted loss before the update.
double train_step(Denoiser& denoiser, const EliteBuffer& buffer, const NoiseSchedule& sched,
                  Adam& optimizer, Rng& rng);

}  // namespace irsmec

#endif
