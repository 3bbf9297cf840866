#ifndef IRSMEC_SOLVERS_HPP
#define IRSMEC_SOLVERS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "irsmec/diffusion.hpp"
#include "irsmec/game.hpp"

namespace irsmec {

/// One realized timeline: tasks and channels drawn once per seed and shared
/// by every solver for paired comparison.
struct Episode {
    ModelParams params;
    std::vector<std::vector<Task>> tasks;      // N x V
    std::vector<ChannelRealization> channels;  // N

    int num_slots() const { return static_cast<int>(tasks.size()); }

    /// Borrowing views into this episode; the episode must outlive them.
    std::vector<SlotContext> contexts() const;
};

Episode build_episode(const ModelParams& params, std::uint64_t seed);

struct GdmConfig {
    int steps = 20;
    // Integrated-noise endpoints: the schedule formula yields
    // alpha_bar_T = exp(-(beta_min + beta_max)/2), so these must be the
    // integrated values for the chain to end near N(0, I).
    double beta_min = 0.1;
    double beta_max = 20.0;
    std::vector<int> hidden{64, 64};
    int time_embed_dim = 16;
    double lr = 1e-3;
    int elite_capacity = 64;
    int train_steps = 2;
    int phase_candidates = 2;  // phase vectors sampled per slot per iteration
};

struct SolverConfig {
    int j_iter = 300;
    double epsilon = 1e-2;
    GdmConfig gdm;
    int dopsra_episodes = 200;
    int dopsra_batch = 4;
    double dopsra_lr = 3e-4;
    double dopsra_clip = 0.2;
    int phase_grid = 0;     // 0 = continuous decoding
    int resource_grid = 0;  // 0 = continuous decoding
    int oracle_phase_grid = 8;
    int oracle_resource_grid = 8;
    /// Test hook: overrides the per-iteration reward fed to the convergence
    /// test. Production runs leave it unset.
    std::function<double(int)> reward_stub;

    void validate() const;
};

struct SlotMetrics {
    double delay_s = 0.0;
    double energy_j = 0.0;
    double qoe = 0.0;
    double revenue = 0.0;
    double utility = 0.0;
};

struct SolveResult {
    std::string solver;
    Decision decision;
    std::vector<double> utility_trace;  // adopted-strategy utility per iteration
    std::vector<double> reward_trace;
    int iterations = 0;
    double wall_seconds = 0.0;
    std::vector<SlotMetrics> per_slot;
    double total_utility = 0.0;
};

/// Diffusion-guided Stackelberg search: per iteration the leader allocation
/// is sampled from the denoiser, followers pick phases and offload actions,
/// the elite buffer trains the denoiser, and the best per-slot strategies
/// seen so far are adopted. Stops when |R^j - R^{j-1}| < epsilon or at
/// j_iter.
SolveResult gdmsg_solve(const Episode& episode, const SolverConfig& config, std::uint64_t seed);

/// Random offloading, phases and allocation, single pass.
SolveResult ropsra_solve(const Episode& episode, const SolverConfig& config, std::uint64_t seed);

/// Random frozen phases; offloading and allocation via the diffusion loop.
SolveResult rpsgora_solve(const Episode& episode, const SolverConfig& config, std::uint64_t seed);

/// Equal allocation over the offloading set; offloading and phases via the
/// diffusion loop.
SolveResult ergops_solve(const Episode& episode, const SolverConfig& config, std::uint64_t seed);

/// Compact PPO actor-critic over the same latent action space.
SolveResult dopsra_solve(const Episode& episode, const SolverConfig& config, std::uint64_t seed);

/// Exhaustive search over offload assignments x phase grid x allocation grid.
/// Guarded to tiny instances (V <= 3, K <= 4, N <= 2, grids <= 16).
SolveResult brute_force_oracle(const Episode& episode, int phase_grid, int resource_grid);

/// Dispatch by name: gdmsg | ropsra | rpsgora | ergops | dopsra | oracle.
SolveResult solve(const std::string& name, const Episode& episode, const SolverConfig& config,
                  std::uint64_t seed);

const std::vector<std::string>& solver_names();

}  // namespace irsmec

#endif
