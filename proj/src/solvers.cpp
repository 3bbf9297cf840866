#include "irsmec/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace irsmec {

namespace {

constexpr std::uint64_t kTagEpisode = 0;
constexpr std::uint64_t kTagGdmsg = 101;
constexpr std::uint64_t kTagRopsra = 102;
constexpr std::uint64_t kTagRpsgora = 103;
constexpr std::uint64_t kTagErgops = 104;
constexpr std::uint64_t kTagDopsra = 105;

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

/// Demotes executed actions that miss their deadline (or could not run at
/// all) to failed tasks, then evaluates the cleaned decision.
SlotEval screen_and_evaluate(const SlotContext& ctx, SlotDecision& dec) {
    SlotEval eval = evaluate_slot(ctx, dec);
    bool changed = false;
    for (size_t i = 0; i < eval.vehicles.size(); ++i) {
        const auto& out = eval.vehicles[i];
        if ((out.deadline_miss || out.failed) && dec.action[i] != Action::none) {
            dec.action[i] = Action::none;
            changed = true;
        }
    }
    if (changed) eval = evaluate_slot(ctx, dec);
    return eval;
}

SlotMetrics metrics_of(const SlotEval& eval) {
    return {eval.delay_s, eval.energy_j, eval.u_qoe, eval.u_revenue, eval.u_total};
}

void finish_single_pass(SolveResult& result, double total, const Stopwatch& watch) {
    result.total_utility = total;
    result.utility_trace = {total};
    result.reward_trace = {0.0};
    result.iterations = 1;
    result.wall_seconds = watch.seconds();
}

enum class LoopMode { full, frozen_theta, equal_alloc };

SolveResult gdm_loop(const Episode& ep, const SolverConfig& cfg, std::uint64_t seed, LoopMode mode,
                     const char* name, std::uint64_t tag) {
    cfg.validate();
    Stopwatch watch;
    const auto ctxs = ep.contexts();
    const int n_slots = ep.num_slots();
    const int v_count = ep.params.scenario.num_vehicles;
    const int k_count = ep.params.scenario.num_elements;
    const double f_max = ep.params.compute.bs_compute_hz;
    const int dim = latent_dim_for(v_count, k_count);

    Rng rng(mix_seed(seed, tag));
    Denoiser denoiser(dim, cfg.gdm.hidden, cfg.gdm.time_embed_dim, rng);
    Adam adam(cfg.gdm.lr, denoiser.mlp().num_params());
    const NoiseSchedule sched = build_schedule(cfg.gdm.steps, cfg.gdm.beta_min, cfg.gdm.beta_max);
    EliteBuffer elites(cfg.gdm.elite_capacity);

    std::vector<std::vector<double>> frozen(n_slots);
    if (mode == LoopMode::frozen_theta) {
        for (auto& theta : frozen) {
            theta.resize(k_count);
            for (auto& t : theta) {
                if (cfg.phase_grid >= 2)
                    t = kTwoPi * rng.uniform_int(0, cfg.phase_grid - 1) / cfg.phase_grid;
                else
                    t = rng.uniform(0.0, kTwoPi);
            }
        }
    }

    struct SlotBest {
        bool valid = false;
        SlotDecision decision;
        SlotEval eval;
    };
    std::vector<SlotBest> best(n_slots);
    // Shadow incumbents restricted to equal allocations: keeps the shaped
    // search from ever trailing the equal-split family it contains.
    std::vector<SlotBest> best_equal(n_slots);

    auto snap_phases = [&](std::vector<double> theta) {
        if (cfg.phase_grid >= 2) {
            const double step = kTwoPi / cfg.phase_grid;
            for (auto& t : theta)
                t = static_cast<int>(std::llround(t / step)) % cfg.phase_grid * step;
        }
        return theta;
    };

    auto equalize = [&](const std::vector<Action>& actions, std::vector<double>& alloc) {
        int served = 0;
        for (auto a : actions)
            if (a == Action::offload) ++served;
        std::fill(alloc.begin(), alloc.end(), 0.0);
        if (served > 0) {
            const double share = f_max / served;
            for (int i = 0; i < v_count; ++i)
                if (actions[i] == Action::offload) alloc[i] = share;
        }
    };

    auto adopt = [&](int n, SlotDecision dec, const SlotEval& eval, bool equal_split) {
        elites.insert(encode_decision(dec, ep.tasks[n], f_max, k_count), eval.u_total);
        if (equal_split && (!best_equal[n].valid || eval.u_total > best_equal[n].eval.u_total)) {
            best_equal[n].valid = true;
            best_equal[n].decision = dec;
            best_equal[n].eval = eval;
        }
        if (!best[n].valid || eval.u_total > best[n].eval.u_total) {
            best[n].valid = true;
            best[n].decision = std::move(dec);
            best[n].eval = eval;
        }
    };

    // The unoptimized equal rule: every tasked vehicle is offered an equal
    // share; vehicles best-respond and decliners drop out until the set is
    // stable, so each final offloader holds exactly f_max/|I0|.
    auto equal_rule_response = [&](int n, const std::vector<std::vector<double>>& candidates) {
        const auto& ctx = ctxs[n];
        double best_q = -std::numeric_limits<double>::infinity();
        SlotDecision best_dec;
        bool have = false;
        for (const auto& theta : candidates) {
            std::vector<char> offered(v_count, 0);
            int count = 0;
            for (int i = 0; i < v_count; ++i)
                if (ep.tasks[n][i].present) {
                    offered[i] = 1;
                    ++count;
                }
            std::vector<double> alloc(v_count, 0.0);
            std::vector<Action> actions(v_count, Action::none);
            for (int round = 0; round <= v_count && count > 0; ++round) {
                std::fill(alloc.begin(), alloc.end(), 0.0);
                const double share = f_max / count;
                for (int i = 0; i < v_count; ++i)
                    if (offered[i]) alloc[i] = share;
                const auto fr = follower_response(ctx, alloc, {theta});
                actions = fr.actions;
                std::vector<char> stays(v_count, 0);
                int stay_count = 0;
                for (int i = 0; i < v_count; ++i)
                    if (actions[i] == Action::offload) {
                        stays[i] = 1;
                        ++stay_count;
                    }
                if (stays == offered) break;
                offered = std::move(stays);
                count = stay_count;
            }
            std::fill(alloc.begin(), alloc.end(), 0.0);
            if (count > 0) {
                const double share = f_max / count;
                for (int i = 0; i < v_count; ++i)
                    if (actions[i] == Action::offload) alloc[i] = share;
            }
            SlotDecision dec{actions, theta, alloc};
            const double q = evaluate_slot(ctx, dec).u_qoe;
            if (!have || q > best_q) {
                have = true;
                best_q = q;
                best_dec = std::move(dec);
            }
        }
        const SlotEval eval = evaluate_slot(ctx, best_dec);
        adopt(n, std::move(best_dec), eval, false);
    };

    // Runs the follower against one leader allocation and a candidate phase
    // set, updates the incumbents and feeds the elite buffer.
    auto try_proposal = [&](int n, const std::vector<Action>& proposal_actions,
                            std::vector<double> alloc,
                            std::vector<std::vector<double>> candidates, bool equal_split) {
        const auto& ctx = ctxs[n];
        if (mode == LoopMode::equal_alloc) {
            equal_rule_response(n, candidates);
            return;
        }
        if (equal_split) equalize(proposal_actions, alloc);
        auto fr = follower_response(ctx, alloc, candidates);
        SlotDecision dec{fr.actions, candidates[fr.theta_index], alloc};
        const SlotEval eval = evaluate_slot(ctx, dec);
        adopt(n, std::move(dec), eval, equal_split);
    };

    auto aligned_for = [&](int n, int vehicle) {
        return snap_phases(align_phases(ep.channels[n].vehicle_bs[vehicle],
                                        ep.channels[n].vehicle_irs[vehicle], ep.channels[n].irs_bs,
                                        k_count, ep.params.scenario.num_antennas));
    };

    // Exploration proposal: a fresh denoiser sample (Algorithm 2 line 4).
    auto explore_slot = [&](int n) {
        const auto latent = reverse_sample(denoiser, sched, dim, rng);
        SlotDecision lead =
            decode_latent(latent, ep.tasks[n], f_max, k_count, cfg.phase_grid, cfg.resource_grid);

        std::vector<std::vector<double>> candidates;
        if (mode == LoopMode::frozen_theta) {
            candidates.push_back(frozen[n]);
        } else {
            candidates.push_back(lead.theta);
            for (int c = 1; c < cfg.gdm.phase_candidates; ++c) {
                const auto extra = reverse_sample(denoiser, sched, dim, rng);
                candidates.push_back(
                    decode_latent(extra, ep.tasks[n], f_max, k_count, cfg.phase_grid, cfg.resource_grid)
                        .theta);
            }
            // Co-phasing candidate for the neediest proposed offloader: good
            // phases depend on this slot's channel draw, which unconditioned
            // sampling cannot see.
            int needy = -1;
            double needy_cycles = 0.0;
            for (int i = 0; i < v_count; ++i) {
                if (lead.action[i] != Action::offload || lead.alloc_hz[i] <= 0.0) continue;
                const double cycles = ep.tasks[n][i].data_bits * ep.tasks[n][i].intensity_cpb;
                if (cycles > needy_cycles) {
                    needy_cycles = cycles;
                    needy = i;
                }
            }
            if (needy >= 0) candidates.push_back(aligned_for(n, needy));
        }
        if (mode == LoopMode::full) {
            // The equal split over the proposed set is one more leader
            // sample; shaped allocations must earn their keep against it.
            try_proposal(n, lead.action, lead.alloc_hz, candidates, true);
        }
        try_proposal(n, lead.action, lead.alloc_hz, std::move(candidates), false);
    };

    // Refinement proposal: perturb an incumbent decision. The offload set
    // may flip one vehicle, allocation weights get log-normal jitter, and a
    // sparse subset of phases is nudged with an annealed scale.
    auto refine_slot = [&](int n, double anneal, const std::vector<SlotBest>& pool,
                           bool equal_split) {
        if (!pool[n].valid) return;
        const auto& inc = pool[n].decision;

        std::vector<int> offl;
        for (int i = 0; i < v_count; ++i)
            if (inc.action[i] == Action::offload) offl.push_back(i);
        std::vector<char> in_set(v_count, 0);
        for (int i : offl) in_set[i] = 1;
        if (rng.uniform() < 0.3) {
            std::vector<int> tasked;
            for (int i = 0; i < v_count; ++i)
                if (ep.tasks[n][i].present) tasked.push_back(i);
            if (!tasked.empty()) {
                const int flip = tasked[rng.uniform_int(0, static_cast<int>(tasked.size()) - 1)];
                in_set[flip] = !in_set[flip];
            }
        }

        std::vector<Action> proposal(v_count, Action::none);
        std::vector<double> weights(v_count, 0.0);
        double z = 0.0;
        for (int i = 0; i < v_count; ++i) {
            if (!ep.tasks[n][i].present) continue;
            proposal[i] = in_set[i] ? Action::offload : Action::local;
            if (in_set[i]) {
                const double base = inc.alloc_hz[i] > 0.0 ? inc.alloc_hz[i] : f_max / v_count;
                weights[i] = base * std::exp(0.4 * anneal * rng.normal());
                z += weights[i];
            }
        }
        std::vector<double> alloc(v_count, 0.0);
        if (z > 0.0) {
            for (int i = 0; i < v_count; ++i) alloc[i] = weights[i] / z * f_max;
            if (cfg.resource_grid >= 2) {
                const int levels = cfg.resource_grid - 1;
                for (auto& f : alloc) f = std::floor(f / f_max * levels) / levels * f_max;
            }
        }

        std::vector<std::vector<double>> candidates;
        if (mode == LoopMode::frozen_theta) {
            candidates.push_back(frozen[n]);
        } else {
            candidates.push_back(inc.theta);
            auto jitter = inc.theta;
            const int touches = 1 + rng.uniform_int(0, std::max(1, k_count / 8));
            for (int t = 0; t < touches; ++t) {
                const int k = rng.uniform_int(0, k_count - 1);
                jitter[k] = normalize_phase(jitter[k] + anneal * rng.normal());
            }
            candidates.push_back(snap_phases(std::move(jitter)));
            int added = 0;
            for (int i = 0; i < v_count && added < 3; ++i) {
                if (!in_set[i] || !ep.tasks[n][i].present) continue;
                candidates.push_back(aligned_for(n, i));
                ++added;
            }
        }
        try_proposal(n, proposal, std::move(alloc), std::move(candidates), equal_split);
    };

    // Reclaims allocation committed to vehicles that declined to offload, by
    // renormalizing the full budget over the incumbent's accepting set.
    auto cleanup_slot = [&](int n) {
        if (!best[n].valid) return;
        const auto& inc = best[n].decision;
        double executed = 0.0;
        std::vector<int> acceptors;
        for (int i = 0; i < v_count; ++i) {
            if (inc.action[i] == Action::offload && inc.alloc_hz[i] > 0.0) {
                executed += inc.alloc_hz[i];
                acceptors.push_back(i);
            }
        }
        if (acceptors.empty() || executed >= f_max * (1.0 - 1e-9)) return;

        std::vector<Action> proposal(v_count, Action::none);
        std::vector<double> alloc(v_count, 0.0);
        for (int i = 0; i < v_count; ++i)
            if (ep.tasks[n][i].present) proposal[i] = Action::local;
        for (int i : acceptors) {
            proposal[i] = Action::offload;
            alloc[i] = inc.alloc_hz[i] / executed * f_max;
        }
        if (cfg.resource_grid >= 2) {
            const int levels = cfg.resource_grid - 1;
            for (auto& f : alloc) f = std::floor(f / f_max * levels) / levels * f_max;
        }
        std::vector<std::vector<double>> candidates{
            mode == LoopMode::frozen_theta ? frozen[n] : inc.theta};
        try_proposal(n, proposal, std::move(alloc), std::move(candidates), false);
    };

    auto run_slot = [&](int n, double anneal) {
        explore_slot(n);
        if (mode == LoopMode::full) {
            for (int r = 0; r < 2; ++r) refine_slot(n, anneal, best, false);
            for (int r = 0; r < 2; ++r) refine_slot(n, anneal, best_equal, true);
            cleanup_slot(n);
        } else if (mode == LoopMode::frozen_theta) {
            for (int r = 0; r < 3; ++r) refine_slot(n, anneal, best, false);
            cleanup_slot(n);
        } else {
            // Equal rule: only the phase side is searchable.
            for (int r = 0; r < 3; ++r) refine_slot(n, anneal, best, false);
        }
    };

    auto adopted_utility = [&] {
        double u = 0.0;
        for (const auto& b : best) u += b.eval.u_total;
        return u;
    };

    // Iteration 0: initial adopted strategy from plain random sampling.
    for (int n = 0; n < n_slots; ++n) run_slot(n, 1.0);
    double u_prev = adopted_utility();

    SolveResult result;
    result.solver = name;
    result.utility_trace.push_back(u_prev);
    result.reward_trace.push_back(0.0);

    double r_prev = 0.0;
    int used = 0;
    for (int j = 1; j <= cfg.j_iter; ++j) {
        const double anneal = std::max(0.08, std::exp(-2.5 * j / cfg.j_iter));
        for (int n = 0; n < n_slots; ++n) run_slot(n, anneal);
        const double u_j = adopted_utility();
        double r_j = reward(u_j, u_prev);
        if (cfg.reward_stub) r_j = cfg.reward_stub(j);
        for (int s = 0; s < cfg.gdm.train_steps; ++s) train_step(denoiser, elites, sched, adam, rng);
        result.utility_trace.push_back(u_j);
        result.reward_trace.push_back(r_j);
        used = j;
        u_prev = u_j;
        if (std::abs(r_j - r_prev) < cfg.epsilon) break;  // convergence test precedes the update
        r_prev = r_j;
    }

    result.iterations = used;
    for (auto& b : best) {
        result.decision.slots.push_back(b.decision);
        result.per_slot.push_back(metrics_of(b.eval));
        result.total_utility += b.eval.u_total;
    }
    result.wall_seconds = watch.seconds();
    return result;
}

std::vector<double> dopsra_state(const SlotContext& ctx, int slot, int num_slots) {
    const int v_count = ctx.num_vehicles();
    std::vector<double> s;
    s.reserve(6 * v_count + 1);
    for (int i = 0; i < v_count; ++i) {
        const Task& t = (*ctx.tasks)[i];
        s.push_back(t.present ? 1.0 : 0.0);
        s.push_back(t.present ? t.data_bits / 1e6 : 0.0);
        s.push_back(t.present ? t.intensity_cpb / 5e3 : 0.0);
        s.push_back(t.present ? t.deadline_s / 10.0 : 0.0);
        double g_direct = 0.0;
        for (const auto& c : ctx.channel->vehicle_bs[i]) g_direct += std::norm(c);
        double g_irs = 0.0;
        for (const auto& c : ctx.channel->vehicle_irs[i]) g_irs += std::norm(c);
        s.push_back((std::log10(g_direct + 1e-30) + 12.0) / 6.0);
        s.push_back((std::log10(g_irs + 1e-30) + 12.0) / 6.0);
    }
    s.push_back(num_slots > 1 ? static_cast<double>(slot) / (num_slots - 1) : 0.0);
    return s;
}

}  // namespace

void SolverConfig::validate() const {
    if (j_iter < 1) throw ConfigError("invalid solver config: j_iter must be >= 1");
    if (epsilon <= 0.0) throw ConfigError("invalid solver config: epsilon must be > 0");
    if (gdm.steps < 1) throw ConfigError("invalid solver config: gdm.steps must be >= 1");
    if (!(gdm.beta_min > 0.0) || gdm.beta_min > gdm.beta_max)
        throw ConfigError("invalid solver config: need 0 < gdm.beta_min <= gdm.beta_max");
    if (gdm.phase_candidates < 1)
        throw ConfigError("invalid solver config: gdm.phase_candidates must be >= 1");
    if (gdm.elite_capacity < 1)
        throw ConfigError("invalid solver config: gdm.elite_capacity must be >= 1");
    if (oracle_phase_grid < 2 || oracle_resource_grid < 2)
        throw ConfigError("invalid solver config: oracle grids must be >= 2");
    if (dopsra_episodes < 1)
        throw ConfigError("invalid solver config: dopsra_episodes must be >= 1");
}

std::vector<SlotContext> Episode::contexts() const {
    std::vector<SlotContext> ctx(tasks.size());
    for (size_t n = 0; n < tasks.size(); ++n) ctx[n] = {&params, &tasks[n], &channels[n]};
    return ctx;
}

Episode build_episode(const ModelParams& params, std::uint64_t seed) {
    params.scenario.validate();
    params.channel.validate();
    params.compute.validate();
    params.game.validate();

    Episode ep;
    ep.params = params;
    Rng rng(mix_seed(seed, kTagEpisode));
    ScenarioState state = init_scenario(params.scenario, rng);
    for (int n = 0; n < params.scenario.num_slots; ++n) {
        ep.tasks.push_back(generate_tasks(state, rng));
        ep.channels.push_back(realize_channel(state, params.channel, rng));
        state = step_mobility(state);
    }
    return ep;
}

SolveResult gdmsg_solve(const Episode& ep, const SolverConfig& cfg, std::uint64_t seed) {
    return gdm_loop(ep, cfg, seed, LoopMode::full, "gdmsg", kTagGdmsg);
}

SolveResult rpsgora_solve(const Episode& ep, const SolverConfig& cfg, std::uint64_t seed) {
    return gdm_loop(ep, cfg, seed, LoopMode::frozen_theta, "rpsgora", kTagRpsgora);
}

SolveResult ergops_solve(const Episode& ep, const SolverConfig& cfg, std::uint64_t seed) {
    return gdm_loop(ep, cfg, seed, LoopMode::equal_alloc, "ergops", kTagErgops);
}

SolveResult ropsra_solve(const Episode& ep, const SolverConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Stopwatch watch;
    const auto ctxs = ep.contexts();
    const auto& sc = ep.params.scenario;
    const double f_max = ep.params.compute.bs_compute_hz;
    Rng rng(mix_seed(seed, kTagRopsra));

    SolveResult result;
    result.solver = "ropsra";
    double total = 0.0;
    for (int n = 0; n < ep.num_slots(); ++n) {
        SlotDecision dec;
        dec.action.assign(sc.num_vehicles, Action::none);
        dec.theta.resize(sc.num_elements);
        dec.alloc_hz.assign(sc.num_vehicles, 0.0);
        for (auto& t : dec.theta) {
            if (cfg.phase_grid >= 2)
                t = kTwoPi * rng.uniform_int(0, cfg.phase_grid - 1) / cfg.phase_grid;
            else
                t = rng.uniform(0.0, kTwoPi);
        }
        std::vector<int> offloaders;
        for (int i = 0; i < sc.num_vehicles; ++i) {
            if (!ep.tasks[n][i].present) continue;
            dec.action[i] = rng.uniform() < 0.5 ? Action::local : Action::offload;
            if (dec.action[i] == Action::offload) offloaders.push_back(i);
        }
        if (!offloaders.empty()) {
            std::vector<double> w(offloaders.size());
            double z = 0.0;
            for (auto& x : w) {
                x = -std::log(1.0 - rng.uniform());
                z += x;
            }
            for (size_t j = 0; j < offloaders.size(); ++j) {
                double frac = w[j] / z;
                if (cfg.resource_grid >= 2) {
                    const int levels = cfg.resource_grid - 1;
                    frac = std::floor(frac * levels) / levels;
                }
                dec.alloc_hz[offloaders[j]] = frac * f_max;
            }
        }
        const SlotEval eval = screen_and_evaluate(ctxs[n], dec);
        result.decision.slots.push_back(std::move(dec));
        result.per_slot.push_back(metrics_of(eval));
        total += eval.u_total;
    }
    finish_single_pass(result, total, watch);
    return result;
}

SolveResult dopsra_solve(const Episode& ep, const SolverConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Stopwatch watch;
    const auto ctxs = ep.contexts();
    const int n_slots = ep.num_slots();
    const int v_count = ep.params.scenario.num_vehicles;
    const int k_count = ep.params.scenario.num_elements;
    const double f_max = ep.params.compute.bs_compute_hz;
    const int dim = latent_dim_for(v_count, k_count);
    const int state_dim = 6 * v_count + 1;
    const double log_2pi = std::log(2.0 * 3.141592653589793);

    Rng rng(mix_seed(seed, kTagDopsra));
    Mlp actor({state_dim, 64, 64, dim}, Activation::tanh_act, rng);
    Mlp critic({state_dim, 64, 64, 1}, Activation::tanh_act, rng);
    std::vector<double> log_std(dim, 0.0);
    Adam actor_opt(cfg.dopsra_lr, actor.num_params());
    Adam critic_opt(cfg.dopsra_lr, critic.num_params());
    Adam std_opt(cfg.dopsra_lr, dim);

    // Running normalizer for per-slot utilities.
    double r_mean = 0.0, r_m2 = 0.0;
    long r_count = 0;
    auto push_reward = [&](double r) {
        ++r_count;
        const double d = r - r_mean;
        r_mean += d / r_count;
        r_m2 += d * (r - r_mean);
    };
    auto reward_std = [&] {
        return r_count > 1 ? std::sqrt(std::max(r_m2 / (r_count - 1), 1e-12)) : 1.0;
    };

    struct Sample {
        std::vector<double> state;
        std::vector<double> action;
        double logp_old = 0.0;
        double reward_raw = 0.0;
    };
    std::vector<Sample> batch;

    auto policy = [&](const std::vector<double>& state, bool greedy) {
        const auto mu = actor.forward(state);
        std::vector<double> a(dim);
        double logp = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double z = greedy ? 0.0 : rng.normal();
            a[i] = mu[i] + std::exp(log_std[i]) * z;
            logp += -0.5 * z * z - log_std[i] - 0.5 * log_2pi;
        }
        return std::make_pair(std::move(a), logp);
    };

    auto play = [&](int n, const std::vector<double>& latent) {
        SlotDecision dec =
            decode_latent(latent, ep.tasks[n], f_max, k_count, cfg.phase_grid, cfg.resource_grid);
        const SlotEval eval = screen_and_evaluate(ctxs[n], dec);
        return std::make_pair(std::move(dec), eval);
    };

    auto ppo_update = [&] {
        if (batch.empty()) return;
        const double sd = reward_std();
        std::vector<double> adv(batch.size()), target(batch.size());
        for (size_t s = 0; s < batch.size(); ++s) {
            target[s] = (batch[s].reward_raw - r_mean) / sd;
            adv[s] = target[s] - critic.forward(batch[s].state)[0];
        }
        double a_mean = 0.0, a_sq = 0.0;
        for (double a : adv) {
            a_mean += a / adv.size();
            a_sq += a * a / adv.size();
        }
        const double a_sd = std::sqrt(std::max(a_sq - a_mean * a_mean, 1e-12));
        for (double& a : adv) a = (a - a_mean) / a_sd;

        const double inv_b = 1.0 / batch.size();
        Mlp::Cache cache;
        for (int epoch = 0; epoch < 4; ++epoch) {
            std::vector<double> ga(actor.num_params(), 0.0);
            std::vector<double> gc(critic.num_params(), 0.0);
            std::vector<double> gs(dim, 0.0);
            for (size_t s = 0; s < batch.size(); ++s) {
                const auto v = critic.forward(batch[s].state, cache);
                critic.backward(cache, {2.0 * (v[0] - target[s]) * inv_b}, gc);

                const auto mu = actor.forward(batch[s].state, cache);
                double logp = 0.0;
                for (int i = 0; i < dim; ++i) {
                    const double sigma = std::exp(log_std[i]);
                    const double z = (batch[s].action[i] - mu[i]) / sigma;
                    logp += -0.5 * z * z - log_std[i] - 0.5 * log_2pi;
                }
                const double ratio = std::exp(std::clamp(logp - batch[s].logp_old, -20.0, 20.0));
                const bool active =
                    adv[s] > 0.0 ? ratio < 1.0 + cfg.dopsra_clip : ratio > 1.0 - cfg.dopsra_clip;
                if (active) {
                    const double coeff = -adv[s] * ratio * inv_b;  // dLoss/dlogp
                    std::vector<double> up(dim);
                    for (int i = 0; i < dim; ++i) {
                        const double sigma = std::exp(log_std[i]);
                        const double diff = batch[s].action[i] - mu[i];
                        up[i] = coeff * diff / (sigma * sigma);
                        gs[i] += coeff * (diff * diff / (sigma * sigma) - 1.0);
                    }
                    actor.backward(cache, up, ga);
                }
                for (int i = 0; i < dim; ++i) gs[i] += -1e-3 * inv_b;  // entropy bonus
            }
            actor_opt.update(actor.params(), ga);
            critic_opt.update(critic.params(), gc);
            std_opt.update(log_std, gs);
            for (auto& l : log_std) l = std::clamp(l, -2.5, 1.0);
        }
    };

    SolveResult result;
    result.solver = "dopsra";
    for (int episode = 1; episode <= cfg.dopsra_episodes; ++episode) {
        double episode_utility = 0.0;
        for (int n = 0; n < n_slots; ++n) {
            auto state = dopsra_state(ctxs[n], n, n_slots);
            auto [latent, logp] = policy(state, false);
            auto [dec, eval] = play(n, latent);
            episode_utility += eval.u_total;
            push_reward(eval.u_total);
            batch.push_back({std::move(state), std::move(latent), logp, eval.u_total});
        }
        const double prev =
            result.utility_trace.empty() ? episode_utility : result.utility_trace.back();
        result.utility_trace.push_back(episode_utility);
        result.reward_trace.push_back(reward(episode_utility, prev));
        if (episode % cfg.dopsra_batch == 0) {
            ppo_update();
            batch.clear();
        }
    }
    result.iterations = cfg.dopsra_episodes;

    // Greedy rollout with the trained policy.
    double total = 0.0;
    for (int n = 0; n < n_slots; ++n) {
        const auto state = dopsra_state(ctxs[n], n, n_slots);
        auto [latent, logp] = policy(state, true);
        (void)logp;
        auto [dec, eval] = play(n, latent);
        result.decision.slots.push_back(std::move(dec));
        result.per_slot.push_back(metrics_of(eval));
        total += eval.u_total;
    }
    result.total_utility = total;
    result.wall_seconds = watch.seconds();
    return result;
}

SolveResult brute_force_oracle(const Episode& ep, int phase_grid, int resource_grid) {
    const auto& sc = ep.params.scenario;
    if (sc.num_vehicles > 3 || sc.num_elements > 4 || ep.num_slots() > 2)
        throw std::invalid_argument("brute_force_oracle: instance too large (needs V<=3, K<=4, N<=2)");
    if (phase_grid < 2 || phase_grid > 16 || resource_grid < 2 || resource_grid > 16)
        throw std::invalid_argument("brute_force_oracle: grids must be in [2,16]");

    Stopwatch watch;
    const auto ctxs = ep.contexts();
    const double f_max = ep.params.compute.bs_compute_hz;
    const int k_count = sc.num_elements;
    const int levels = resource_grid - 1;

    SolveResult result;
    result.solver = "oracle";
    for (int n = 0; n < ep.num_slots(); ++n) {
        std::vector<int> tasked;
        for (int i = 0; i < sc.num_vehicles; ++i)
            if (ep.tasks[n][i].present) tasked.push_back(i);

        SlotDecision best_dec;
        best_dec.action.assign(sc.num_vehicles, Action::none);
        best_dec.theta.assign(k_count, 0.0);
        best_dec.alloc_hz.assign(sc.num_vehicles, 0.0);
        SlotEval best_eval = screen_and_evaluate(ctxs[n], best_dec);

        auto consider = [&](SlotDecision dec) {
            const SlotEval eval = screen_and_evaluate(ctxs[n], dec);
            if (eval.u_total > best_eval.u_total) {
                best_dec = std::move(dec);
                best_eval = eval;
            }
        };

        const int assignments = 1 << tasked.size();
        for (int mask = 0; mask < assignments; ++mask) {
            SlotDecision dec;
            dec.action.assign(sc.num_vehicles, Action::none);
            dec.theta.assign(k_count, 0.0);
            dec.alloc_hz.assign(sc.num_vehicles, 0.0);
            std::vector<int> offloaders;
            for (size_t b = 0; b < tasked.size(); ++b) {
                if (mask >> b & 1) {
                    dec.action[tasked[b]] = Action::offload;
                    offloaders.push_back(tasked[b]);
                } else {
                    dec.action[tasked[b]] = Action::local;
                }
            }
            if (offloaders.empty()) {
                consider(dec);
                continue;
            }
            std::vector<int> ph(k_count, 0);
            while (true) {
                for (int k = 0; k < k_count; ++k) dec.theta[k] = kTwoPi * ph[k] / phase_grid;
                std::vector<int> lv(offloaders.size(), 1);
                while (true) {
                    int sum = 0;
                    for (int l : lv) sum += l;
                    if (sum <= levels) {
                        for (size_t o = 0; o < offloaders.size(); ++o)
                            dec.alloc_hz[offloaders[o]] = f_max * lv[o] / levels;
                        consider(dec);
                    }
                    size_t d = 0;
                    while (d < lv.size()) {
                        if (++lv[d] <= levels) break;
                        lv[d] = 1;
                        ++d;
                    }
                    if (d == lv.size()) break;
                }
                size_t k = 0;
                while (k < ph.size()) {
                    if (++ph[k] < phase_grid) break;
                    ph[k] = 0;
                    ++k;
                }
                if (k == ph.size()) break;
            }
        }
        result.decision.slots.push_back(best_dec);
        result.per_slot.push_back(metrics_of(best_eval));
        result.total_utility += best_eval.u_total;
    }
    result.utility_trace = {result.total_utility};
    result.reward_trace = {0.0};
    result.iterations = 1;
    result.wall_seconds = watch.seconds();
    return result;
}

SolveResult solve(const std::string& name, const Episode& ep, const SolverConfig& cfg,
                  std::uint64_t seed) {
    if (name == "gdmsg") return gdmsg_solve(ep, cfg, seed);
    if (name == "ropsra") return ropsra_solve(ep, cfg, seed);
    if (name == "rpsgora") return rpsgora_solve(ep, cfg, seed);
    if (name == "ergops") return ergops_solve(ep, cfg, seed);
    if (name == "dopsra") return dopsra_solve(ep, cfg, seed);
    if (name == "oracle")
        return brute_force_oracle(ep, cfg.oracle_phase_grid, cfg.oracle_resource_grid);
    throw ConfigError("unknown solver name: " + name);
}

const std::vector<std::string>& solver_names() {
    static const std::vector<std::string> names{"gdmsg", "ropsra", "rpsgora", "ergops", "dopsra"};
    return names;
}

}  // namespace irsmec
