#include "irsmec/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irsmec {

void GameParams::validate() const {
    if (w_vehicle < 0.0 || w_vehicle > 1.0)
        throw ConfigError("invalid game config: w_vehicle must be in [0,1]");
    if (w_bs < 0.0 || w_bs > 1.0) throw ConfigError("invalid game config: w_bs must be in [0,1]");
    if (revenue_shift <= 0.0) throw ConfigError("invalid game config: revenue_shift must be > 0");
    if (unit_price < 0.0) throw ConfigError("invalid game config: unit_price must be >= 0");
    if (vehicle_budget < 0.0) throw ConfigError("invalid game config: vehicle_budget must be >= 0");
    if (bs_price_floor < 0.0) throw ConfigError("invalid game config: bs_price_floor must be >= 0");
}

double task_revenue(double deadline_s, double delay_s, double shift) {
    const double arg = shift + deadline_s - delay_s;
    if (arg <= 0.0)
        throw std::domain_error("task_revenue: nonpositive log argument (deadline violated)");
    return std::log(arg);
}

double task_cost_local(double local_energy_j) { return local_energy_j; }

double task_cost_offload(double offload_energy_j, double alloc_hz, double unit_price,
                         double budget) {
    return offload_energy_j + (budget - alloc_hz * unit_price);
}

double vehicle_utility_local(double w, double revenue, double local_energy_j) {
    return w * revenue - (1.0 - w) * local_energy_j;
}

double vehicle_utility_offload(double w, double revenue, double transmission_energy_j,
                               double alloc_hz, double unit_price, double budget) {
    return w * revenue - (1.0 - w) * (transmission_energy_j + budget - alloc_hz * unit_price);
}

double bs_utility(double w_bs, double alloc_hz, double unit_price, double price_floor,
                  double computation_energy_j) {
    return w_bs * (alloc_hz * unit_price - price_floor) - (1.0 - w_bs) * computation_energy_j;
}

double total_utility(double u_qoe, double u_revenue, double w_vehicle, double w_bs) {
    return w_vehicle * u_qoe + w_bs * u_revenue;
}

double reward(double utility, double previous_utility) {
    return utility > previous_utility ? utility - previous_utility : 0.0;
}

namespace {

struct BranchOutcome {
    bool feasible = false;
    double delay_s = 0.0;
    double revenue = 0.0;
    double utility = 0.0;
    double local_energy_j = 0.0;
    double transmission_energy_j = 0.0;
    double computation_energy_j = 0.0;
    double fee = 0.0;
};

BranchOutcome eval_local(const Task& task, const ModelParams& p) {
    BranchOutcome b;
    const double cycles = task.data_bits * task.intensity_cpb;
    b.delay_s = local_delay(cycles, p.scenario.vehicle_compute_hz);
    b.local_energy_j = local_energy(cycles, p.scenario.vehicle_compute_hz, p.scenario.vehicle_kappa);
    b.feasible = b.delay_s <= task.deadline_s;
    const double arg = p.game.revenue_shift + task.deadline_s - b.delay_s;
    b.revenue = arg > 0.0 ? std::log(arg) : std::log(p.game.revenue_shift);
    b.utility = vehicle_utility_local(p.game.w_vehicle, b.revenue, b.local_energy_j);
    return b;
}

BranchOutcome eval_offload(const Task& task, double rate, double alloc_hz, const ModelParams& p) {
    BranchOutcome b;
    if (rate <= 0.0 || alloc_hz <= 0.0) return b;  // infeasible, never executed
    const double cycles = task.data_bits * task.intensity_cpb;
    const double t_tran = task.data_bits / rate;
    b.delay_s = t_tran + cycles / alloc_hz;
    b.feasible = b.delay_s <= task.deadline_s;
    const auto e = offload_energy(p.scenario.tx_power_w, t_tran, cycles, alloc_hz, p.compute.bs_kappa);
    b.transmission_energy_j = e.transmission;
    b.computation_energy_j = e.computation;
    b.fee = alloc_hz * p.game.unit_price;
    const double arg = p.game.revenue_shift + task.deadline_s - b.delay_s;
    b.revenue = arg > 0.0 ? std::log(arg) : std::log(p.game.revenue_shift);
    b.utility = vehicle_utility_offload(p.game.w_vehicle, b.revenue, b.transmission_energy_j,
                                        alloc_hz, p.game.unit_price, p.game.vehicle_budget);
    return b;
}

// Utility of a task that could not be served: revenue evaluated at the
// deadline, no cost.
double failed_utility(const ModelParams& p) {
    return p.game.w_vehicle * std::log(p.game.revenue_shift);
}

std::vector<double> rates_under_theta(const SlotContext& ctx, const std::vector<double>& theta) {
    const auto& p = *ctx.params;
    const auto gains = ctx.channel->effective_gains(theta);
    const std::vector<double> powers(gains.size(), p.scenario.tx_power_w);
    std::vector<double> rates(gains.size());
    for (size_t i = 0; i < gains.size(); ++i) {
        const double s = sinr_from_gains(static_cast<int>(i), powers, gains, p.channel.noise_w,
                                         p.channel.interference);
        rates[i] = rate_bps(p.channel.bandwidth_hz, p.scenario.num_vehicles, s);
    }
    return rates;
}

}  // namespace

SlotEval evaluate_slot(const SlotContext& ctx, const SlotDecision& decision) {
    const auto& p = *ctx.params;
    const int v_count = ctx.num_vehicles();
    const auto rates = rates_under_theta(ctx, decision.theta);

    SlotEval eval;
    eval.vehicles.resize(v_count);
    for (int i = 0; i < v_count; ++i) {
        auto& out = eval.vehicles[i];
        const Task& task = (*ctx.tasks)[i];
        out.task_present = task.present;
        out.action = decision.action[i];
        if (!task.present) continue;

        if (out.action == Action::none) {
            // Failed task: waits out its deadline, consumes nothing.
            out.failed = true;
            out.delay_s = task.deadline_s;
            out.revenue = std::log(p.game.revenue_shift);
            out.utility_vehicle = failed_utility(p);
        } else if (out.action == Action::local) {
            const auto b = eval_local(task, p);
            out.deadline_miss = !b.feasible;
            out.delay_s = b.delay_s;
            out.local_energy_j = b.local_energy_j;
            out.revenue = b.revenue;
            out.utility_vehicle = b.utility;
        } else {
            const auto b = eval_offload(task, rates[i], decision.alloc_hz[i], p);
            if (b.delay_s == 0.0 && !b.feasible) {
                // Offload executed with no rate or no allocation: nothing ran.
                out.failed = true;
                out.deadline_miss = true;
                out.delay_s = task.deadline_s;
                out.revenue = std::log(p.game.revenue_shift);
                out.utility_vehicle = failed_utility(p);
            } else {
                out.deadline_miss = !b.feasible;
                out.delay_s = b.delay_s;
                out.transmission_energy_j = b.transmission_energy_j;
                out.computation_energy_j = b.computation_energy_j;
                out.fee = b.fee;
                out.revenue = b.revenue;
                out.utility_vehicle = b.utility;
                out.utility_bs = bs_utility(p.game.w_bs, decision.alloc_hz[i], p.game.unit_price,
                                            p.game.bs_price_floor, b.computation_energy_j);
            }
        }
        eval.delay_s += out.delay_s;
        eval.energy_j += out.local_energy_j + out.transmission_energy_j + out.computation_energy_j;
        eval.u_qoe += out.utility_vehicle;
        eval.u_revenue += out.utility_bs;
    }
    eval.u_total = total_utility(eval.u_qoe, eval.u_revenue, p.game.w_vehicle, p.game.w_bs);
    return eval;
}

const ConstraintReport::Item* ConstraintReport::find(const std::string& id) const {
    for (const auto& item : items)
        if (item.id == id) return &item;
    return nullptr;
}

ConstraintReport check_constraints(const Decision& decision,
                                   const std::vector<SlotContext>& slots) {
    ConstraintReport report;
    report.items = {{"14b", true, {}}, {"14c", true, {}}, {"14d", true, {}}, {"14e", true, {}},
                    {"14f", true, {}}, {"14g", true, {}}, {"14h", true, {}}};
    auto& binary = report.items[0];
    auto& one_hot = report.items[1];
    auto& deadline = report.items[2];
    auto& task_count = report.items[3];
    auto& alloc_range = report.items[4];
    auto& alloc_sum = report.items[5];
    auto& phase_range = report.items[6];
    (void)binary;      // guaranteed by the Action type
    (void)task_count;  // guaranteed by the per-slot task vector

    for (size_t n = 0; n < decision.slots.size(); ++n) {
        const auto& ctx = slots[n];
        const auto& slot = decision.slots[n];
        const auto& p = *ctx.params;
        const int v_count = ctx.num_vehicles();
        const double f_max = p.compute.bs_compute_hz;
        const double f_tol = f_max * 1e-9;

        for (int i = 0; i < v_count; ++i) {
            const int idx = static_cast<int>(n) * v_count + i;
            if (slot.action[i] != Action::none && !(*ctx.tasks)[i].present) {
                one_hot.ok = false;
                one_hot.violations.push_back(idx);
            }
            const double f = slot.alloc_hz[i];
            if (f < 0.0 || f > f_max + f_tol) {
                alloc_range.ok = false;
                alloc_range.violations.push_back(idx);
            }
        }

        double offload_sum = 0.0;
        for (int i = 0; i < v_count; ++i)
            if (slot.action[i] == Action::offload) offload_sum += slot.alloc_hz[i];
        if (offload_sum > f_max + f_tol) {
            alloc_sum.ok = false;
            alloc_sum.violations.push_back(static_cast<int>(n));
        }

        for (size_t k = 0; k < slot.theta.size(); ++k) {
            if (slot.theta[k] < 0.0 || slot.theta[k] >= kTwoPi) {
                phase_range.ok = false;
                phase_range.violations.push_back(static_cast<int>(n * slot.theta.size() + k));
            }
        }

        // Deadline screening runs on normalized phases so a 14h violation
        // cannot abort the report.
        SlotDecision cleaned = slot;
        for (auto& t : cleaned.theta) t = normalize_phase(t);
        const auto eval = evaluate_slot(ctx, cleaned);
        for (int i = 0; i < v_count; ++i) {
            if (eval.vehicles[i].deadline_miss && !eval.vehicles[i].failed) {
                deadline.ok = false;
                deadline.violations.push_back(static_cast<int>(n) * v_count + i);
            }
        }
    }

    for (const auto& item : report.items) report.feasible = report.feasible && item.ok;
    return report;
}

FollowerResult follower_response(const SlotContext& ctx, const std::vector<double>& alloc_hz,
                                 const std::vector<std::vector<double>>& theta_candidates) {
    const auto& p = *ctx.params;
    const int v_count = ctx.num_vehicles();
    const double f_max = p.compute.bs_compute_hz;
    const double f_tol = f_max * 1e-9;

    if (static_cast<int>(alloc_hz.size()) != v_count)
        throw std::invalid_argument("follower_response: allocation size mismatch");
    double total = 0.0;
    for (double f : alloc_hz) {
        if (f < 0.0 || f > f_max + f_tol)
            throw std::invalid_argument("follower_response: allocation outside [0, f_b^max]");
        total += f;
    }
    if (total > f_max + f_tol)
        throw std::invalid_argument("follower_response: allocation sum exceeds f_b^max");
    if (theta_candidates.empty())
        throw std::invalid_argument("follower_response: no phase candidates");

    FollowerResult best;
    double best_sum = -std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < theta_candidates.size(); ++c) {
        const auto rates = rates_under_theta(ctx, theta_candidates[c]);
        std::vector<Action> actions(v_count, Action::none);
        double sum_u = 0.0;
        for (int i = 0; i < v_count; ++i) {
            const Task& task = (*ctx.tasks)[i];
            if (!task.present) continue;
            const auto local = eval_local(task, p);
            const auto off = eval_offload(task, rates[i], alloc_hz[i], p);
            if (local.feasible && (!off.feasible || local.utility >= off.utility)) {
                actions[i] = Action::local;
                sum_u += local.utility;
            } else if (off.feasible) {
                actions[i] = Action::offload;
                sum_u += off.utility;
            } else {
                sum_u += failed_utility(p);
            }
        }
        if (sum_u > best_sum) {
            best_sum = sum_u;
            best.theta_index = static_cast<int>(c);
            best.actions = std::move(actions);
        }
    }
    return best;
}

}  // namespace irsmec
