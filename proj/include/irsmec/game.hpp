#ifndef IRSMEC_GAME_HPP
#define IRSMEC_GAME_HPP

#include <string>
#include <vector>

#include "irsmec/channel.hpp"
#include "irsmec/compute.hpp"
#include "irsmec/scenario.hpp"

namespace irsmec {

/// Stackelberg utility weights and pricing.
struct GameParams {
    double w_vehicle = 0.9;
    double w_bs = 0.95;
    double revenue_shift = 1.0;    // c in the revenue log
    double unit_price = 1e-8;      // currency per Hz of allocated BS compute
    double vehicle_budget = 5.0;   // G_i^max
    double bs_price_floor = 0.1;   // G_b^min

    void validate() const;
};

/// Everything fixed for one experiment; owned by the harness, shared by all
/// solvers so paired seeds see identical models.
struct ModelParams {
    ScenarioConfig scenario;
    ChannelParams channel;
    ComputeParams compute;
    GameParams game;
};

enum class Action { none, local, offload };

/// Joint per-slot strategy: offload choice, IRS phases, BS allocation.
struct SlotDecision {
    std::vector<Action> action;     // V
    std::vector<double> theta;      // K, in [0, 2*pi)
    std::vector<double> alloc_hz;   // V, f_{b,i}
};

struct Decision {
    std::vector<SlotDecision> slots;
};

/// Task completion revenue ln(c + deadline - delay). Throws on a
/// nonpositive argument: such a decision violates the deadline constraint
/// and must have been screened out by the caller.
double task_revenue(double deadline_s, double delay_s, double shift);

/// Vehicle-side cost, local branch.
double task_cost_local(double local_energy_j);

/// Vehicle-side cost, offload branch: total offload energy plus the unspent
/// budget (G_max - f * price), exactly as the utility model prescribes.
double task_cost_offload(double offload_energy_j, double alloc_hz, double unit_price,
                         double budget);

/// Vehicle utility. The offload branch charges transmission energy only; the
/// BS carries the computation energy in its own utility.
double vehicle_utility_local(double w, double revenue, double local_energy_j);
double vehicle_utility_offload(double w, double revenue, double transmission_energy_j,
                               double alloc_hz, double unit_price, double budget);

/// BS utility per served task: weighted fee margin minus computation energy.
double bs_utility(double w_bs, double alloc_hz, double unit_price, double price_floor,
                  double computation_energy_j);

double total_utility(double u_qoe, double u_revenue, double w_vehicle, double w_bs);

/// Nonnegative improvement reward: positive change or zero.
double reward(double utility, double previous_utility);

/// Immutable view of one slot: tasks plus realized channels plus parameters.
struct SlotContext {
    const ModelParams* params = nullptr;
    const std::vector<Task>* tasks = nullptr;
    const ChannelRealization* channel = nullptr;

    int num_vehicles() const { return static_cast<int>(tasks->size()); }
};

/// Outcome of one vehicle in one slot after executing a decision.
struct VehicleOutcome {
    bool task_present = false;
    Action action = Action::none;
    bool failed = false;          // task present but no action executed
    bool deadline_miss = false;   // executed action exceeded the deadline (14d)
    double delay_s = 0.0;         // failed tasks account their deadline here
    double local_energy_j = 0.0;
    double transmission_energy_j = 0.0;
    double computation_energy_j = 0.0;
    double fee = 0.0;             // f * price, paid to the BS when offloading
    double revenue = 0.0;
    double utility_vehicle = 0.0;
    double utility_bs = 0.0;
};

struct SlotEval {
    std::vector<VehicleOutcome> vehicles;
    double delay_s = 0.0;
    double energy_j = 0.0;
    double u_qoe = 0.0;
    double u_revenue = 0.0;
    double u_total = 0.0;
};

/// Executes a decision against one slot. Feasibility screening is the
/// caller's job; executed actions that miss their deadline are flagged.
SlotEval evaluate_slot(const SlotContext& ctx, const SlotDecision& decision);

/// Per-constraint feasibility report over a whole decision.
struct ConstraintReport {
    struct Item {
        std::string id;
        bool ok = true;
        std::vector<int> violations;  // flattened slot * V + vehicle (or K + k)
    };
    std::vector<Item> items;
    bool feasible = true;

    const Item* find(const std::string& id) const;
};

ConstraintReport check_constraints(const Decision& decision,
                                   const std::vector<SlotContext>& slots);

/// Follower best response for one slot: picks the candidate phase vector
/// maximizing the summed vehicle utilities, then per-vehicle actions by
/// utility argmax over deadline-feasible branches. Tasks with no feasible
/// branch are marked failed (action none).
struct FollowerResult {
    int theta_index = 0;
    std::vector<Action> actions;
};

FollowerResult follower_response(const SlotContext& ctx, const std::vector<double>& alloc_hz,
                                 const std::vector<std::vector<double>>& theta_candidates);

}  // namespace irsmec

#endif
