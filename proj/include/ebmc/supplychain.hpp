#pragma once

#include <utility>

#include "ebmc/env.hpp"

namespace ebmc {

// Single-factory, single-warehouse inventory control. Each period the agent
// picks how much to produce at the factory and how much to ship to the
// warehouse; Poisson demand is then served from the warehouse, with unmet
// demand lost. Reward is sales revenue minus production, storage, and
// transport costs. Episodes end only at the configured horizon.
struct SupplyChainSpec {
    double price = 0.5;             // revenue per item sold
    double production_cost = 0.1;   // per item produced
    double storage_cost = 0.02;     // per item held at either site, end of period
    double transport_cost = 0.1;    // per item shipped
    int produce_max = 10;           // production capacity per period
    int transport_limit = 10;       // shipping capacity per period
    int factory_capacity = 50;
    int warehouse_capacity = 50;
    double demand_rate = 2.5;       // Poisson rate; <= 0 disables demand
    double zeta = 5.0;              // carried from the source inventory model; unused here
    std::pair<int, int> initial{10, 0};  // factory stock, warehouse stock

    int num_states() const { return (factory_capacity + 1) * (warehouse_capacity + 1); }
    int num_actions() const { return (produce_max + 1) * (transport_limit + 1); }
};

void validate(const SupplyChainSpec& spec);

int supplychain_encode(const SupplyChainSpec& spec, int factory, int warehouse);
std::pair<int, int> supplychain_decode(const SupplyChainSpec& spec, int state);

// action decodes as (produce, ship) = (action / (limit+1), action % (limit+1))
std::pair<int, int> supplychain_decode_action(const SupplyChainSpec& spec, int action);

// Pure transition; consumes one Poisson draw when demand_rate > 0.
StepResult supplychain_step(const SupplyChainSpec& spec, int state, int action, Rng& rng);

class SupplyChain final : public Env {
public:
    explicit SupplyChain(SupplyChainSpec spec);

    int num_states() const override { return spec_.num_states(); }
    int num_actions() const override { return spec_.num_actions(); }
    int reset(Rng& rng) override;
    StepResult step(int action, Rng& rng) override;

    const SupplyChainSpec& spec() const { return spec_; }

private:
    SupplyChainSpec spec_;
    int state_ = 0;
};

}  // namespace ebmc
