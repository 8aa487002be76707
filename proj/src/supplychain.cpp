#include "ebmc/supplychain.hpp"

#include <algorithm>
#include <stdexcept>

namespace ebmc {

void validate(const SupplyChainSpec& spec) {
    if (spec.produce_max < 0 || spec.transport_limit < 0) {
        throw std::invalid_argument("supplychain: capacities must be >= 0");
    }
    if (spec.factory_capacity < 0 || spec.warehouse_capacity < 0) {
        throw std::invalid_argument("supplychain: storage capacities must be >= 0");
    }
    if (spec.initial.first < 0 || spec.initial.first > spec.factory_capacity ||
        spec.initial.second < 0 || spec.initial.second > spec.warehouse_capacity) {
        throw std::invalid_argument("supplychain: initial stocks out of capacity range");
    }
}

int supplychain_encode(const SupplyChainSpec& spec, int factory, int warehouse) {
    return factory * (spec.warehouse_capacity + 1) + warehouse;
}

std::pair<int, int> supplychain_decode(const SupplyChainSpec& spec, int state) {
    const int w = state % (spec.warehouse_capacity + 1);
    return {state / (spec.warehouse_capacity + 1), w};
}

std::pair<int, int> supplychain_decode_action(const SupplyChainSpec& spec, int action) {
    const int ship = action % (spec.transport_limit + 1);
    return {action / (spec.transport_limit + 1), ship};
}

StepResult supplychain_step(const SupplyChainSpec& spec, int state, int action, Rng& rng) {
    if (action < 0 || action >= spec.num_actions()) {
        throw std::invalid_argument("supplychain_step: action out of range");
    }
    auto [factory, warehouse] = supplychain_decode(spec, state);
    auto [produce_req, ship_req] = supplychain_decode_action(spec, action);

    const int produced =
        std::min({produce_req, spec.produce_max, spec.factory_capacity - factory});
    factory += produced;

    const int shipped = std::min({ship_req, factory, spec.transport_limit,
                                  spec.warehouse_capacity - warehouse});
    factory -= shipped;
    warehouse += shipped;

    const int demand = rng.poisson(spec.demand_rate);
    const int sales = std::min(warehouse, demand);
    warehouse -= sales;

    const double reward = spec.price * sales - spec.production_cost * produced -
                          spec.storage_cost * (factory + warehouse) -
                          spec.transport_cost * shipped;
    return StepResult{supplychain_encode(spec, factory, warehouse), reward, false};
}

SupplyChain::SupplyChain(SupplyChainSpec spec) : spec_(spec) {
    validate(spec_);
    state_ = supplychain_encode(spec_, spec_.initial.first, spec_.initial.second);
}

int SupplyChain::reset(Rng&) {
    state_ = supplychain_encode(spec_, spec_.initial.first, spec_.initial.second);
    return state_;
}

StepResult SupplyChain::step(int action, Rng& rng) {
    const StepResult r = supplychain_step(spec_, state_, action, rng);
    state_ = r.state;
    return r;
}

}  // namespace ebmc
