#include "ebmc/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ebmc {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
    return v;
}

// "row,col" -> pair
std::pair<int, int> parse_cell(const std::string& key, const std::string& token) {
    const auto comma = token.find(',');
    if (comma == std::string::npos) {
        throw ConfigError(key + ": expected 'row,col', got '" + token + "'");
    }
    const int row = static_cast<int>(parse_int(key, trim(token.substr(0, comma))));
    const int col = static_cast<int>(parse_int(key, trim(token.substr(comma + 1))));
    return {row, col};
}

}  // namespace

KeyValues KeyValues::parse_string(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        kv.values_[key] = value;
    }
    return kv;
}

KeyValues KeyValues::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

void KeyValues::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool KeyValues::has(const std::string& key) const {
    consumed_.insert(key);
    return values_.count(key) > 0;
}

std::string KeyValues::get_string(const std::string& key) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key + ": required key is missing");
    return it->second;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_double(key, it->second);
}

int KeyValues::get_int(const std::string& key) const {
    return static_cast<int>(parse_int(key, get_string(key)));
}

int KeyValues::get_int(const std::string& key, int fallback) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : static_cast<int>(parse_int(key, it->second));
}

std::int64_t KeyValues::get_int64(const std::string& key, std::int64_t fallback) const {
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_int(key, it->second);
}

std::vector<std::string> KeyValues::get_list(const std::string& key) const {
    std::istringstream in(get_string(key));
    std::vector<std::string> out;
    std::string token;
    while (in >> token) out.push_back(token);
    return out;
}

std::vector<std::string> KeyValues::unconsumed() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_) {
        if (!consumed_.count(key)) out.push_back(key);
    }
    return out;
}

int ExperimentConfig::env_num_actions() const {
    switch (env) {
        case EnvKind::gridworld: return kGridWorldActions;
        case EnvKind::cartpole: return kCartPoleActions;
        case EnvKind::supplychain: return supplychain.num_actions();
    }
    return 0;
}

namespace {

EnvKind parse_env_kind(const std::string& name) {
    if (name == "gridworld") return EnvKind::gridworld;
    if (name == "cartpole") return EnvKind::cartpole;
    if (name == "supplychain") return EnvKind::supplychain;
    throw ConfigError("env: unknown environment '" + name + "'");
}

GridWorldSpec parse_gridworld(const KeyValues& kv) {
    GridWorldSpec spec;
    spec.width = kv.get_int("env.gridworld.width", spec.width);
    spec.height = kv.get_int("env.gridworld.height", spec.height);
    if (kv.has("env.gridworld.start")) {
        spec.start = parse_cell("env.gridworld.start", kv.get_string("env.gridworld.start"));
    }
    if (kv.has("env.gridworld.goal")) {
        spec.goal = parse_cell("env.gridworld.goal", kv.get_string("env.gridworld.goal"));
    }
    if (kv.has("env.gridworld.subgoals")) {
        spec.subgoals.clear();
        for (const auto& token : kv.get_list("env.gridworld.subgoals")) {
            spec.subgoals.push_back(parse_cell("env.gridworld.subgoals", token));
        }
    }
    spec.step_cost = kv.get_double("env.gridworld.step_cost", spec.step_cost);
    spec.invalid_cost = kv.get_double("env.gridworld.invalid_cost", spec.invalid_cost);
    try {
        validate(spec);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("env.gridworld: ") + e.what());
    }
    return spec;
}

CartPoleSpec parse_cartpole(const KeyValues& kv) {
    CartPoleSpec spec;
    spec.gravity = kv.get_double("env.cartpole.gravity", spec.gravity);
    spec.cart_mass = kv.get_double("env.cartpole.cart_mass", spec.cart_mass);
    spec.pole_mass = kv.get_double("env.cartpole.pole_mass", spec.pole_mass);
    spec.pole_half_length = kv.get_double("env.cartpole.pole_half_length", spec.pole_half_length);
    spec.force_mag = kv.get_double("env.cartpole.force_mag", spec.force_mag);
    spec.timestep = kv.get_double("env.cartpole.timestep", spec.timestep);
    spec.angle_threshold = kv.get_double("env.cartpole.angle_threshold", spec.angle_threshold);
    spec.position_threshold =
        kv.get_double("env.cartpole.position_threshold", spec.position_threshold);
    spec.velocity_clamp = kv.get_double("env.cartpole.velocity_clamp", spec.velocity_clamp);
    spec.angular_velocity_clamp =
        kv.get_double("env.cartpole.angular_velocity_clamp", spec.angular_velocity_clamp);
    spec.init_range = kv.get_double("env.cartpole.init_range", spec.init_range);
    if (kv.has("env.cartpole.bins")) {
        const auto tokens = kv.get_list("env.cartpole.bins");
        if (tokens.size() != 4) throw ConfigError("env.cartpole.bins: expected 4 bin counts");
        for (std::size_t i = 0; i < 4; ++i) {
            spec.bins[i] = static_cast<int>(parse_int("env.cartpole.bins", tokens[i]));
        }
    }
    try {
        validate(spec);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("env.cartpole: ") + e.what());
    }
    return spec;
}

SupplyChainSpec parse_supplychain(const KeyValues& kv) {
    SupplyChainSpec spec;
    spec.price = kv.get_double("env.supplychain.price", spec.price);
    spec.production_cost = kv.get_double("env.supplychain.production_cost", spec.production_cost);
    spec.storage_cost = kv.get_double("env.supplychain.storage_cost", spec.storage_cost);
    spec.transport_cost = kv.get_double("env.supplychain.transport_cost", spec.transport_cost);
    spec.produce_max = kv.get_int("env.supplychain.produce_max", spec.produce_max);
    spec.transport_limit = kv.get_int("env.supplychain.transport_limit", spec.transport_limit);
    spec.factory_capacity = kv.get_int("env.supplychain.factory_capacity", spec.factory_capacity);
    spec.warehouse_capacity =
        kv.get_int("env.supplychain.warehouse_capacity", spec.warehouse_capacity);
    spec.demand_rate = kv.get_double("env.supplychain.demand_rate", spec.demand_rate);
    spec.zeta = kv.get_double("env.supplychain.zeta", spec.zeta);
    if (kv.has("env.supplychain.initial")) {
        spec.initial =
            parse_cell("env.supplychain.initial", kv.get_string("env.supplychain.initial"));
    }
    try {
        validate(spec);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("env.supplychain: ") + e.what());
    }
    return spec;
}

AgentConfig parse_agent(const KeyValues& kv) {
    AgentConfig cfg;
    cfg.gamma = kv.get_double("agent.gamma", cfg.gamma);

    const std::string eta = kv.get_string("agent.eta", "0.7");
    if (eta == "geometric") {
        cfg.eta.init = kv.get_double("agent.eta.init", 0.5);
        cfg.eta.rho = kv.get_double("agent.eta.rho", 0.99);
        cfg.eta.floor = kv.get_double("agent.eta.floor", 0.01);
    } else {
        cfg.eta.init = parse_double("agent.eta", eta);
        cfg.eta.rho = 1.0;
        cfg.eta.floor = 0.0;
    }

    const std::string bootstrap = kv.get_string("agent.bootstrap", "expected_sarsa");
    if (bootstrap == "expected_sarsa") {
        cfg.bootstrap = Bootstrap::expected_sarsa;
    } else if (bootstrap == "q_learning") {
        cfg.bootstrap = Bootstrap::q_learning;
    } else if (bootstrap == "sarsa") {
        cfg.bootstrap = Bootstrap::sarsa;
    } else {
        throw ConfigError("agent.bootstrap: unknown variant '" + bootstrap + "'");
    }

    const std::string init = kv.get_string("agent.q_init", "zeros");
    if (init == "zeros") {
        cfg.q_init = QInit{0.0, 0.0};
    } else if (init == "uniform") {
        cfg.q_init.lo = kv.get_double("agent.q_init.lo", 0.0);
        cfg.q_init.hi = kv.get_double("agent.q_init.hi", 0.1);
    } else {
        throw ConfigError("agent.q_init: expected 'zeros' or 'uniform', got '" + init + "'");
    }

    try {
        validate(cfg);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("agent: ") + e.what());
    }
    return cfg;
}

ScheduleSpec parse_strategy(const KeyValues& kv, int num_actions) {
    const std::string kind = kv.get_string("strategy");

    // Read every known strategy key so that parameters of a non-selected
    // strategy (left behind by an override or a sweep) are not flagged as
    // unknown. Only the selected strategy's values are used.
    const double constant_c = kv.get_double("strategy.constant.c", 0.05);
    const double geometric_rho = kv.get_double("strategy.geometric.rho", 0.99);
    const double power_beta = kv.get_double("strategy.power.beta", 1.0);
    VdbeSpec vdbe;
    vdbe.sigma = kv.get_double("strategy.vdbe.sigma", 1.0);
    vdbe.delta = kv.get_double("strategy.vdbe.delta", 1.0 / num_actions);
    vdbe.eps0 = kv.get_double("strategy.vdbe.eps0", 0.5);
    BmcSpec bmc;
    bmc.prior.mu0 = kv.get_double("strategy.bmc.mu0", 0.0);
    bmc.prior.tau0 = kv.get_double("strategy.bmc.tau0", 1.0);
    bmc.prior.a0 = kv.get_double("strategy.bmc.a0", 500.0);
    bmc.prior.b0 = kv.get_double("strategy.bmc.b0", 500.0);
    bmc.alpha0 = kv.get_double("strategy.bmc.alpha0", 1.0);
    bmc.beta0 = kv.get_double("strategy.bmc.beta0", 1.01);
    bmc.eps_min = kv.get_double("strategy.bmc.eps_min", 0.0);

    ScheduleSpec spec;
    if (kind == "constant") {
        spec = ConstantSchedule{constant_c};
    } else if (kind == "geometric") {
        spec = GeometricSchedule{geometric_rho};
    } else if (kind == "power") {
        spec = PowerSchedule{power_beta};
    } else if (kind == "vdbe") {
        spec = vdbe;
    } else if (kind == "bmc") {
        spec = bmc;
    } else {
        throw ConfigError("strategy: unknown strategy '" + kind + "'");
    }
    try {
        validate(spec);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("strategy.") + kind + ": " + e.what());
    }
    return spec;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_keyvalues(const KeyValues& kv) {
    ExperimentConfig cfg;
    cfg.env = parse_env_kind(kv.get_string("env"));
    cfg.gridworld = parse_gridworld(kv);
    cfg.cartpole = parse_cartpole(kv);
    cfg.supplychain = parse_supplychain(kv);
    cfg.agent = parse_agent(kv);
    cfg.strategy = parse_strategy(kv, cfg.env_num_actions());

    cfg.episodes = kv.get_int("episodes");
    cfg.runs = kv.get_int("runs");
    cfg.max_steps = kv.get_int("max_steps", 200);
    cfg.base_seed = static_cast<std::uint64_t>(kv.get_int64("base_seed", 0));
    if (cfg.episodes < 1) throw ConfigError("episodes: must be >= 1");
    if (cfg.runs < 1) throw ConfigError("runs: must be >= 1");
    if (cfg.max_steps < 1) throw ConfigError("max_steps: must be >= 1");

    const std::string protocol = kv.get_string("test.protocol", "single");
    if (protocol == "single") {
        cfg.test.kind = TestProtocol::Kind::single_episode;
    } else if (protocol == "averaged") {
        cfg.test.kind = TestProtocol::Kind::averaged;
        cfg.test.trials = kv.get_int("test.trials", 10);
        if (cfg.test.trials < 1) throw ConfigError("test.trials: must be >= 1");
    } else {
        throw ConfigError("test.protocol: expected 'single' or 'averaged', got '" + protocol +
                          "'");
    }

    if (kv.has("early_stop.consecutive_perfect")) {
        EarlyStop stop;
        stop.consecutive_perfect = kv.get_int("early_stop.consecutive_perfect");
        stop.target = kv.get_double("early_stop.target");
        if (stop.consecutive_perfect < 1) {
            throw ConfigError("early_stop.consecutive_perfect: must be >= 1");
        }
        cfg.early_stop = stop;
    }

    if (kv.has("sweep.key")) {
        SweepSpec sweep;
        sweep.key = kv.get_string("sweep.key");
        sweep.values = kv.get_list("sweep.values");
        if (sweep.values.empty()) throw ConfigError("sweep.values: must be non-empty");
        cfg.sweep = sweep;
    }

    const auto unknown = kv.unconsumed();
    if (!unknown.empty()) {
        throw ConfigError("unknown config key: " + unknown.front());
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    return from_keyvalues(KeyValues::parse_file(path));
}

}  // namespace ebmc
