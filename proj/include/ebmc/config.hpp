#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebmc/agent.hpp"
#include "ebmc/cartpole.hpp"
#include "ebmc/epsilon.hpp"
#include "ebmc/gridworld.hpp"
#include "ebmc/supplychain.hpp"

namespace ebmc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` store with dotted keys. Lines starting with '#' are
// comments. Typed accessors raise ConfigError naming the offending key, and
// keys never read back are reported as unknown so typos fail loudly.
class KeyValues {
public:
    static KeyValues parse_file(const std::filesystem::path& path);
    static KeyValues parse_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    std::int64_t get_int64(const std::string& key, std::int64_t fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;

    // keys present in the file but never consumed by any getter
    std::vector<std::string> unconsumed() const;

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;
};

enum class EnvKind { gridworld, cartpole, supplychain };

struct TestProtocol {
    enum class Kind { single_episode, averaged };
    Kind kind = Kind::single_episode;
    int trials = 10;
};

struct EarlyStop {
    int consecutive_perfect = 4;
    double target = 0.0;  // metric threshold; direction follows the env metric
};

struct SweepSpec {
    std::string key;
    std::vector<std::string> values;
};

struct ExperimentConfig {
    EnvKind env = EnvKind::gridworld;
    GridWorldSpec gridworld;
    CartPoleSpec cartpole;
    SupplyChainSpec supplychain;
    AgentConfig agent;
    ScheduleSpec strategy = ConstantSchedule{0.05};
    int episodes = 100;
    int runs = 1;
    int max_steps = 200;
    std::uint64_t base_seed = 0;
    TestProtocol test;
    std::optional<EarlyStop> early_stop;
    std::optional<SweepSpec> sweep;

    int env_num_actions() const;

    static ExperimentConfig load(const std::filesystem::path& path);
    static ExperimentConfig from_keyvalues(const KeyValues& kv);
};

}  // namespace ebmc
