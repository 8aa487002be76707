#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ebmc/cli.hpp"
#include "ebmc/csv.hpp"
#include "ebmc/experiment.hpp"
#include "ebmc/gridworld.hpp"
#include "ebmc/svg_plot.hpp"

using namespace ebmc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("ebmc_test_" + tag + "_" +
                                            std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<MetricsRecord> parse_records_csv(const std::string& text) {
    std::vector<MetricsRecord> out;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        REQUIRE(f.size() == 6);
        out.push_back(MetricsRecord{std::stoi(f[0]), std::stoi(f[1]), std::stod(f[2]),
                                    std::stoi(f[3]), std::stod(f[4]), std::stod(f[5])});
    }
    return out;
}

ExperimentConfig tiny_gridworld_config(const std::string& strategy_lines) {
    const std::string text = R"(
env = gridworld
agent.gamma = 0.99
agent.eta = 0.7
agent.q_init = uniform
agent.q_init.hi = 0.1
episodes = 12
runs = 6
base_seed = 42
)" + strategy_lines;
    return ExperimentConfig::from_keyvalues(KeyValues::parse_string(text));
}

int run_cli_args(std::vector<std::string> args) {
    std::vector<const char*> argv;
    argv.push_back("ebmc");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

// ---------------------------------------------------------------------------
// aggregation

TEST_CASE("aggregate: single run has zero standard error") {
    std::vector<MetricsRecord> recs{{0, 0, -1.0, 10, 17.5, 0.5}};
    const AggregateCurve c = aggregate(recs);
    REQUIRE(c.size() == 1);
    CHECK(c.mean[0] == 17.5);
    CHECK(c.std_error[0] == 0.0);
    CHECK(c.count[0] == 1);
}

TEST_CASE("aggregate: two runs worked example") {
    std::vector<MetricsRecord> recs{
        {0, 0, 0.0, 1, 10.0, 0.1},
        {1, 0, 0.0, 1, 20.0, 0.1},
    };
    const AggregateCurve c = aggregate(recs);
    CHECK(c.mean[0] == 15.0);
    CHECK(c.std_error[0] == doctest::Approx(5.0).epsilon(1e-15));  // sqrt(50)/sqrt(2)
    CHECK(c.count[0] == 2);
}

TEST_CASE("aggregate: constant metric across runs has zero spread") {
    std::vector<MetricsRecord> recs;
    for (int run = 0; run < 7; ++run) recs.push_back({run, 0, 0.0, 1, 3.25, 0.0});
    const AggregateCurve c = aggregate(recs);
    CHECK(c.mean[0] == 3.25);
    CHECK(c.std_error[0] == 0.0);
}

TEST_CASE("aggregate: matches an independent two-pass computation") {
    Rng rng(90);
    std::vector<MetricsRecord> recs;
    const int runs = 9;
    const int episodes = 23;
    std::vector<std::vector<double>> metric(runs, std::vector<double>(episodes));
    for (int run = 0; run < runs; ++run) {
        for (int ep = 0; ep < episodes; ++ep) {
            metric[static_cast<std::size_t>(run)][static_cast<std::size_t>(ep)] =
                rng.uniform(-100.0, 100.0);
            recs.push_back({run, ep, 0.0, 1,
                            metric[static_cast<std::size_t>(run)][static_cast<std::size_t>(ep)],
                            0.0});
        }
    }
    const AggregateCurve c = aggregate(recs);
    REQUIRE(c.size() == static_cast<std::size_t>(episodes));
    for (int ep = 0; ep < episodes; ++ep) {
        double mean = 0.0;
        for (int run = 0; run < runs; ++run) mean += metric[run][ep];
        mean /= runs;
        double var = 0.0;
        for (int run = 0; run < runs; ++run) {
            var += (metric[run][ep] - mean) * (metric[run][ep] - mean);
        }
        var /= (runs - 1);
        const double se = std::sqrt(var) / std::sqrt(static_cast<double>(runs));
        CHECK(std::abs(c.mean[static_cast<std::size_t>(ep)] - mean) <= 1e-12);
        CHECK(std::abs(c.std_error[static_cast<std::size_t>(ep)] - se) <= 1e-12);
    }
}

TEST_CASE("aggregate: early-stopped runs carry their last metric forward") {
    std::vector<MetricsRecord> recs{
        {0, 0, 0.0, 1, 10.0, 0.0},
        {0, 1, 0.0, 1, 12.0, 0.0},
        {0, 2, 0.0, 1, 14.0, 0.0},
        {1, 0, 0.0, 1, 20.0, 0.0},  // run 1 stopped after episode 0
    };
    const AggregateCurve c = aggregate(recs);
    REQUIRE(c.size() == 3);
    CHECK(c.mean[1] == doctest::Approx((12.0 + 20.0) / 2.0));
    CHECK(c.mean[2] == doctest::Approx((14.0 + 20.0) / 2.0));
    CHECK(c.count[2] == 2);
}

// ---------------------------------------------------------------------------
// csv

TEST_CASE("csv: empty record list writes only the header") {
    CHECK(records_to_csv({}) == "run,episode,train_return,train_steps,test_metric,epsilon\n");
}

TEST_CASE("csv: write-then-read reproduces exact doubles") {
    Rng rng(91);
    std::vector<MetricsRecord> recs;
    for (int i = 0; i < 100; ++i) {
        recs.push_back({i % 4, i / 4, rng.uniform(-1e6, 1e6), rng.uniform_int(200),
                        rng.uniform(-1e3, 1e3), rng.uniform01()});
    }
    const auto parsed = parse_records_csv(records_to_csv(recs));
    REQUIRE(parsed.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) CHECK(parsed[i] == recs[i]);
}

TEST_CASE("csv: golden fixture is byte-exact") {
    const std::vector<MetricsRecord> recs{
        {0, 0, -1.5, 10, 12.0, 0.5},
        {0, 1, -0.30000000000000004, 3, 10.0, 0.25},
        {1, 0, 2.0, 5, 0.1, 0.0125},
    };
    const std::string golden = read_file(fs::path(EBMC_GOLDEN_DIR) / "records_golden.csv");
    CHECK(records_to_csv(recs) == golden);
}

TEST_CASE("csv: curve schema") {
    AggregateCurve c;
    c.mean = {1.5, 2.5};
    c.std_error = {0.25, 0.0};
    c.count = {4, 4};
    CHECK(curve_to_csv(c) == "episode,mean,stderr,n\n0,1.5,0.25,4\n1,2.5,0,4\n");
}

// ---------------------------------------------------------------------------
// svg

TEST_CASE("svg: single flat curve produces exactly one polyline") {
    AggregateCurve c;
    c.mean = {1.0, 1.0, 1.0};
    c.std_error = {0.0, 0.0, 0.0};
    c.count = {1, 1, 1};
    const std::string svg = render_plot_svg(std::vector<NamedCurve>{{"flat", c}});
    std::size_t count = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
         pos = svg.find("<polyline", pos + 1)) {
        ++count;
    }
    CHECK(count == 1);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("flat") != std::string::npos);
}

TEST_CASE("svg: identical input renders identical bytes") {
    AggregateCurve c;
    Rng rng(92);
    for (int i = 0; i < 40; ++i) {
        c.mean.push_back(rng.uniform(-5.0, 5.0));
        c.std_error.push_back(rng.uniform01());
        c.count.push_back(3);
    }
    const std::vector<NamedCurve> curves{{"a", c}, {"b", c}};
    CHECK(render_plot_svg(curves) == render_plot_svg(curves));
}

TEST_CASE("svg: band vertices sit at mean plus/minus stderr") {
    AggregateCurve c;
    c.mean = {2.0, 4.0, 3.0, 5.0};
    c.std_error = {0.5, 1.0, 0.25, 0.0};
    c.count = {5, 5, 5, 5};
    const std::vector<NamedCurve> curves{{"x", c}};
    const std::string svg = render_plot_svg(curves);
    const PlotGeometry g = PlotGeometry::for_curves(curves);

    const auto start = svg.find("<polygon points=\"");
    REQUIRE(start != std::string::npos);
    const auto open = start + std::string("<polygon points=\"").size();
    const auto close = svg.find('"', open);
    std::istringstream pts(svg.substr(open, close - open));
    std::vector<std::pair<double, double>> vertices;
    std::string token;
    while (pts >> token) {
        const auto comma = token.find(',');
        vertices.emplace_back(std::stod(token.substr(0, comma)),
                              std::stod(token.substr(comma + 1)));
    }
    REQUIRE(vertices.size() == 8);  // forward upper edge + reversed lower edge
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(vertices[i].first == doctest::Approx(g.map_x(static_cast<double>(i))).epsilon(1e-3));
        CHECK(vertices[i].second ==
              doctest::Approx(g.map_y(c.mean[i] + c.std_error[i])).epsilon(1e-3));
        const auto& lower = vertices[7 - i];
        CHECK(lower.second == doctest::Approx(g.map_y(c.mean[i] - c.std_error[i])).epsilon(1e-3));
    }
}

TEST_CASE("svg: mismatched curve lengths are rejected") {
    AggregateCurve a;
    a.mean = {1.0, 2.0};
    a.std_error = {0.0, 0.0};
    a.count = {1, 1};
    AggregateCurve b;
    b.mean = {1.0};
    b.std_error = {0.0};
    b.count = {1};
    const std::vector<NamedCurve> curves{{"a", a}, {"b", b}};
    CHECK_THROWS_AS(render_plot_svg(curves), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// config

TEST_CASE("config: full round trip of a valid file") {
    const ExperimentConfig cfg =
        ExperimentConfig::load(fs::path(EBMC_CONFIG_DIR) / "gridworld_bmc.cfg");
    CHECK(cfg.env == EnvKind::gridworld);
    CHECK(cfg.episodes == 300);
    CHECK(cfg.runs == 20);
    CHECK(cfg.max_steps == 200);
    CHECK(cfg.agent.gamma == 0.99);
    CHECK(cfg.agent.eta.at(0) == 0.7);
    CHECK(cfg.agent.q_init.hi == 0.1);
    const auto* bmc = std::get_if<BmcSpec>(&cfg.strategy);
    REQUIRE(bmc != nullptr);
    CHECK(bmc->alpha0 == 1.0);
    CHECK(bmc->beta0 == 1.01);
    CHECK(bmc->prior.a0 == 500.0);
    CHECK(cfg.test.kind == TestProtocol::Kind::single_episode);
}

TEST_CASE("config: vdbe delta defaults to one over the action count") {
    const ExperimentConfig cfg = ExperimentConfig::from_keyvalues(KeyValues::parse_string(R"(
env = supplychain
strategy = vdbe
strategy.vdbe.sigma = 1.0
episodes = 1
runs = 1
)"));
    const auto* v = std::get_if<VdbeSpec>(&cfg.strategy);
    REQUIRE(v != nullptr);
    CHECK(v->delta == doctest::Approx(1.0 / 121.0).epsilon(1e-15));
}

TEST_CASE("config: errors name the offending field") {
    auto parse = [](const std::string& text) {
        return ExperimentConfig::from_keyvalues(KeyValues::parse_string(text));
    };

    CHECK_THROWS_WITH_AS(parse("strategy = bmc\nepisodes = 1\nruns = 1\n"),
                         doctest::Contains("env"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("env = gridworld\nstrategy = bmc\nruns = 1\nepisodes = oops\n"),
                         doctest::Contains("episodes"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse("env = gridworld\nstrategy = bmc\nepisodes = 1\nruns = 1\nagent.gamma = 2\n"),
        doctest::Contains("gamma"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse("env = gridworld\nstrategy = bmc\nepisodes = 1\nruns = 1\n"
              "strategy.bmc.alpha0 = -3\n"),
        doctest::Contains("strategy.bmc"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse("env = gridworld\nstrategy = bmc\nepisodes = 1\nruns = 1\ntypo.key = 1\n"),
        doctest::Contains("typo.key"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse("env = gridworld\nstrategy = bmc\nepisodes = 1\nruns = 1\n"
              "env.gridworld.subgoals = 9,9\n"),
        doctest::Contains("gridworld"), ConfigError);
}

// ---------------------------------------------------------------------------
// run_experiment

TEST_CASE("run_experiment: output independent of parallelism degree") {
    const ExperimentConfig cfg = tiny_gridworld_config("strategy = bmc\n");
    const auto serial = run_experiment(cfg, 1);
    const auto parallel = run_experiment(cfg, 8);
    REQUIRE(serial.size() == parallel.size());
    CHECK(serial == parallel);
    CHECK(records_to_csv(serial) == records_to_csv(parallel));
}

TEST_CASE("run_experiment: one episode produces one finite record per run") {
    ExperimentConfig cfg = tiny_gridworld_config("strategy = constant\nstrategy.constant.c = 0.05\n");
    cfg.episodes = 1;
    cfg.runs = 2;
    const auto records = run_experiment(cfg, 1);
    REQUIRE(records.size() == 2);
    for (const auto& r : records) {
        CHECK(std::isfinite(r.train_return));
        CHECK(r.train_steps >= 1);
        CHECK(std::isfinite(r.test_metric));
        CHECK(r.epsilon == 0.05);
        CHECK(r.episode == 0);
    }
    CHECK(records[0].run == 0);
    CHECK(records[1].run == 1);
}

TEST_CASE("run_experiment: bmc epsilon column never increases within a run") {
    const ExperimentConfig cfg = tiny_gridworld_config("strategy = bmc\n");
    const auto records = run_experiment(cfg, 4);
    std::vector<double> last(static_cast<std::size_t>(cfg.runs), 1.0);
    for (const auto& r : records) {
        CHECK(r.epsilon <= last[static_cast<std::size_t>(r.run)] + 1e-12);
        last[static_cast<std::size_t>(r.run)] = r.epsilon;
    }
}

TEST_CASE("run_experiment: early stop truncates runs and aggregation stays aligned") {
    ExperimentConfig cfg = tiny_gridworld_config("strategy = constant\nstrategy.constant.c = 0.1\n");
    cfg.episodes = 50;
    cfg.runs = 3;
    // steps-to-goal is never above max_steps, so this is always "perfect":
    // every run must stop after exactly 4 episodes
    cfg.early_stop = EarlyStop{4, static_cast<double>(cfg.max_steps)};
    const auto records = run_experiment(cfg, 1);
    CHECK(records.size() == 12);
    const AggregateCurve curve = aggregate(records);
    CHECK(curve.size() == 4);
    CHECK(curve.count.back() == 3);
}

// ---------------------------------------------------------------------------
// cli

TEST_CASE("cli: run writes records, curve, and plot") {
    TempDir tmp("cli_run");
    const std::string config = (fs::path(EBMC_CONFIG_DIR) / "gridworld_small.cfg").string();
    const std::string out = (tmp.path / "exp").string();
    CHECK(run_cli_args({"run", config, "--out", out, "--parallelism", "4"}) == 0);
    CHECK(fs::exists(tmp.path / "exp" / "records.csv"));
    CHECK(fs::exists(tmp.path / "exp" / "curve.csv"));
    CHECK(fs::exists(tmp.path / "exp" / "curve.svg"));

    const auto records = parse_records_csv(read_file(tmp.path / "exp" / "records.csv"));
    CHECK(records.size() == 8 * 30);
}

TEST_CASE("cli: seed override changes the records") {
    TempDir tmp("cli_seed");
    const std::string config = (fs::path(EBMC_CONFIG_DIR) / "gridworld_small.cfg").string();
    CHECK(run_cli_args({"run", config, "--out", (tmp.path / "a").string()}) == 0);
    CHECK(run_cli_args({"run", config, "--out", (tmp.path / "b").string(), "--seed", "99"}) == 0);
    CHECK(read_file(tmp.path / "a" / "records.csv") !=
          read_file(tmp.path / "b" / "records.csv"));
}

TEST_CASE("cli: sweep expands the declared grid") {
    TempDir tmp("cli_sweep");
    const std::string config =
        (fs::path(EBMC_CONFIG_DIR) / "gridworld_geometric_sweep.cfg").string();
    const std::string out = (tmp.path / "sweep").string();
    CHECK(run_cli_args({"sweep", config, "--out", out, "--parallelism", "4"}) == 0);
    std::size_t dirs = 0;
    for (const auto& entry : fs::directory_iterator(tmp.path / "sweep")) {
        CHECK(entry.is_directory());
        CHECK(fs::exists(entry.path() / "records.csv"));
        ++dirs;
    }
    CHECK(dirs == 5);
}

TEST_CASE("cli: gridworld oracle runs and malformed configs fail loudly") {
    const std::string config = (fs::path(EBMC_CONFIG_DIR) / "gridworld_bmc.cfg").string();
    CHECK(run_cli_args({"oracle", "gridworld", config}) == 0);

    TempDir tmp("cli_bad");
    const fs::path bad = tmp.path / "bad.cfg";
    std::ofstream(bad) << "env = gridworld\nstrategy = bmc\nepisodes = 1\nruns = nope\n";
    CHECK(run_cli_args({"run", bad.string(), "--out", (tmp.path / "out").string()}) != 0);
    CHECK(run_cli_args({"run", (tmp.path / "missing.cfg").string(), "--out",
                        (tmp.path / "out").string()}) != 0);
}
