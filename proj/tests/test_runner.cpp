#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rfso/runner.hpp"

using namespace rfso;

namespace {

std::string sample_config_text() {
    return "# example scenario\n"
           "[rf]\n"
           "alpha = 2\n"
           "kappa = 1\n"
           "mu = 1\n"
           "x_shadow = 100\n"
           "phi_r_db = 10\n"
           "[fso_d]\n"
           "a = 4.2\n"
           "b = 3\n"
           "eps = 1.1\n"
           "s = 1\n"
           "r_scatter = 0.1\n"
           "zeta_t = 1\n"
           "u_db = 15\n"
           "[fso_e]\n"
           "a = 4.2\n"
           "b = 3\n"
           "eps = 1.1\n"
           "s = 1\n"
           "r_scatter = 0.1\n"
           "zeta_t = 1\n"
           "u_db = -5\n"
           "[secrecy]\n"
           "target_rate = 0.5\n"
           "[mc]\n"
           "trials = 2000\n"
           "seed = 11\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("config parsing") {
    RunnerConfig cfg = parse_config_text(sample_config_text());
    CHECK(cfg.scenario.rf.x_shadow == 100.0);
    CHECK(cfg.scenario.rf.phi_r == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(cfg.scenario.fso_d.u_elec ==
          doctest::Approx(std::pow(10.0, 1.5)).epsilon(1e-15));
    CHECK(cfg.scenario.fso_e.u_elec ==
          doctest::Approx(std::pow(10.0, -0.5)).epsilon(1e-15));
    CHECK(cfg.mc.n_trials == 2000);
    CHECK(cfg.mc.seed == 11);
}

TEST_CASE("parse errors carry line information") {
    CHECK_THROWS_WITH_AS(parse_config_text("[rf]\nbogus_key = 1\n"),
                         doctest::Contains("line 2"), config_error);
    CHECK_THROWS_WITH_AS(parse_config_text("[nope]\n"), doctest::Contains("unknown section"),
                         config_error);
    CHECK_THROWS_WITH_AS(parse_config_text("[rf]\nalpha == 2\n"),
                         doctest::Contains("cannot parse"), config_error);
    CHECK_THROWS_WITH_AS(parse_config_text("[rf\n"), doctest::Contains("unterminated"),
                         config_error);
    CHECK_THROWS_WITH_AS(parse_config_text("[rf]\nalpha = 2\n"),
                         doctest::Contains("missing required"), config_error);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/path.cfg"), config_error);
}

TEST_CASE("serialization round-trips through the parser") {
    RunnerConfig cfg = parse_config_text(sample_config_text());
    RunnerConfig back = parse_config_text(serialize_config(cfg));
    CHECK(back.scenario.rf.phi_r == doctest::Approx(cfg.scenario.rf.phi_r).epsilon(1e-14));
    CHECK(back.scenario.fso_d.u_elec ==
          doctest::Approx(cfg.scenario.fso_d.u_elec).epsilon(1e-14));
    CHECK(back.scenario.target_rate == cfg.scenario.target_rate);
    CHECK(back.mc.seed == cfg.mc.seed);
    // a second pass is a textual fixed point
    CHECK(serialize_config(back) == serialize_config(parse_config_text(serialize_config(back))));
}

TEST_CASE("preset catalog") {
    int figs = 0;
    for (const Preset& p : presets())
        if (p.name.rfind("fig", 0) == 0) ++figs;
    CHECK(figs >= 12);
    const Preset* nak = find_preset("table1-nakagami");
    REQUIRE(nak != nullptr);
    CHECK(nak->config.scenario.rf.alpha == 2.0);
    CHECK(nak->config.scenario.rf.kappa == 0.0);
    CHECK(nak->config.scenario.rf.mu == 2);
    const Preset* rgg = find_preset("table3-rayleigh-gg");
    REQUIRE(rgg != nullptr);
    CHECK(rgg->config.scenario.rf.mu == 1);
    CHECK(rgg->config.scenario.fso_d.r_scatter == 0.0);
    CHECK(rgg->config.scenario.fso_d.zeta_t == 1.0);
    CHECK(rgg->config.scenario.fso_d.b == 2);
    CHECK(find_preset("fig999") == nullptr);

    for (const Preset& p : presets()) {
        CAPTURE(p.name);
        RunnerConfig back = parse_config_text(serialize_config(p.config));
        CHECK(back.scenario.rf.phi_r ==
              doctest::Approx(p.config.scenario.rf.phi_r).epsilon(1e-14));
        CHECK(back.scenario.fso_d.u_elec ==
              doctest::Approx(p.config.scenario.fso_d.u_elec).epsilon(1e-14));
        CHECK(back.scenario.fso_e.b == p.config.scenario.fso_e.b);
        CHECK_NOTHROW(p.default_sweep.validate());
    }
}

TEST_CASE("sweep validation") {
    SweepSpec s;
    s.variable = SweepVar::phi_r_db;
    s.methods = method_flag::kClosed;
    CHECK_THROWS_AS(s.validate(), config_error); // empty grid
    s.grid = {0.0, 1.0, 1.0};
    CHECK_THROWS_AS(s.validate(), config_error); // not strictly increasing
    s.grid = {0.0, 1.0, 2.0};
    CHECK_NOTHROW(s.validate());
    s.methods = 0;
    CHECK_THROWS_AS(s.validate(), config_error); // no methods
    s.methods = method_flag::kClosed;
    s.variable = SweepVar::mu;
    s.grid = {1.0, 1.5};
    CHECK_THROWS_AS(s.validate(), config_error); // integral variable
    CHECK(parse_methods("closed,mc") ==
          (method_flag::kClosed | method_flag::kMonteCarlo));
    CHECK(parse_methods("asym,quad") ==
          (method_flag::kAsymptotic | method_flag::kQuadrature));
    CHECK_THROWS_AS(parse_methods("nope"), config_error);
    CHECK_THROWS_AS(sweep_var_from_name("nope"), config_error);
}

TEST_CASE("sweep application converts dB exactly once") {
    ScenarioConfig sc = parse_config_text(sample_config_text()).scenario;
    apply_sweep_value(sc, SweepVar::phi_r_db, 20.0);
    CHECK(sc.rf.phi_r == doctest::Approx(100.0).epsilon(1e-15));
    apply_sweep_value(sc, SweepVar::eps, 6.7);
    CHECK(sc.fso_d.eps == 6.7);
    CHECK(sc.fso_e.eps == 6.7);
    apply_sweep_value(sc, SweepVar::b, 2.0);
    CHECK(sc.fso_d.b == 2);
    CHECK(sc.fso_e.b == 2);
}

TEST_CASE("runs are deterministic and write the pinned header") {
    RunnerConfig cfg = parse_config_text(sample_config_text());
    SweepSpec sweep{SweepVar::phi_r_db, {0.0, 10.0, 20.0},
                    method_flag::kClosed | method_flag::kMonteCarlo};
    CHECK(run_scenario(cfg, sweep, "/tmp/rfso_test_a.csv") == 0);
    CHECK(run_scenario(cfg, sweep, "/tmp/rfso_test_b.csv") == 0);
    std::string a = read_file("/tmp/rfso_test_a.csv");
    std::string b = read_file("/tmp/rfso_test_b.csv");
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) ==
          "sweep_var,sweep_value,sop_closed,sop_asym,sop_quad,sop_mc,sop_mc_se,"
          "spsc_closed,spsc_asym,spsc_mc,spsc_mc_se,ip_closed,ip_asym,ip_mc,ip_mc_se,note");
    // 3 grid rows + header
    CHECK(std::count(a.begin(), a.end(), '\n') == 4);
    // unrequested columns stay empty: sop_asym is the third field
    std::string row = a.substr(a.find('\n') + 1);
    std::size_t p1 = row.find(',');
    std::size_t p2 = row.find(',', p1 + 1);
    std::size_t p3 = row.find(',', p2 + 1);
    CHECK(p3 - p2 > 1);                    // sop_closed filled
    CHECK(row[p3 + 1] == ',');             // sop_asym empty
    std::remove("/tmp/rfso_test_a.csv");
    std::remove("/tmp/rfso_test_b.csv");
}

TEST_CASE("failed grid points leave a note and set the exit status") {
    RunnerConfig cfg = parse_config_text(sample_config_text());
    cfg.scenario.rf.x_shadow = 0.01;
    cfg.scenario.rf.mu = 5;
    // kappa sweep into the region where the series cap cannot be met
    SweepSpec sweep{SweepVar::kappa, {50.0, 100.0}, method_flag::kClosed};
    int rc = run_scenario(cfg, sweep, "/tmp/rfso_test_fail.csv");
    CHECK(rc == 2);
    std::string body = read_file("/tmp/rfso_test_fail.csv");
    CHECK(body.find("series") != std::string::npos); // note mentions the failure
    std::remove("/tmp/rfso_test_fail.csv");
}
