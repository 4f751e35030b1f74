// Tests for config parsing, experiment defaults, truncation sizing, the
// canonical hash, and the deterministic file formats.
#include <doctest.h>

#include <qrsim/config.hpp>
#include <qrsim/io.hpp>

#include "test_helpers.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <unistd.h>

using namespace qrsim;
using namespace qrsim::test;
namespace fs = std::filesystem;

namespace {

std::string catch_config_error(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path tmp_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() /
                     ("qrsim_io_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string tmp_file(const std::string& name) { return (tmp_dir() / name).string(); }

}  // namespace

TEST_SUITE("config_io") {

TEST_CASE("config text parsing") {
    std::string text =
        "# leading comment\n"
        "[physics]\n"
        "g = 1.95\n"
        "; another comment style\n"
        "t1_res = 3.5\n"
        "\n"
        "[plan]\n"
        "order=1\n"
        "bare = 7\n";
    ConfigKv kv = parse_config_text(text);
    CHECK(kv.at("physics.g") == "1.95");
    CHECK(kv.at("physics.t1_res") == "3.5");
    CHECK(kv.at("plan.order") == "1");
    CHECK(kv.at("plan.bare") == "7");

    std::string dup = "[a]\nx = 1\nx = 2\n";
    std::string msg = catch_config_error([&] { parse_config_text(dup, "dup.cfg"); });
    CHECK(msg.find("dup.cfg:3") != std::string::npos);
    CHECK(msg.find("duplicate key 'a.x'") != std::string::npos);

    msg = catch_config_error([&] { parse_config_text("[oops\nx = 1\n"); });
    CHECK(msg.find("malformed section") != std::string::npos);
    msg = catch_config_error([&] { parse_config_text("just words\n"); });
    CHECK(msg.find("key = value") != std::string::npos);
    msg = catch_config_error([&] { parse_config_text("= 3\n"); });
    CHECK(msg.find("empty key") != std::string::npos);

    ConfigKv base{{"physics.g", "1.0"}};
    apply_override(base, "physics.g=2.5");
    apply_override(base, "plan.order = 1");
    CHECK(base.at("physics.g") == "2.5");
    CHECK(base.at("plan.order") == "1");
    CHECK_THROWS_AS(apply_override(base, "no-equals-here"), ConfigError);
}

TEST_CASE("config files load with path context") {
    std::string path = tmp_file("good.cfg");
    {
        std::ofstream out(path);
        out << "[physics]\ng = 2.0\n";
    }
    ConfigKv kv = load_config_file(path);
    CHECK(kv.at("physics.g") == "2.0");
    CHECK_THROWS_AS(load_config_file(tmp_file("missing.cfg")), ConfigError);

    std::string bad = tmp_file("bad.cfg");
    {
        std::ofstream out(bad);
        out << "[experiment]\nname = parity_chevron\n[physics]\ng == oops\n";
    }
    std::string msg = catch_config_error([&] { config_from_kv(load_config_file(bad)); });
    // The parse itself succeeds ("g" = "= oops"); building the config rejects
    // the numeric value with the key path attached.
    CHECK(msg.find("physics.g") != std::string::npos);
}

TEST_CASE("experiment names round trip") {
    std::vector<std::string> names = all_experiment_names();
    CHECK(names.size() == 11);
    for (const auto& n : names)
        CHECK(experiment_name(experiment_kind_from_name(n)) == n);
    CHECK_THROWS_AS(experiment_kind_from_name("warp_drive"), ConfigError);
}

TEST_CASE("per-experiment defaults") {
    ExperimentConfig parity = default_config(ExperimentKind::parity_chevron);
    CHECK(parity.g == doctest::Approx(1.95));
    CHECK(parity.n_steps == 60);
    CHECK(parity.order == 2);
    CHECK(parity.r_values.size() == 22);
    CHECK(parity.r_values.front() == doctest::Approx(0.3));
    CHECK(std::isinf(parity.r_values.back()));
    CHECK_NOTHROW(parity.validate());

    ExperimentConfig photon = default_config(ExperimentKind::photon_chevron);
    CHECK(photon.n_steps == 90);
    CHECK(photon.meter.d == doctest::Approx(10.0));
    CHECK(photon.meter.tau_eff == doctest::Approx(0.0065));

    ExperimentConfig stepsize = default_config(ExperimentKind::stepsize_compare);
    CHECK(stepsize.g == doctest::Approx(0.5));
    REQUIRE(stepsize.tau_values.size() == 4);
    CHECK(stepsize.tau_values[0] == doctest::Approx(0.020));
    CHECK(stepsize.tau_values[3] == doctest::Approx(0.050));

    CHECK(default_config(ExperimentKind::jc_chevron).off_phase == doctest::Approx(2.2));
}

TEST_CASE("config assembly from keys") {
    ConfigKv kv{{"experiment.name", "parity_chevron"}, {"physics.g", "2.5"},
                {"plan.n_steps", "30"}};
    ExperimentConfig cfg = config_from_kv(kv);
    CHECK(cfg.g == doctest::Approx(2.5));
    CHECK(cfg.n_steps == 30);
    CHECK(cfg.r_values.size() == 22);  // default sweep kept

    // A user sweep axis replaces the default one.
    kv["sweep.omega_rr_values"] = "0.5,1,2";
    cfg = config_from_kv(kv);
    CHECK(cfg.r_values.empty());
    REQUIRE(cfg.omega_rr_values.size() == 3);
    CHECK(cfg.omega_rr_values[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(config_from_kv(ConfigKv{}), ConfigError);
    std::string msg = catch_config_error(
        [&] { config_from_kv(ConfigKv{{"experiment.name", "parity_chevron"},
                                      {"physics.gg", "1"}}); });
    CHECK(msg.find("physics.gg") != std::string::npos);

    // Both sweep axes at once are rejected.
    ConfigKv both{{"experiment.name", "parity_chevron"},
                  {"sweep.r_values", "1"},
                  {"sweep.omega_rr_values", "1"}};
    CHECK_THROWS_AS(config_from_kv(both), ConfigError);

    // Explicit truncation below the sizing guard is rejected with the need.
    ConfigKv tight{{"experiment.name", "parity_chevron"},
                   {"physics.n_max", "10"},
                   {"sweep.r_values", "2"}};
    msg = catch_config_error([&] { config_from_kv(tight); });
    CHECK(msg.find("truncation guard") != std::string::npos);
    CHECK(msg.find("60") != std::string::npos);
}

TEST_CASE("automatic truncation sizing") {
    CHECK(auto_n_max(1.79, 1.79, 1.2) == 26);   // r = 1 orbit
    CHECK(auto_n_max(1.95, 0.975, 1.2) == 60);  // r = 2 orbit
    CHECK(auto_n_max(0.1, 10.0, 1.0) == 11);    // tiny orbit floors near 10
    // The unbounded orbit grows with total time.
    CHECK(auto_n_max(1.79, 0.0, 0.1) < auto_n_max(1.79, 0.0, 0.4));
    CHECK_THROWS_AS(auto_n_max(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(auto_n_max(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("canonical form and hash") {
    ExperimentConfig cfg = default_config(ExperimentKind::parity_chevron);
    ConfigKv kv = cfg.canonical_kv();
    CHECK(kv.at("experiment.name") == "parity_chevron");
    CHECK(kv.at("physics.t1_res") == "inf");

    // The canonical map reproduces the config exactly.
    ExperimentConfig round = config_from_kv(kv);
    CHECK(round.canonical_kv() == kv);

    std::string h1 = config_hash(kv);
    CHECK(h1 == config_hash(kv));  // stable
    CHECK(h1.size() == 16);
    ExperimentConfig other = cfg;
    other.g = 1.96;
    CHECK(config_hash(other.canonical_kv()) != h1);
    other = cfg;
    other.r_values.push_back(11.0);
    CHECK(config_hash(other.canonical_kv()) != h1);
}

TEST_CASE("double formatting round trips") {
    for (double v : {1.0 / 3.0, 1e-17, 0.1, 2.0, -1.75, 123456789.123456789,
                     std::numeric_limits<double>::min()}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    // Subnormals cannot go through std::stod on glibc, but formatting them
    // must not throw either.
    CHECK(format_double(std::numeric_limits<double>::denorm_min()) == "5e-324");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("grid csv round trip") {
    GridData grid;
    grid.row_label = "r";
    grid.col_label = "t_us";
    grid.row_values = {0.5, 1.0};
    grid.col_values = {0.0, 0.02, 1.0 / 3.0};
    grid.values.resize(2, 3);
    grid.values << 1.0, 0.25, -0.125, 1e-17, 0.0, 2.0 / 3.0;
    std::string path = tmp_file("grid.csv");
    write_grid_csv(path, grid);
    GridData back = read_grid_csv(path);
    CHECK(back.row_label == "r");
    CHECK(back.col_label == "t_us");
    REQUIRE(back.row_values.size() == 2);
    REQUIRE(back.col_values.size() == 3);
    CHECK(back.col_values[2] == grid.col_values[2]);  // exact, not approximate
    CHECK((back.values - grid.values).cwiseAbs().maxCoeff() == 0.0);

    // Header-only grid: zero rows survive the round trip.
    GridData empty = grid;
    empty.row_values.clear();
    empty.values.resize(0, 3);
    write_grid_csv(path, empty);
    back = read_grid_csv(path);
    CHECK(back.row_values.empty());
    CHECK(back.col_values.size() == 3);

    GridData bad = grid;
    bad.values.resize(2, 2);
    CHECK_THROWS_AS(write_grid_csv(path, bad), std::logic_error);
}

TEST_CASE("table csv round trip") {
    std::string path = tmp_file("table.csv");
    std::vector<std::string> names{"t_us", "parity"};
    std::vector<std::vector<double>> cols{{0.0, 0.02, 0.04}, {1.0, 0.75, 1.0 / 7.0}};
    write_table_csv(path, names, cols);
    std::vector<std::string> got_names;
    auto got = read_table_csv(path, &got_names);
    CHECK(got_names == names);
    REQUIRE(got.size() == 2);
    CHECK(got[1][2] == cols[1][2]);
    CHECK_THROWS_AS(write_table_csv(path, names, {{1.0}, {1.0, 2.0}}), std::logic_error);
}

TEST_CASE("density json round trip") {
    Mat rho = random_density(5, 3);
    std::string path = tmp_file("rho.json");
    write_density_json(path, rho);
    Mat back = read_density_json(path);
    CHECK(max_abs_diff(back, rho) == 0.0);
}

TEST_CASE("trace csv round trip") {
    KernelTrace trace{4.0, {1.015, 1.010, 1.003, 1.001, 1.0}, KernelTrace::Kind::step_response};
    std::string path = tmp_file("trace.csv");
    write_trace_csv(path, trace);
    KernelTrace back = read_trace_csv(path);
    CHECK(back.dt == doctest::Approx(4.0));
    REQUIRE(back.samples.size() == trace.samples.size());
    for (size_t k = 0; k < trace.samples.size(); ++k)
        CHECK(back.samples[k] == trace.samples[k]);

    std::string ragged = tmp_file("ragged.csv");
    {
        std::ofstream out(ragged);
        out << "t_ns,value\n0,1\n4,1\n12,1\n";  // 4 -> 12 breaks uniform sampling
    }
    CHECK_THROWS_AS(read_trace_csv(ragged), std::runtime_error);
}

TEST_CASE("kernel json round trip") {
    std::string path = tmp_file("kernel.json");
    StepForm exp_f{StepForm::Kind::exp_approach, 0, 0.015, 670.0};
    write_kernel_json(path, exp_f, 4.0, 6400);
    double dt = 0.0;
    int n = 0;
    StepForm back = read_kernel_json(path, &dt, &n);
    CHECK(back.kind == StepForm::Kind::exp_approach);
    CHECK(back.alpha == exp_f.alpha);
    CHECK(back.tau == exp_f.tau);
    CHECK(dt == 4.0);
    CHECK(n == 6400);

    StepForm skin{StepForm::Kind::skin_effect};
    skin.alpha_db = 1.7;
    write_kernel_json(path, skin, 1.0, 100);
    CHECK(read_kernel_json(path).alpha_db == skin.alpha_db);
}

TEST_CASE("wigner csv round trip") {
    std::vector<WignerPoint> pts{{cxd(0.5, -0.25), 0.1, 0},
                                 {cxd(-1.0, 2.0), -0.6, 4000},
                                 {cxd(0.0, 0.0), 2.0 / M_PI, 0}};
    std::string path = tmp_file("wigner.csv");
    write_wigner_csv(path, pts);
    auto back = read_wigner_csv(path);
    REQUIRE(back.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(back[i].alpha == pts[i].alpha);
        CHECK(back[i].value == pts[i].value);
        CHECK(back[i].shots == pts[i].shots);
    }

    // Three-field rows (no shots column) are accepted.
    std::string bare = tmp_file("wigner3.csv");
    {
        std::ofstream out(bare);
        out << "0.5,0,0.2\n-0.5,0,0.1\n";
    }
    auto three = read_wigner_csv(bare);
    REQUIRE(three.size() == 2);
    CHECK(three[0].shots == 0);
    CHECK(three[1].value == 0.1);
}

TEST_CASE("sidecar json contents") {
    ExperimentConfig cfg = default_config(ExperimentKind::stepsize_compare);
    ConfigKv kv = cfg.canonical_kv();
    std::string path = tmp_file("sidecar.json");
    write_sidecar_json(path, kv, {{"err", "rms parity deviation from exact evolution"}},
                       {{"note", 42}});
    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    CHECK(j.at("generator") == "qrsim");
    CHECK(j.at("code_version") == kCodeVersion);
    CHECK(j.at("config_hash") == config_hash(kv));
    CHECK(j.at("config").at("physics.g") == "0.5");
    CHECK(j.at("units").at("err") == "rms parity deviation from exact evolution");
    CHECK(j.at("note") == 42);
}

}  // TEST_SUITE
