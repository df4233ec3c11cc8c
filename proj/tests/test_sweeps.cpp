#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "holebox/errors.hpp"
#include "holebox/ini.hpp"
#include "holebox/sweeps.hpp"

using namespace holebox;

namespace {

std::string csv(const CsvTable& t) {
    std::ostringstream out;
    write_csv(out, t);
    return out.str();
}

IniDocument ini(const std::string& text) {
    std::istringstream in(text);
    return parse_ini(in, "test.ini");
}

std::size_t column(const CsvTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name) return i;
    FAIL("no column " << name);
    return 0;
}

RunConfig small_config() {
    RunConfig c;
    c.set("e0_sweep.count", "5");
    c.set("lz_sweep.count", "4");
    c.set("angle_map.theta_count", "4");
    c.set("angle_map.phi_count", "5");
    c.set("strain_sweep.count", "4");
    c.set("strain_sweep.refine_tolerance_deg", "1");
    c.set("numeric.Nx", "3");
    c.set("numeric.Ny", "3");
    c.set("numeric.Nz", "2");
    c.set("numeric.n_excited", "6");
    return c;
}

}  // namespace

TEST_CASE("run configuration") {
    RunConfig c;
    CHECK(c.text("scenario", "material") == "Si");
    CHECK(c.number("scenario", "Lx") == 40.0);
    CHECK(c.integer("numeric", "Nz") == 5);

    c.load(ini("[scenario]\nmaterial = Ge\nLz = 7.5\n\n[numeric]\nNz = 6\n"));
    CHECK(c.text("scenario", "material") == "Ge");
    CHECK(c.number("scenario", "Lz") == 7.5);
    CHECK(c.integer("numeric", "Nz") == 6);

    auto line_of = [](const std::string& text) -> std::size_t {
        RunConfig r;
        try {
            r.load(ini(text));
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("[scenario]\nLx = 3\nnot_a_key = 1\n") == 3);
    CHECK(line_of("[scenario]\n\nLx = three\n") == 3);
    CHECK(line_of("[numeric]\nNx = 2.5\n") == 2);
    CHECK(line_of("[nowhere]\nx = 1\n") == 1);
    CHECK(line_of("[scenario]\nLx = 3\n[nowhere]\n") == 3);

    CHECK_THROWS_AS(c.set("scenario.nope", "1"), ConfigError);
    CHECK_THROWS_AS(c.set("scenario", "1"), ConfigError);
    CHECK_THROWS_AS(c.set("numeric.Nx", "x"), ConfigError);
}

TEST_CASE("configuration round-trips through its own file format") {
    RunConfig c;
    c.set("scenario.E0", "0.35");
    c.set("convergence.cutoffs", "2x2x2");
    RunConfig back;
    back.load(ini(c.to_ini()));
    CHECK(back.to_ini() == c.to_ini());
    CHECK(back.hash() == c.hash());
    CHECK(RunConfig().hash() != c.hash());
}

TEST_CASE("materials table") {
    const RunConfig c;
    const auto t = run_materials_table(builtin_materials(), c);
    REQUIRE(t.rows.size() == 6);
    // Silicon [110] figure of merit |kappa| gamma3 / (gamma2 (gamma1 + gamma2)^2) x 100.
    const double expected = 100.0 * 0.42 * (1.446 / 0.339) / ((4.285 + 0.339) * (4.285 + 0.339));
    CHECK(std::stod(t.rows[0][column(t, "zeta_110_x100")]) == doctest::Approx(expected).epsilon(0.01));

    const auto single = run_materials_table({builtin_materials()[0]}, c);
    CHECK(single.rows.size() == 1);

    const auto empty = run_materials_table({}, c);
    CHECK(empty.rows.empty());
    const auto text = csv(empty);
    CHECK(text.find("material,E_g") != std::string::npos);
}

TEST_CASE("CSV output does not depend on the thread count") {
    const auto c = small_config();
    std::string first;
    for (int threads : {1, 3}) {
        omp_set_num_threads(threads);
        const std::string now = csv(run_angle_map(c, default_tiers(SweepKind::angle_map))) +
                                csv(run_e0_sweep(c, default_tiers(SweepKind::e0_sweep)));
        if (first.empty())
            first = now;
        else
            CHECK(now == first);
    }
}

TEST_CASE("angle map columns") {
    auto c = small_config();
    const auto t = run_angle_map(c, {Tier::analytic2, Tier::minimal_exact});
    CHECK(t.rows.size() == 20);
    const auto f2 = column(t, "f_R_analytic2");
    const auto th = column(t, "theta_deg");
    // theta = 0 gives no Rabi oscillation; second order has no azimuth dependence.
    for (const auto& row : t.rows) {
        if (std::stod(row[th]) == 0.0) CHECK(std::stod(row[f2]) == 0.0);
    }
    for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
        if (t.rows[i][th] == t.rows[i + 1][th])
            CHECK(std::stod(t.rows[i][f2]) == doctest::Approx(std::stod(t.rows[i + 1][f2])).epsilon(1e-12));
    }
    CHECK(column(t, "f_L_minimal_exact") > column(t, "f_R_minimal_exact"));
}

TEST_CASE("strain sweep marks the unstrained reference") {
    auto c = small_config();
    const auto t = run_strain_sweep(c, {Tier::minimal_exact});
    CHECK(t.rows.size() == 5);  // four grid points plus eps = 0
    int references = 0;
    for (const auto& row : t.rows) {
        if (row[column(t, "reference")] == "1") {
            ++references;
            CHECK(std::stod(row[column(t, "eps_parallel_percent")]) == 0.0);
            CHECK(std::stod(row[column(t, "Lz_eff")]) == doctest::Approx(10.0));
        }
    }
    CHECK(references == 1);

    c.set("scenario.material", "Ge");
    CHECK_THROWS_AS(run_strain_sweep(c, {Tier::minimal_exact}), ConfigError);
}

TEST_CASE("strain sweep: heavy- to light-hole transition and the Rabi dip") {
    RunConfig c;
    c.set("strain_sweep.min_percent", "0.055");
    c.set("strain_sweep.max_percent", "0.075");
    c.set("strain_sweep.count", "81");
    c.set("strain_sweep.refine_tolerance_deg", "0.1");
    const auto t = run_strain_sweep(c, {Tier::minimal_exact});
    std::vector<double> eps, heavy, f;
    for (const auto& row : t.rows) {
        if (row[column(t, "reference")] == "1") continue;
        eps.push_back(std::stod(row[column(t, "eps_parallel_percent")]));
        heavy.push_back(std::stod(row[column(t, "heavy_weight")]));
        f.push_back(std::stod(row[column(t, "f_R_minimal_exact")]));
    }
    CHECK(eps[1] == 0.05525);  // grid values are written without rounding noise
    std::size_t cross = 0, dip = 0;
    while (cross + 1 < heavy.size() && heavy[cross + 1] > 0.5) ++cross;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] < f[dip]) dip = i;
    CHECK(eps[cross] == doctest::Approx(0.0625).epsilon(0.02));
    CHECK(eps[dip] == doctest::Approx(0.0643).epsilon(0.01));
}

TEST_CASE("tier and cutoff lists") {
    CHECK(parse_tier_list("analytic2,minimal_exact") == std::vector<Tier>{Tier::analytic2, Tier::minimal_exact});
    CHECK_THROWS_AS(parse_tier_list("analytic2,,linearized"), ConfigError);
    CHECK_THROWS_AS(check_tiers(SweepKind::e0_sweep, {Tier::converged_full}), ConfigError);
    CHECK_NOTHROW(check_tiers(SweepKind::angle_map, default_tiers(SweepKind::angle_map)));
    for (auto kind : {SweepKind::e0_sweep, SweepKind::lz_sweep, SweepKind::angle_map, SweepKind::strain_sweep})
        CHECK_NOTHROW(check_tiers(kind, default_tiers(kind)));

    const auto cutoffs = parse_cutoff_list("4x4x4, 6x6x5");
    REQUIRE(cutoffs.size() == 2);
    CHECK(cutoffs[1].Nx == 6);
    CHECK(cutoffs[1].Nz == 5);
    CHECK_THROWS_AS(parse_cutoff_list("4x4"), ConfigError);
    CHECK_THROWS_AS(parse_cutoff_list("0x4x4"), ConfigError);
    CHECK_THROWS_AS(parse_cutoff_list(""), ConfigError);
}

TEST_CASE("outputs carry the configuration sidecar") {
    auto c = small_config();
    const auto dir = std::filesystem::temp_directory_path() / "holebox_test_sweeps";
    std::filesystem::create_directories(dir);
    const auto out = dir / "lz.csv";
    const auto t = run_lz_sweep(c, default_tiers(SweepKind::lz_sweep));
    write_outputs(out, t, c);

    RunConfig back;
    back.load_file(dir / "lz.csv.config.ini");
    CHECK(back.hash() == c.hash());

    std::ifstream in(out);
    std::string first, second;
    std::getline(in, first);
    std::getline(in, second);
    CHECK(first == "# holebox lz-sweep");
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(c.hash()));
    CHECK(second == std::string("# config_hash: fnv1a64:") + hex);
    std::filesystem::remove_all(dir);
}
