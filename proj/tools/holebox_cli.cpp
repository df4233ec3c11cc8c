/// Command-line front end: figure-reproduction sweeps written as CSV files.
///
///     holebox e0-sweep --out fig3.csv --tier minimal_exact,linearized
///     holebox angle-map --config si.ini --set numeric.Nz=6 --threads 4 --out map.csv
///
/// Exit codes: 0 success, 1 configuration error, 2 solver error.
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "holebox/errors.hpp"
#include "holebox/sweeps.hpp"

namespace {

struct CommonOptions {
    std::string config;
    std::string out;
    std::string tiers;
    int threads = 0;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_tiers) {
    cmd->add_option("--config", o.config, "run configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out, "output CSV path")->required();
    if (with_tiers) cmd->add_option("--tier", o.tiers, "comma-separated tiers (default depends on the sweep)");
    cmd->add_option("--threads", o.threads, "worker threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--set", o.overrides, "override section.key=value (repeatable)");
}

holebox::RunConfig resolve(const CommonOptions& o) {
    holebox::RunConfig config;
    if (!o.config.empty()) config.load_file(o.config);
    for (const auto& item : o.overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw holebox::ConfigError("--set expects section.key=value, got '" + item + "'");
        config.set(item.substr(0, eq), item.substr(eq + 1));
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hole spin qubits in a rectangular box: Larmor and Rabi frequency sweeps"};
    app.require_subcommand(1);

    using holebox::SweepKind;
    const std::vector<std::pair<SweepKind, std::string>> commands{
        {SweepKind::materials_table, "Figures of merit of every material"},
        {SweepKind::e0_sweep, "Rabi frequency versus static field E0"},
        {SweepKind::lz_sweep, "Rabi frequency versus dot height Lz"},
        {SweepKind::angle_map, "Rabi and Larmor frequencies versus magnetic-field orientation"},
        {SweepKind::strain_sweep, "Ground-state composition and optimal Rabi frequency versus biaxial strain"},
        {SweepKind::convergence, "Converged-basis Rabi frequency versus basis cutoff"},
    };
    std::vector<CommonOptions> options(commands.size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto* cmd = app.add_subcommand(holebox::to_string(commands[i].first), commands[i].second);
        const bool tiers = commands[i].first != SweepKind::materials_table &&
                           commands[i].first != SweepKind::convergence;
        add_common(cmd, options[i], tiers);
        subs.push_back(cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        for (std::size_t i = 0; i < commands.size(); ++i) {
            if (!subs[i]->parsed()) continue;
            const auto kind = commands[i].first;
            const auto& o = options[i];
            const auto config = resolve(o);
#ifdef _OPENMP
            if (o.threads > 0) omp_set_num_threads(o.threads);
#endif
            auto tiers = o.tiers.empty() ? holebox::default_tiers(kind) : holebox::parse_tier_list(o.tiers);
            holebox::CsvTable table;
            switch (kind) {
                case SweepKind::materials_table:
                    table = holebox::run_materials_table(holebox::run_materials(config), config);
                    break;
                case SweepKind::e0_sweep: table = holebox::run_e0_sweep(config, tiers); break;
                case SweepKind::lz_sweep: table = holebox::run_lz_sweep(config, tiers); break;
                case SweepKind::angle_map: table = holebox::run_angle_map(config, tiers); break;
                case SweepKind::strain_sweep: table = holebox::run_strain_sweep(config, tiers); break;
                case SweepKind::convergence: table = holebox::run_convergence(config); break;
            }
            holebox::write_outputs(o.out, table, config);
            std::cerr << "wrote " << o.out << " (" << table.rows.size() << " rows)\n";
        }
    } catch (const holebox::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const holebox::SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
