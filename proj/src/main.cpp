#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dockmpc/scenario_io.hpp"
#include "dockmpc/simulation.hpp"

namespace {

using namespace dockmpc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;   // parse / validation / comparison-input problems
constexpr int kExitRuntime = 3;  // numeric guards tripped while simulating
constexpr int kExitIo = 4;       // file system problems

void print_summary(const Scenario& sc, const SimResult& res) {
    const Metrics& m = res.metrics;
    std::printf("scenario       %s (%s, seed %llu)\n", sc.name.c_str(),
                control_mode_name(sc.mode), static_cast<unsigned long long>(sc.seed));
    std::printf("steps          %zu x %g s\n", res.log.steps.size(), res.log.Ts);
    std::printf("conv pos/att   %g s / %g s\n", m.conv_time_pos, m.conv_time_att);
    std::printf("lvlh rms       %.3e m\n", m.lvlh_rms);
    std::printf("min rho        %.3f m\n", m.min_rho);
    std::printf("transit mae    eps %.2f deg / beta %.2f deg\n", m.transit_mae_eps_deg,
                m.transit_mae_beta_deg);
    std::printf("cone/fov viol  %d / %d (unrelaxed %d / %d)\n", m.cone_violations,
                m.fov_violations, m.cone_violations_unrelaxed, m.fov_violations_unrelaxed);
    std::printf("relax steps    %d / %d\n", m.relax_steps_p, m.relax_steps_a);
    std::printf("wrap resets    %d (max carried %.3f deg)\n", m.wrap_resets,
                m.max_carried_error_deg);
}

void write_outputs(const SimResult& res, const std::string& prefix, const std::string& format) {
    if (format == "csv" || format == "both") {
        write_trajectory_csv(res.log, prefix + ".csv");
        std::printf("wrote %s.csv\n", prefix.c_str());
    }
    if (format == "json" || format == "both") {
        write_trajectory_json(res.log, prefix + ".json");
        std::printf("wrote %s.json\n", prefix.c_str());
    }
    write_metrics_json(res.metrics, prefix + ".metrics.json");
    std::printf("wrote %s.metrics.json\n", prefix.c_str());
}

int cmd_run(const std::string& scenario_path, const std::string& mode, bool have_seed,
            std::uint64_t seed, bool have_duration, double duration, const std::string& out,
            const std::string& format) {
    Scenario sc = load_scenario(scenario_path);
    if (mode == "standard") sc.mode = ControlMode::Standard;
    else if (mode == "sampling") sc.mode = ControlMode::Sampling;
    if (have_seed) sc.seed = seed;
    if (have_duration) sc.duration = duration;
    sc.validate();

    const SimResult res = run_closed_loop(sc);
    print_summary(sc, res);
    if (!out.empty()) write_outputs(res, out, format);
    return kExitOk;
}

int cmd_compare(const std::string& scenario_path, int seeds, const std::string& out_dir) {
    Scenario sc = load_scenario(scenario_path);

    Scenario std_sc = sc;
    std_sc.mode = ControlMode::Standard;
    const SimResult std_res = run_closed_loop(std_sc);

    static const char* channel_names[6] = {"rho", "eps", "beta", "phi", "theta", "psi"};
    double os_mean[6] = {0, 0, 0, 0, 0, 0};
    double ct_mean[6] = {0, 0, 0, 0, 0, 0};
    double me_mean[6] = {0, 0, 0, 0, 0, 0};
    std::vector<ModeComparison> reports;
    reports.reserve(static_cast<std::size_t>(seeds));

    for (int s = 1; s <= seeds; ++s) {
        Scenario smp_sc = sc;
        smp_sc.mode = ControlMode::Sampling;
        smp_sc.seed = static_cast<std::uint64_t>(s);
        const SimResult smp_res = run_closed_loop(smp_sc);
        ModeComparison c = compare_logs(std_res.log, smp_res.log, sc, "standard",
                                        "sampling seed " + std::to_string(s));
        const ChannelMetrics* cb[6] = {&c.metrics_b.rho, &c.metrics_b.eps, &c.metrics_b.beta,
                                       &c.metrics_b.phi, &c.metrics_b.theta, &c.metrics_b.psi};
        for (int ch = 0; ch < 6; ++ch) {
            os_mean[ch] += cb[ch]->overshoot / seeds;
            ct_mean[ch] += cb[ch]->conv_time / seeds;
            me_mean[ch] += c.mean_abs_err_b[ch] / seeds;
        }
        if (!out_dir.empty()) {
            const std::string path = out_dir + "/compare_" + sc.name + "_seed" +
                                     std::to_string(s) + ".json";
            std::ofstream f(path);
            if (!f) throw IoError("cannot write comparison file: " + path);
            f << comparison_to_json(c) << '\n';
        }
        reports.push_back(std::move(c));
    }

    const ChannelMetrics* ca[6] = {&std_res.metrics.rho, &std_res.metrics.eps,
                                   &std_res.metrics.beta, &std_res.metrics.phi,
                                   &std_res.metrics.theta, &std_res.metrics.psi};
    std::printf("scenario %s: standard vs sampling mean over seeds 1..%d\n", sc.name.c_str(),
                seeds);
    std::printf("%-6s %13s %13s %11s %11s %12s %12s %s\n", "chan", "std_overshoot",
                "smp_overshoot", "std_conv", "smp_conv", "std_mean|e|", "smp_mean|e|",
                "winner");
    for (int ch = 0; ch < 6; ++ch) {
        const double me_a = reports.empty() ? 0.0 : reports.front().mean_abs_err_a[ch];
        const char* winner = me_mean[ch] < me_a ? "sampling" : "standard";
        std::printf("%-6s %13.4g %13.4g %11.4g %11.4g %12.4g %12.4g %s\n", channel_names[ch],
                    ca[ch]->overshoot, os_mean[ch], ca[ch]->conv_time, ct_mean[ch], me_a,
                    me_mean[ch], winner);
    }
    return kExitOk;
}

int cmd_validate(const std::string& scenario_path) {
    const Scenario sc = load_scenario(scenario_path);
    const int nsteps = static_cast<int>(std::lround(sc.duration / sc.tuning_p.Ts));
    std::printf("OK: %s (%s, %d steps of %g s, Np=%d Nc=%d)\n", sc.name.c_str(),
                control_mode_name(sc.mode), nsteps, sc.tuning_p.Ts, sc.tuning_p.Np,
                sc.tuning_p.Nc);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling-based predictive rendezvous and docking simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string mode;
    std::uint64_t seed = 0;
    double duration = 0.0;
    std::string out;
    std::string format = "csv";
    int seeds = 10;
    std::string out_dir;

    CLI::App* run = app.add_subcommand("run", "Run one closed-loop scenario");
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    run->add_option("--mode", mode, "Override the control mode")
        ->check(CLI::IsMember({"standard", "sampling"}));
    CLI::Option* seed_opt = run->add_option("--seed", seed, "Override the RNG seed");
    CLI::Option* dur_opt =
        run->add_option("--duration", duration, "Override the simulated time (s)")
            ->check(CLI::PositiveNumber);
    run->add_option("--out", out,
                    "Output prefix; writes <prefix>.csv/.json and <prefix>.metrics.json");
    run->add_option("--format", format, "Trajectory output format")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    CLI::App* compare =
        app.add_subcommand("compare", "Run standard and sampling modes and tabulate both");
    compare->add_option("--scenario", scenario_path, "Scenario file")->required();
    compare->add_option("--seeds", seeds, "Number of sampling seeds (1..N)")
        ->check(CLI::PositiveNumber);
    compare->add_option("--out", out_dir, "Directory for per-seed comparison JSON");

    CLI::App* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate->add_option("--scenario", scenario_path, "Scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            return cmd_run(scenario_path, mode, seed_opt->count() > 0, seed,
                           dur_opt->count() > 0, duration, out, format);
        }
        if (compare->parsed()) return cmd_compare(scenario_path, seeds, out_dir);
        if (validate->parsed()) return cmd_validate(scenario_path);
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ScenarioMismatchError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DimensionMismatchError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "abort: " << e.what() << '\n';
        return kExitRuntime;
    }
}
