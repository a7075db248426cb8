// Command-line front end: offline topology design, edge scheduling, DDA runs,
// theory reports and parameter sweeps, all emitting plot-ready CSV files.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ddanet/dda.hpp"
#include "ddanet/design.hpp"
#include "ddanet/harness.hpp"
#include "ddanet/rng.hpp"
#include "ddanet/theory.hpp"

namespace fs = std::filesystem;
using namespace ddanet;

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct GlobalArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::string scale;
    long seed = -1;
    int trials = -1;
};

harness::ExperimentConfig resolve_config(const GlobalArgs& g) {
    harness::ExperimentConfig cfg;
    if (!g.scale.empty()) harness::apply_scale(cfg, g.scale);
    if (!g.config_path.empty()) {
        cfg = harness::load_config(g.config_path);
        if (!g.scale.empty()) harness::apply_scale(cfg, g.scale);
    }
    if (g.seed >= 0) cfg.seed = static_cast<uint64_t>(g.seed);
    if (g.trials > 0) cfg.dda.trials = g.trials;
    return cfg;
}

std::string out_path(const GlobalArgs& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

void emit_design(const GlobalArgs& g, const harness::DesignOutput& des) {
    {
        std::ostringstream os;
        design::SelectionResult r = des.selection;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", des.problem.gamma);
        os << des.problem.candidates.size() << " " << buf << " "
           << design::mode_name(des.problem.mode) << " " << des.problem.k << "\n";
        for (size_t l = 0; l < r.w_relaxed.size(); ++l)
            os << (l ? " " : "") << fmt(r.w_relaxed[l]);
        os << "\n";
        for (size_t l = 0; l < r.w_binary.size(); ++l) os << (l ? " " : "") << int(r.w_binary[l]);
        os << "\n";
        harness::write_file_atomic(out_path(g, "selection.txt"), os.str());
    }
    std::vector<Edge> sel;
    for (const EdgeVec& e : des.selection.selected_edges) sel.push_back(to_edge(e));
    save_graph(make_graph(des.base.n, sel), out_path(g, "selected_edges.txt"));
    save_graph(des.base, out_path(g, "base_graph.txt"));
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::vector<long> parse_longs(const std::string& csv) {
    std::vector<long> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stol(tok));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topology design and distributed dual averaging over growing networks"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "JSON config file");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "master seed override");
    app.add_option("--scale", g.scale, "desk|paper preset")
        ->check(CLI::IsMember({"desk", "paper"}));
    app.add_option("--trials", g.trials, "trial count override");

    double gamma_override = -1.0;
    long delta_override = -1;

    CLI::App* c_design = app.add_subcommand("design", "edge selection");
    c_design->add_option("--gamma", gamma_override, "regularization override");

    CLI::App* c_schedule = app.add_subcommand("schedule", "order the selected edges");
    c_schedule->add_option("--gamma", gamma_override, "regularization override");

    CLI::App* c_run = app.add_subcommand("run", "single DDA trajectory");
    int run_trial = 0;
    c_run->add_option("--trial", run_trial, "trial index");
    c_run->add_option("--delta", delta_override, "switching interval override");
    c_run->add_option("--gamma", gamma_override, "regularization override");

    CLI::App* c_theory = app.add_subcommand("theory", "bound report against trials");
    c_theory->add_option("--delta", delta_override, "switching interval override");
    c_theory->add_option("--gamma", gamma_override, "regularization override");

    CLI::App* c_sweep = app.add_subcommand("sweep", "gamma / Delta / budget sweeps");
    std::string axis = "gamma";
    std::string values;
    c_sweep->add_option("--axis", axis, "gamma|delta|budget")
        ->check(CLI::IsMember({"gamma", "delta", "budget"}));
    c_sweep->add_option("--values", values, "comma-separated axis values")->required();
    c_sweep->add_option("--gamma", gamma_override, "regularization override");

    CLI11_PARSE(app, argc, argv);

    try {
        harness::ExperimentConfig cfg = resolve_config(g);
        if (gamma_override >= 0.0) cfg.design.gamma = gamma_override;
        if (delta_override >= 1) cfg.schedule.Delta = delta_override;

        if (c_design->parsed()) {
            const auto des = harness::run_design(cfg);
            emit_design(g, des);
            std::cout << "selected " << des.selection.selected_edges.size() << " of "
                      << des.problem.candidates.size() << " candidate edges\n";
        } else if (c_schedule->parsed()) {
            const auto des = harness::run_design(cfg);
            emit_design(g, des);
            const auto prep = harness::prepare_run(cfg, des.base, des.selection.selected_edges,
                                                   des.pick_order, cfg.schedule.Delta, 0);
            std::ostringstream os;
            os << prep.order.size() << "\n";
            for (const EdgeVec& e : prep.order) os << e.i + 1 << " " << e.j + 1 << "\n";
            harness::write_file_atomic(out_path(g, "schedule.txt"), os.str());
            std::cout << "scheduled " << prep.order.size() << " edges\n";
        } else if (c_run->parsed()) {
            const auto des = harness::run_design(cfg);
            const auto prep = harness::prepare_run(cfg, des.base, des.selection.selected_edges,
                                                   des.pick_order, cfg.schedule.Delta, 0);
            const uint64_t ts = harness::trial_seed(cfg.seed, run_trial);
            const auto inst = engine::random_l1_instance(cfg.graph.n, cfg.dda.p, cfg.dda.R, ts);
            const auto oracle = engine::reference_optimum(inst, 1000000, derive_seed(ts, 4));
            engine::RunOpts opts;
            opts.T = cfg.dda.T;
            opts.checkpoint_every = cfg.dda.checkpoint_every;
            opts.f_star = oracle.f_star;
            const auto traj = engine::run_dda(inst, prep.timeline, opts);
            engine::save_trajectory_csv(traj, out_path(g, "trajectory.csv"));
            std::cout << "final max regret " << fmt(traj.rows.back().max_regret) << "\n";
        } else if (c_theory->parsed()) {
            const auto des = harness::run_design(cfg);
            const auto prep = harness::prepare_run(cfg, des.base, des.selection.selected_edges,
                                                   des.pick_order, cfg.schedule.Delta, 0);
            const auto runs = harness::run_trials(cfg, prep, cfg.dda.trials);
            const auto inst0 = engine::random_l1_instance(cfg.graph.n, cfg.dda.p, cfg.dda.R,
                                                          harness::trial_seed(cfg.seed, 0));
            const auto rep = theory::make_bound_report(
                prep.terms, prep.timeline.sigma2_P0(), cfg.dda.T, cfg.graph.n, cfg.dda.R,
                inst0.lipschitz, 0.1, runs.checkpoint_times);
            harness::write_theory_csv(out_path(g, "theory.csv"), rep, runs);
            std::cout << "delta_star " << rep.mixing.delta_star << " thm2_bound_at_T "
                      << fmt(rep.thm2_bound_at_T) << "\n";
        } else if (c_sweep->parsed()) {
            harness::SweepOutput sw;
            std::string name;
            if (axis == "gamma") {
                sw = harness::sweep_gamma(cfg, parse_doubles(values));
                name = "sweep_gamma.csv";
                std::ostringstream os;
                os << "gamma,distance,edges,cost_total\n";
                for (size_t r = 0; r < sw.rows.size(); ++r)
                    os << fmt(sw.rows[r].axis) << "," << fmt(sw.extra[r].distance) << ","
                       << sw.rows[r].edges_added << "," << fmt(sw.rows[r].cost_total) << "\n";
                harness::write_file_atomic(out_path(g, "design_metrics.csv"), os.str());
            } else if (axis == "delta") {
                sw = harness::sweep_delta(cfg, parse_longs(values));
                name = "sweep_delta.csv";
                std::ostringstream os;
                os << "Delta,conv_time_mean,prop3_scale,total_terms\n";
                for (size_t r = 0; r < sw.rows.size(); ++r)
                    os << fmt(sw.rows[r].axis) << "," << fmt(sw.extra[r].conv_time_mean) << ","
                       << fmt(sw.extra[r].prop3_scale) << "," << fmt(sw.extra[r].total_terms)
                       << "\n";
                harness::write_file_atomic(out_path(g, "delta_convergence.csv"), os.str());
            } else {
                sw = harness::sweep_budget(cfg, parse_longs(values));
                name = "sweep_budget.csv";
            }
            harness::write_sweep_csv(out_path(g, name), sw.rows);
            std::cout << "wrote " << sw.rows.size() << " sweep rows\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
