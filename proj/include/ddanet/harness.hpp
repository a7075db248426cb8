#ifndef DDANET_HARNESS_HPP
#define DDANET_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ddanet/dda.hpp"
#include "ddanet/design.hpp"
#include "ddanet/graph.hpp"
#include "ddanet/theory.hpp"

namespace ddanet::harness {

struct GraphCfg {
    int n = 50;
    double radius = 0.2;
};
struct CostCfg {
    double tau1 = 10.0;
    double tau2 = 0.5;
    double d0 = 0.7;
};
struct DesignCfg {
    std::string method = "subgradient";  // subgradient | greedy
    std::string mode = "C1";             // C1 | C2
    double gamma = 0.01;
    int k = 100;
    int iters = 2000;
    double step_scale = 5.0;
};
struct ScheduleCfg {
    long Delta = 1;
    std::string ordering = "greedy";  // greedy | as-given
};
struct DdaCfg {
    long T = 5000;
    int p = 5;
    double R = 5.0;
    int trials = 20;
    long checkpoint_every = 0;  // 0 -> max(1, T/1000)
};
struct TheoryCfg {
    bool enabled = true;
};
struct DecentralizedCfg {
    int N1 = 300;
    int N2 = 1000;
    bool enabled = false;  // route design eigenvectors through the protocol layer
};

struct ExperimentConfig {
    uint64_t seed = 1;
    GraphCfg graph;
    CostCfg cost;
    DesignCfg design;
    ScheduleCfg schedule;
    DdaCfg dda;
    TheoryCfg theory;
    DecentralizedCfg decentralized;
};

// Strict JSON with exactly the field tree above; unknown keys are errors.
ExperimentConfig load_config(const std::string& path);
// desk: n=50, T=5000, trials=20. paper: n=100, radius=0.15, T=20000, trials=20.
void apply_scale(ExperimentConfig& cfg, const std::string& scale);

// Deterministic seed streams per role; trial streams are index-stable, so
// growing the trial count never reshuffles earlier trials.
uint64_t graph_seed(const ExperimentConfig& cfg);
uint64_t design_seed(const ExperimentConfig& cfg);
uint64_t protocol_seed(const ExperimentConfig& cfg);
uint64_t trial_seed(uint64_t master, int trial);

struct DesignOutput {
    Graph base;
    design::SelectionProblem problem;
    design::SelectionResult selection;
    std::vector<EdgeVec> pick_order;  // greedy method only: picks in pick order
};

DesignOutput run_design(const ExperimentConfig& cfg);

// A schedule made concrete: ordered edges, timed additions, shared-spectra
// timeline and the time-indexed theory terms.
struct PreparedRun {
    std::vector<EdgeVec> order;
    std::vector<std::pair<long, Edge>> additions;
    engine::NetworkTimeline timeline;
    std::vector<double> terms;
};

PreparedRun prepare_run(const ExperimentConfig& cfg, const Graph& base,
                        const std::vector<EdgeVec>& selected,
                        const std::vector<EdgeVec>& pick_order, long delta,
                        int delta_max_override);

struct RunSet {
    std::vector<engine::Trajectory> trajectories;  // one per trial
    std::vector<double> f_stars;
    std::vector<long> checkpoint_times;
    std::vector<double> regret_mean;  // per checkpoint, across trials
    std::vector<double> regret_max;
    double regret_at_T_mean = 0.0;
    double regret_at_T_stderr = 0.0;
};

RunSet run_trials(const ExperimentConfig& cfg, const PreparedRun& prep, int trials);

// First checkpoint time with max-agent regret <= eps, else T (censored).
std::vector<long> convergence_times(const RunSet& runs, double eps);

// One row of a sweep CSV; the columns are fixed.
struct SweepRow {
    double axis = 0.0;
    double regret_mean = 0.0;
    double regret_stderr = 0.0;
    double thm2_bound = 0.0;
    long delta_star = 0;
    long edges_added = 0;
    double cost_total = 0.0;
};

// Side information the CSVs do not carry (trend checks, companion files).
struct SweepExtra {
    double distance = 0.0;        // n - lambda_{n-1} of the selected graph
    double conv_time_mean = 0.0;  // seed-averaged convergence time to eps
    double prop3_scale = 0.0;
    double total_terms = 0.0;
    double sigma2_P0 = 0.0;
};

struct SweepOutput {
    std::vector<SweepRow> rows;
    std::vector<SweepExtra> extra;
};

// Selection re-solved per gamma; DDA runs reuse per-trial instances across
// rows, and every row shares one sweep-wide delta_max so mixing matrices are
// comparable.
SweepOutput sweep_gamma(const ExperimentConfig& cfg, const std::vector<double>& gammas);
// One selection, re-scheduled at each switching interval.
SweepOutput sweep_delta(const ExperimentConfig& cfg, const std::vector<long>& deltas,
                        double eps = 0.1);
// Greedy selection once at the largest budget; smaller budgets are prefixes.
SweepOutput sweep_budget(const ExperimentConfig& cfg, const std::vector<long>& budgets);

void write_file_atomic(const std::string& path, const std::string& content);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
// delta_star,beta_star,net_bound,thm2_bound_at_T,prop3_scale,t,regret_mean,regret_max,thm2_bound_t
void write_theory_csv(const std::string& path, const theory::BoundReport& rep,
                      const RunSet& runs);

}  // namespace ddanet::harness

#endif
