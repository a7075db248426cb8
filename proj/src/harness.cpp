#include "ddanet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ddanet/protocols.hpp"
#include "ddanet/rng.hpp"

namespace ddanet::harness {

namespace {

using nlohmann::json;

// seed-stream roles
enum : uint64_t { kGraphRole = 1, kDesignRole = 2, kProtocolRole = 3, kOracleRole = 4, kTrialRole = 16 };

void expect_keys(const json& j, const std::string& ctx, const std::set<std::string>& known) {
    if (!j.is_object()) throw std::runtime_error("config: " + ctx + " must be an object");
    for (const auto& item : j.items())
        if (known.find(item.key()) == known.end())
            throw std::runtime_error("config: unknown key '" + item.key() + "' in " + ctx);
}

template <typename T>
void take(const json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    json j;
    try {
        f >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: parse failure in " + path + ": " + e.what());
    }
    ExperimentConfig cfg;
    expect_keys(j, "root",
                {"seed", "graph", "cost", "design", "schedule", "dda", "theory", "decentralized"});
    take(j, "seed", cfg.seed);
    if (j.contains("graph")) {
        const json& g = j["graph"];
        expect_keys(g, "graph", {"n", "radius"});
        take(g, "n", cfg.graph.n);
        take(g, "radius", cfg.graph.radius);
    }
    if (j.contains("cost")) {
        const json& c = j["cost"];
        expect_keys(c, "cost", {"tau1", "tau2", "d0"});
        take(c, "tau1", cfg.cost.tau1);
        take(c, "tau2", cfg.cost.tau2);
        take(c, "d0", cfg.cost.d0);
    }
    if (j.contains("design")) {
        const json& d = j["design"];
        expect_keys(d, "design", {"method", "mode", "gamma", "k", "iters", "step_scale"});
        take(d, "method", cfg.design.method);
        take(d, "mode", cfg.design.mode);
        take(d, "gamma", cfg.design.gamma);
        take(d, "k", cfg.design.k);
        take(d, "iters", cfg.design.iters);
        take(d, "step_scale", cfg.design.step_scale);
    }
    if (j.contains("schedule")) {
        const json& s = j["schedule"];
        expect_keys(s, "schedule", {"Delta", "ordering"});
        take(s, "Delta", cfg.schedule.Delta);
        take(s, "ordering", cfg.schedule.ordering);
    }
    if (j.contains("dda")) {
        const json& d = j["dda"];
        expect_keys(d, "dda", {"T", "p", "R", "trials", "checkpoint_every"});
        take(d, "T", cfg.dda.T);
        take(d, "p", cfg.dda.p);
        take(d, "R", cfg.dda.R);
        take(d, "trials", cfg.dda.trials);
        take(d, "checkpoint_every", cfg.dda.checkpoint_every);
    }
    if (j.contains("theory")) {
        const json& t = j["theory"];
        expect_keys(t, "theory", {"enabled"});
        take(t, "enabled", cfg.theory.enabled);
    }
    if (j.contains("decentralized")) {
        const json& d = j["decentralized"];
        expect_keys(d, "decentralized", {"N1", "N2", "enabled"});
        take(d, "N1", cfg.decentralized.N1);
        take(d, "N2", cfg.decentralized.N2);
        take(d, "enabled", cfg.decentralized.enabled);
    }

    if (cfg.graph.n < 1 || cfg.dda.T < 1 || cfg.dda.trials < 1 || cfg.dda.p < 1)
        throw std::runtime_error("config: counts must be positive");
    if (cfg.schedule.Delta < 1 || cfg.schedule.Delta > cfg.dda.T)
        throw std::runtime_error("config: Delta must lie in [1, T]");
    return cfg;
}

void apply_scale(ExperimentConfig& cfg, const std::string& scale) {
    if (scale == "desk") {
        cfg.graph.n = 50;
        cfg.graph.radius = 0.2;
        cfg.dda.T = 5000;
        cfg.dda.trials = 20;
    } else if (scale == "paper") {
        cfg.graph.n = 100;
        cfg.graph.radius = 0.15;
        cfg.dda.T = 20000;
        cfg.dda.trials = 20;
    } else {
        throw std::runtime_error("scale must be 'desk' or 'paper'");
    }
    if (cfg.schedule.Delta > cfg.dda.T) cfg.schedule.Delta = cfg.dda.T;
}

uint64_t graph_seed(const ExperimentConfig& cfg) { return derive_seed(cfg.seed, kGraphRole); }
uint64_t design_seed(const ExperimentConfig& cfg) { return derive_seed(cfg.seed, kDesignRole); }
uint64_t protocol_seed(const ExperimentConfig& cfg) { return derive_seed(cfg.seed, kProtocolRole); }
uint64_t trial_seed(uint64_t master, int trial) {
    return derive_seed(master, kTrialRole + static_cast<uint64_t>(trial));
}

namespace {

// greedy selection with each pick's Fiedler eigenvector computed by the
// decentralized protocol instead of the centralized power iteration
std::vector<EdgeVec> decentralized_greedy(const design::SelectionProblem& prob, int budget,
                                          const DecentralizedCfg& dec, uint64_t seed) {
    std::vector<EdgeVec> picks;
    std::vector<double> w(prob.candidates.size(), 0.0);
    std::vector<char> taken(prob.candidates.size(), 0);
    std::vector<Edge> edges = prob.base.edges;
    for (int t = 0; t < budget; ++t) {
        const Graph g = make_graph(prob.base.n, edges);
        const SymMatrix P = design_mixing_matrix(prob, w);
        auto agents = proto::make_agents(g, P);
        const auto eig =
            proto::decentralized_top_eigvec(g, std::move(agents), dec.N1, dec.N2,
                                            derive_seed(seed, t));
        std::vector<EdgeVec> remaining;
        std::vector<double> costs;
        for (size_t l = 0; l < prob.candidates.size(); ++l)
            if (!taken[l]) {
                remaining.push_back(prob.candidates[l]);
                costs.push_back(prob.costs[l]);
            }
        const int local = proto::decentralized_greedy_pick(g, eig.y, prob.gamma, costs, remaining,
                                                           derive_seed(seed, 1000 + t));
        const EdgeVec pick = remaining[local];
        taken[pick.index] = 1;
        w[pick.index] = 1.0;
        picks.push_back(pick);
        edges.push_back(to_edge(pick));
    }
    return picks;
}

}  // namespace

DesignOutput run_design(const ExperimentConfig& cfg) {
    DesignOutput out;
    out.base = random_sensor_graph(cfg.graph.n, cfg.graph.radius, graph_seed(cfg));
    CostModel cm{cfg.cost.tau1, cfg.cost.tau2, cfg.cost.d0};
    const design::Mode mode = design::parse_mode(cfg.design.mode);
    out.problem = design::make_problem(out.base, cm, cfg.design.gamma, mode, cfg.design.k);

    if (cfg.design.method == "greedy") {
        const int budget = std::min<int>(cfg.design.k, static_cast<int>(out.problem.candidates.size()));
        out.pick_order = cfg.decentralized.enabled
                             ? decentralized_greedy(out.problem, budget, cfg.decentralized,
                                                    protocol_seed(cfg))
                             : design::greedy_select(out.problem, budget, design_seed(cfg));
        out.selection.w_relaxed.assign(out.problem.candidates.size(), 0.0);
        out.selection.w_binary.assign(out.problem.candidates.size(), 0);
        for (const EdgeVec& e : out.pick_order) {
            out.selection.w_relaxed[e.index] = 1.0;
            out.selection.w_binary[e.index] = 1;
        }
        for (size_t l = 0; l < out.problem.candidates.size(); ++l)
            if (out.selection.w_binary[l])
                out.selection.selected_edges.push_back(out.problem.candidates[l]);
        out.selection.objective_trace = {design::objective_phi(out.problem, out.selection.w_relaxed,
                                                               design_seed(cfg))};
    } else if (cfg.design.method == "subgradient") {
        design::SolveOpts opts;
        opts.iters = cfg.design.iters;
        opts.step_scale = cfg.design.step_scale;
        opts.seed = design_seed(cfg);
        if (cfg.decentralized.enabled) {
            if (mode != design::Mode::C1)
                throw std::runtime_error("decentralized subgradient design supports C1 only");
            // agent-local box updates driven by the protocol eigenvector
            const int K = static_cast<int>(out.problem.candidates.size());
            std::vector<double> w(K, 0.5);
            std::vector<double> best_w = w;
            double best_phi = 0.0;
            for (int l = 0; l <= cfg.design.iters; ++l) {
                const SymMatrix P = design_mixing_matrix(out.problem, w);
                const auto eig = proto::decentralized_top_eigvec(
                    out.base, proto::make_agents(out.base, P), cfg.decentralized.N1,
                    cfg.decentralized.N2, derive_seed(protocol_seed(cfg), l));
                // protocol estimate is proportional to the eigenvector; normalize
                std::vector<double> y = eig.y;
                double ny = 0.0;
                for (double v : y) ny += v * v;
                ny = std::sqrt(ny);
                if (ny > 0.0)
                    for (double& v : y) v /= ny;
                const std::vector<double> Py = P.matvec(y);
                double mean = 0.0;
                for (double v : y) mean += v;
                mean /= out.base.n;
                double rayleigh = 0.0;
                for (int i = 0; i < out.base.n; ++i) rayleigh += y[i] * (Py[i] - mean);
                double phi = out.base.n * rayleigh;
                for (int i = 0; i < K; ++i)
                    phi += out.problem.gamma * out.problem.costs[i] * w[i];
                if (l == 0 || phi < best_phi) {
                    best_phi = phi;
                    best_w = w;
                }
                if (l == cfg.design.iters) break;
                const double kappa = cfg.design.step_scale / std::sqrt(static_cast<double>(l + 1));
                w = proto::decentralized_subgradient_round(std::move(w), kappa, out.problem.gamma,
                                                           out.problem.costs, y,
                                                           out.problem.candidates);
            }
            out.selection.w_relaxed = best_w;
            out.selection.w_binary = design::round_selection(best_w, mode, opts.rho, cfg.design.k);
            for (int l = 0; l < K; ++l)
                if (out.selection.w_binary[l])
                    out.selection.selected_edges.push_back(out.problem.candidates[l]);
        } else {
            out.selection = design::projected_subgradient_solve(out.problem, opts);
        }
    } else {
        throw std::runtime_error("design method must be 'subgradient' or 'greedy'");
    }
    return out;
}

PreparedRun prepare_run(const ExperimentConfig& cfg, const Graph& base,
                        const std::vector<EdgeVec>& selected,
                        const std::vector<EdgeVec>& pick_order, long delta,
                        int delta_max_override) {
    PreparedRun prep;
    if (cfg.schedule.ordering == "greedy")
        prep.order = engine::greedy_schedule(selected, base, design_seed(cfg));
    else if (cfg.schedule.ordering == "as-given")
        prep.order = pick_order.empty() ? selected : pick_order;
    else
        throw std::runtime_error("schedule ordering must be 'greedy' or 'as-given'");

    engine::ScheduleSpec spec;
    spec.selected = prep.order;
    spec.ordering = engine::Ordering::as_given;
    spec.delta = delta;
    prep.additions = engine::materialize_schedule(spec, cfg.dda.T, base);
    prep.timeline = engine::build_timeline(base, prep.additions, delta_max_override);

    std::vector<Edge> applied;
    std::vector<long> times;
    for (const auto& [t, e] : prep.additions) {
        times.push_back(t);
        applied.push_back(e);
    }
    if (base.n >= 3)
        prep.terms = theory::spread_terms(
            theory::per_addition_terms(base, applied, prep.timeline.delta_max), times, cfg.dda.T);
    return prep;
}

RunSet run_trials(const ExperimentConfig& cfg, const PreparedRun& prep, int trials) {
    RunSet rs;
    for (int trial = 0; trial < trials; ++trial) {
        const uint64_t ts = trial_seed(cfg.seed, trial);
        const auto inst = engine::random_l1_instance(cfg.graph.n, cfg.dda.p, cfg.dda.R, ts);
        const auto oracle = engine::reference_optimum(inst, 1000000, derive_seed(ts, kOracleRole));
        engine::RunOpts opts;
        opts.T = cfg.dda.T;
        opts.checkpoint_every = cfg.dda.checkpoint_every;
        opts.f_star = oracle.f_star;
        rs.trajectories.push_back(engine::run_dda(inst, prep.timeline, opts));
        rs.f_stars.push_back(oracle.f_star);
    }
    const auto& first = rs.trajectories.front().rows;
    rs.checkpoint_times.resize(first.size());
    for (size_t c = 0; c < first.size(); ++c) rs.checkpoint_times[c] = first[c].t;
    rs.regret_mean.assign(first.size(), 0.0);
    rs.regret_max.assign(first.size(), 0.0);
    std::vector<double> at_T;
    for (const auto& traj : rs.trajectories) {
        for (size_t c = 0; c < traj.rows.size(); ++c) {
            rs.regret_mean[c] += traj.rows[c].max_regret / static_cast<double>(trials);
            rs.regret_max[c] = std::max(rs.regret_max[c], traj.rows[c].max_regret);
        }
        at_T.push_back(traj.rows.back().max_regret);
    }
    rs.regret_at_T_mean = mean_of(at_T);
    rs.regret_at_T_stderr = stderr_of(at_T);
    return rs;
}

std::vector<long> convergence_times(const RunSet& runs, double eps) {
    std::vector<long> out;
    for (const auto& traj : runs.trajectories) {
        long t = traj.T;
        for (const auto& row : traj.rows)
            if (row.max_regret <= eps) {
                t = row.t;
                break;
            }
        out.push_back(t);
    }
    return out;
}

namespace {

int sweep_delta_max(const Graph& base, const std::vector<std::vector<EdgeVec>>& per_row_edges) {
    std::set<std::pair<int, int>> uni;
    for (Edge e : base.edges) uni.emplace(e.i, e.j);
    for (const auto& row : per_row_edges)
        for (const EdgeVec& e : row) uni.emplace(e.i, e.j);
    std::vector<Edge> edges;
    for (const auto& [i, j] : uni) edges.push_back(Edge{i, j});
    return max_degree(make_graph(base.n, std::move(edges)));
}

double selected_cost(const design::SelectionProblem& prob, const std::vector<EdgeVec>& edges) {
    double c = 0.0;
    for (const EdgeVec& e : edges) c += prob.costs[e.index];
    return c;
}

struct TrialData {
    std::vector<engine::ProblemInstance> instances;
    std::vector<double> f_stars;
};

TrialData make_trials(const ExperimentConfig& cfg) {
    TrialData td;
    for (int trial = 0; trial < cfg.dda.trials; ++trial) {
        const uint64_t ts = trial_seed(cfg.seed, trial);
        td.instances.push_back(engine::random_l1_instance(cfg.graph.n, cfg.dda.p, cfg.dda.R, ts));
        td.f_stars.push_back(
            engine::reference_optimum(td.instances.back(), 1000000, derive_seed(ts, kOracleRole))
                .f_star);
    }
    return td;
}

struct RowRuns {
    std::vector<engine::Trajectory> trajectories;
    double regret_mean = 0.0, regret_stderr = 0.0;
};

RowRuns run_row(const ExperimentConfig& cfg, const PreparedRun& prep, const TrialData& td) {
    RowRuns rr;
    std::vector<double> at_T;
    for (size_t trial = 0; trial < td.instances.size(); ++trial) {
        engine::RunOpts opts;
        opts.T = cfg.dda.T;
        opts.checkpoint_every = cfg.dda.checkpoint_every;
        opts.f_star = td.f_stars[trial];
        rr.trajectories.push_back(engine::run_dda(td.instances[trial], prep.timeline, opts));
        at_T.push_back(rr.trajectories.back().rows.back().max_regret);
    }
    rr.regret_mean = mean_of(at_T);
    rr.regret_stderr = stderr_of(at_T);
    return rr;
}

SweepRow base_row(const ExperimentConfig& cfg, double axis, const PreparedRun& prep,
                  const RowRuns& rr, const engine::ProblemInstance& any_inst,
                  theory::MixingTimeResult* mix_out) {
    SweepRow row;
    row.axis = axis;
    row.regret_mean = rr.regret_mean;
    row.regret_stderr = rr.regret_stderr;
    const double s0 = prep.timeline.sigma2_P0();
    const auto mix = theory::solve_mixing_time(prep.terms, s0, cfg.dda.T, cfg.graph.n);
    row.delta_star = mix.delta_star;
    row.thm2_bound =
        theory::thm2_bound(cfg.dda.R, any_inst.lipschitz, s0, mix.delta_star, cfg.dda.T);
    row.edges_added = static_cast<long>(prep.additions.size());
    if (mix_out != nullptr) *mix_out = mix;
    return row;
}

}  // namespace

SweepOutput sweep_gamma(const ExperimentConfig& cfg, const std::vector<double>& gammas) {
    if (gammas.empty()) throw std::invalid_argument("sweep_gamma: empty gamma list");
    SweepOutput out;
    std::vector<DesignOutput> designs;
    std::vector<std::vector<EdgeVec>> per_row;
    for (double gamma : gammas) {
        ExperimentConfig c = cfg;
        c.design.gamma = gamma;
        designs.push_back(run_design(c));
        per_row.push_back(designs.back().selection.selected_edges);
    }
    const Graph& base = designs.front().base;
    const int dmax = sweep_delta_max(base, per_row);
    const TrialData td = make_trials(cfg);
    for (size_t r = 0; r < gammas.size(); ++r) {
        const PreparedRun prep = prepare_run(cfg, base, per_row[r], designs[r].pick_order,
                                             cfg.schedule.Delta, dmax);
        const RowRuns rr = run_row(cfg, prep, td);
        SweepRow row = base_row(cfg, gammas[r], prep, rr, td.instances.front(), nullptr);
        row.cost_total = selected_cost(designs[r].problem, per_row[r]);
        out.rows.push_back(row);

        SweepExtra ex;
        std::vector<double> w(designs[r].problem.candidates.size(), 0.0);
        for (const EdgeVec& e : per_row[r]) w[e.index] = 1.0;
        const SymMatrix L = design::weighted_laplacian(designs[r].problem, w);
        const auto eigs = full_spectrum(L);
        ex.distance = base.n - eigs[base.n - 2].value;
        ex.sigma2_P0 = prep.timeline.sigma2_P0();
        ex.prop3_scale = theory::prop3_convergence_time(0.1, ex.sigma2_P0, prep.terms);
        for (double v : prep.terms) ex.total_terms += v;
        out.extra.push_back(ex);
    }
    return out;
}

SweepOutput sweep_delta(const ExperimentConfig& cfg, const std::vector<long>& deltas, double eps) {
    if (deltas.empty()) throw std::invalid_argument("sweep_delta: empty Delta list");
    SweepOutput out;
    const DesignOutput des = run_design(cfg);
    // the schedule order is Delta-independent; fix it once
    const std::vector<EdgeVec> order =
        cfg.schedule.ordering == "as-given" && !des.pick_order.empty()
            ? des.pick_order
            : engine::greedy_schedule(des.selection.selected_edges, des.base, design_seed(cfg));
    const int dmax = sweep_delta_max(des.base, {order});
    const std::vector<double> per_add =
        des.base.n >= 3 ? theory::per_addition_terms(
                              des.base,
                              [&] {
                                  std::vector<Edge> es;
                                  for (const EdgeVec& e : order) es.push_back(to_edge(e));
                                  return es;
                              }(),
                              dmax)
                        : std::vector<double>{};
    const TrialData td = make_trials(cfg);
    for (long delta : deltas) {
        if (delta < 1 || delta > cfg.dda.T)
            throw std::invalid_argument("sweep_delta: Delta outside [1, T]");
        PreparedRun prep;
        prep.order = order;
        engine::ScheduleSpec spec;
        spec.selected = order;
        spec.ordering = engine::Ordering::as_given;
        spec.delta = delta;
        prep.additions = engine::materialize_schedule(spec, cfg.dda.T, des.base);
        prep.timeline = engine::build_timeline(des.base, prep.additions, dmax);
        std::vector<long> times;
        for (const auto& [t, e] : prep.additions) times.push_back(t);
        prep.terms = theory::spread_terms(
            std::vector<double>(per_add.begin(), per_add.begin() + prep.additions.size()), times,
            cfg.dda.T);

        const RowRuns rr = run_row(cfg, prep, td);
        SweepRow row = base_row(cfg, static_cast<double>(delta), prep, rr, td.instances.front(),
                                nullptr);
        row.cost_total = selected_cost(
            des.problem,
            std::vector<EdgeVec>(prep.order.begin(), prep.order.begin() + prep.additions.size()));
        out.rows.push_back(row);

        SweepExtra ex;
        ex.sigma2_P0 = prep.timeline.sigma2_P0();
        RunSet rs;
        rs.trajectories = rr.trajectories;
        double ct = 0.0;
        for (long v : convergence_times(rs, eps)) ct += static_cast<double>(v);
        ex.conv_time_mean = ct / static_cast<double>(rr.trajectories.size());
        ex.prop3_scale = theory::prop3_convergence_time(eps, ex.sigma2_P0, prep.terms);
        for (double v : prep.terms) ex.total_terms += v;
        out.extra.push_back(ex);
    }
    return out;
}

SweepOutput sweep_budget(const ExperimentConfig& cfg, const std::vector<long>& budgets) {
    if (budgets.empty()) throw std::invalid_argument("sweep_budget: empty budget list");
    SweepOutput out;
    ExperimentConfig c = cfg;
    c.design.method = "greedy";
    c.design.k = static_cast<int>(*std::max_element(budgets.begin(), budgets.end()));
    const DesignOutput des = run_design(c);
    const std::vector<EdgeVec>& full_order = des.pick_order;
    const int dmax = sweep_delta_max(des.base, {full_order});
    std::vector<Edge> full_edges;
    for (const EdgeVec& e : full_order) full_edges.push_back(to_edge(e));
    const std::vector<double> per_add = theory::per_addition_terms(des.base, full_edges, dmax);
    const TrialData td = make_trials(cfg);
    for (long budget : budgets) {
        if (budget < 0 || budget > static_cast<long>(full_order.size()))
            throw std::invalid_argument("sweep_budget: budget exceeds the candidate pool");
        PreparedRun prep;
        prep.order.assign(full_order.begin(), full_order.begin() + budget);
        engine::ScheduleSpec spec;
        spec.selected = prep.order;
        spec.ordering = engine::Ordering::as_given;
        spec.delta = cfg.schedule.Delta;
        prep.additions = engine::materialize_schedule(spec, cfg.dda.T, des.base);
        prep.timeline = engine::build_timeline(des.base, prep.additions, dmax);
        std::vector<long> times;
        for (const auto& [t, e] : prep.additions) times.push_back(t);
        prep.terms = theory::spread_terms(
            std::vector<double>(per_add.begin(), per_add.begin() + prep.additions.size()), times,
            cfg.dda.T);

        const RowRuns rr = run_row(cfg, prep, td);
        SweepRow row = base_row(cfg, static_cast<double>(budget), prep, rr, td.instances.front(),
                                nullptr);
        row.cost_total = selected_cost(des.problem, prep.order);
        out.rows.push_back(row);

        SweepExtra ex;
        ex.sigma2_P0 = prep.timeline.sigma2_P0();
        ex.prop3_scale = theory::prop3_convergence_time(0.1, ex.sigma2_P0, prep.terms);
        for (double v : prep.terms) ex.total_terms += v;
        ex.distance = cfg.graph.n - prep.timeline.segments.back().lambda_n1;
        out.extra.push_back(ex);
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f) throw std::runtime_error("cannot open " + tmp);
        f << content;
        if (!f.good()) throw std::runtime_error("write failure on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed for " + path);
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "axis,regret_mean,regret_stderr,thm2_bound,delta_star,edges_added,cost_total\n";
    for (const SweepRow& r : rows)
        os << fmt(r.axis) << "," << fmt(r.regret_mean) << "," << fmt(r.regret_stderr) << ","
           << fmt(r.thm2_bound) << "," << r.delta_star << "," << r.edges_added << ","
           << fmt(r.cost_total) << "\n";
    write_file_atomic(path, os.str());
}

void write_theory_csv(const std::string& path, const theory::BoundReport& rep,
                      const RunSet& runs) {
    std::ostringstream os;
    os << "delta_star,beta_star,net_bound,thm2_bound_at_T,prop3_scale,t,regret_mean,regret_max,"
          "thm2_bound_t\n";
    for (size_t c = 0; c < runs.checkpoint_times.size(); ++c) {
        os << rep.mixing.delta_star << "," << fmt(rep.mixing.beta_star) << ","
           << fmt(rep.net_bound) << "," << fmt(rep.thm2_bound_at_T) << "," << fmt(rep.prop3_scale)
           << "," << runs.checkpoint_times[c] << "," << fmt(runs.regret_mean[c]) << ","
           << fmt(runs.regret_max[c]) << "," << fmt(rep.thm2_bound_series[c].second) << "\n";
    }
    write_file_atomic(path, os.str());
}

}  // namespace ddanet::harness
