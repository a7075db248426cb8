#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ddanet/harness.hpp"
#include "ddanet/rng.hpp"

using namespace ddanet;
namespace hn = ddanet::harness;

namespace {

hn::ExperimentConfig tiny_config() {
    hn::ExperimentConfig cfg;
    cfg.seed = 3;
    cfg.graph.n = 12;
    cfg.graph.radius = 0.45;
    cfg.design.method = "greedy";
    cfg.design.gamma = 0.01;
    cfg.design.k = 6;
    cfg.design.iters = 60;
    cfg.schedule.Delta = 1;
    cfg.dda.T = 400;
    cfg.dda.p = 3;
    cfg.dda.trials = 3;
    cfg.dda.checkpoint_every = 20;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config files parse and reject unknown keys") {
    {
        std::ofstream f("cfg_ok.json");
        f << R"({"seed": 9, "graph": {"n": 10, "radius": 0.4},
                 "design": {"method": "greedy", "k": 3},
                 "dda": {"T": 100, "trials": 2}})";
    }
    const auto cfg = hn::load_config("cfg_ok.json");
    CHECK(cfg.seed == 9);
    CHECK(cfg.graph.n == 10);
    CHECK(cfg.design.k == 3);
    CHECK(cfg.dda.T == 100);
    CHECK(cfg.cost.tau1 == 10.0);  // untouched defaults
    std::remove("cfg_ok.json");

    {
        std::ofstream f("cfg_bad.json");
        f << R"({"seed": 9, "grpah": {"n": 10}})";
    }
    CHECK_THROWS(hn::load_config("cfg_bad.json"));
    std::remove("cfg_bad.json");

    {
        std::ofstream f("cfg_bad2.json");
        f << R"({"dda": {"T": 100, "warmup": 5}})";
    }
    CHECK_THROWS(hn::load_config("cfg_bad2.json"));
    std::remove("cfg_bad2.json");

    {
        std::ofstream f("cfg_bad3.json");
        f << R"({"schedule": {"Delta": 0}})";
    }
    CHECK_THROWS(hn::load_config("cfg_bad3.json"));
    std::remove("cfg_bad3.json");
}

TEST_CASE("scale presets") {
    hn::ExperimentConfig cfg;
    hn::apply_scale(cfg, "paper");
    CHECK(cfg.graph.n == 100);
    CHECK(cfg.dda.T == 20000);
    hn::apply_scale(cfg, "desk");
    CHECK(cfg.graph.n == 50);
    CHECK(cfg.dda.T == 5000);
    CHECK_THROWS(hn::apply_scale(cfg, "huge"));
}

TEST_CASE("trial seeds are index-stable") {
    const uint64_t s10 = hn::trial_seed(42, 10);
    for (int i = 0; i < 10; ++i) (void)hn::trial_seed(42, i);
    CHECK(hn::trial_seed(42, 10) == s10);  // independent of how many were drawn
    CHECK(hn::trial_seed(42, 10) != hn::trial_seed(42, 11));
    CHECK(hn::trial_seed(42, 10) != hn::trial_seed(43, 10));
}

TEST_CASE("design pipeline produces valid selections") {
    auto cfg = tiny_config();
    const auto des = hn::run_design(cfg);
    CHECK(des.base.n == cfg.graph.n);
    CHECK(static_cast<int>(des.pick_order.size()) == cfg.design.k);
    for (const EdgeVec& e : des.selection.selected_edges) {
        CHECK(e.index >= 0);
        CHECK(e.index < static_cast<int>(des.problem.candidates.size()));
        CHECK(des.problem.candidates[e.index].i == e.i);
    }
    cfg.design.method = "subgradient";
    cfg.design.mode = "C1";
    const auto des2 = hn::run_design(cfg);
    CHECK(des2.pick_order.empty());
    CHECK(des2.selection.w_relaxed.size() == des2.problem.candidates.size());
}

TEST_CASE("prepared schedules add one edge per interval") {
    auto cfg = tiny_config();
    cfg.schedule.Delta = 7;
    const auto des = hn::run_design(cfg);
    const auto prep = hn::prepare_run(cfg, des.base, des.selection.selected_edges,
                                      des.pick_order, cfg.schedule.Delta, 0);
    REQUIRE(!prep.additions.empty());
    for (size_t q = 0; q < prep.additions.size(); ++q)
        CHECK(prep.additions[q].first == static_cast<long>(q) * 7 + 1);
    CHECK(prep.timeline.segments.size() == prep.additions.size() + 1);
    // terms live at the addition times
    for (const auto& [t, e] : prep.additions) CHECK(prep.terms[t - 1] >= 0.0);
}

TEST_CASE("trials share instances across rows and regret stays almost nonnegative") {
    auto cfg = tiny_config();
    const auto des = hn::run_design(cfg);
    const auto prep = hn::prepare_run(cfg, des.base, des.selection.selected_edges,
                                      des.pick_order, cfg.schedule.Delta, 0);
    const auto runs = hn::run_trials(cfg, prep, cfg.dda.trials);
    REQUIRE(runs.trajectories.size() == 3);
    CHECK(runs.checkpoint_times.back() == cfg.dda.T);
    for (const auto& traj : runs.trajectories)
        for (const auto& row : traj.rows) CHECK(row.max_regret >= -1e-6);
    const auto conv = hn::convergence_times(runs, 1e9);
    for (long t : conv) CHECK(t == runs.checkpoint_times.front());  // immediately converged
    const auto never = hn::convergence_times(runs, -1.0);
    for (long t : never) CHECK(t == cfg.dda.T);  // censored at the horizon
}

TEST_CASE("gamma sweep recovers the selection tradeoff") {
    auto cfg = tiny_config();
    cfg.design.method = "subgradient";
    cfg.design.iters = 120;
    cfg.dda.trials = 2;
    cfg.dda.T = 200;
    const auto sw = hn::sweep_gamma(cfg, {0.0, 0.5, 50.0});
    REQUIRE(sw.rows.size() == 3);
    // no penalty: every beneficial candidate enters; harsh penalty: none do
    CHECK(sw.rows[0].edges_added >= sw.rows[2].edges_added);
    CHECK(sw.rows[2].edges_added == 0);
    CHECK(sw.extra[0].distance <= sw.extra[1].distance + 1e-9);
    CHECK(sw.extra[1].distance <= sw.extra[2].distance + 1e-9);
    // cost shrinks along with the selection
    CHECK(sw.rows[0].cost_total >= sw.rows[2].cost_total);
}

TEST_CASE("budget sweep is monotone in the mixing time") {
    auto cfg = tiny_config();
    cfg.dda.trials = 2;
    cfg.dda.T = 300;
    const auto sw = hn::sweep_budget(cfg, {0, 3, 6});
    REQUIRE(sw.rows.size() == 3);
    CHECK(sw.rows[0].edges_added == 0);
    CHECK(sw.rows[1].edges_added == 3);
    CHECK(sw.rows[2].edges_added == 6);
    CHECK(sw.rows[1].delta_star <= sw.rows[0].delta_star);
    CHECK(sw.rows[2].delta_star <= sw.rows[1].delta_star);
    // shared delta_max keeps sigma2(P0) comparable across rows
    CHECK(sw.extra[0].sigma2_P0 == sw.extra[2].sigma2_P0);
    CHECK(sw.rows[0].cost_total == 0.0);
    CHECK(sw.rows[2].cost_total > sw.rows[1].cost_total);
}

TEST_CASE("delta sweep reports schedules and scales") {
    auto cfg = tiny_config();
    cfg.design.k = 5;
    cfg.dda.trials = 2;
    cfg.dda.T = 300;
    const auto sw = hn::sweep_delta(cfg, {1, 30, 300}, 0.1);
    REQUIRE(sw.rows.size() == 3);
    CHECK(sw.rows[0].edges_added >= sw.rows[1].edges_added);
    CHECK(sw.rows[1].edges_added >= sw.rows[2].edges_added);
    CHECK(sw.rows[2].edges_added == 1);  // Delta = T schedules exactly one edge
    // more schedule mass, smaller convergence-time scale
    for (size_t a = 0; a < 3; ++a)
        for (size_t b = 0; b < 3; ++b)
            if (sw.extra[a].total_terms >= sw.extra[b].total_terms)
                CHECK(sw.extra[a].prop3_scale <= sw.extra[b].prop3_scale + 1e-12);
    CHECK_THROWS(hn::sweep_delta(cfg, {0}, 0.1));
}

TEST_CASE("sweep CSV carries the documented schema and is deterministic") {
    auto cfg = tiny_config();
    cfg.dda.trials = 2;
    cfg.dda.T = 200;
    const auto sw1 = hn::sweep_budget(cfg, {0, 4});
    const auto sw2 = hn::sweep_budget(cfg, {0, 4});
    hn::write_sweep_csv("sweep_a.csv", sw1.rows);
    hn::write_sweep_csv("sweep_b.csv", sw2.rows);
    const std::string a = slurp("sweep_a.csv");
    CHECK(a == slurp("sweep_b.csv"));  // byte-identical replay
    CHECK(a.rfind("axis,regret_mean,regret_stderr,thm2_bound,delta_star,edges_added,cost_total\n",
                  0) == 0);
    std::remove("sweep_a.csv");
    std::remove("sweep_b.csv");
}

TEST_CASE("theory CSV pairs bounds with empirical checkpoints") {
    auto cfg = tiny_config();
    cfg.dda.trials = 2;
    cfg.dda.T = 200;
    const auto des = hn::run_design(cfg);
    const auto prep = hn::prepare_run(cfg, des.base, des.selection.selected_edges,
                                      des.pick_order, cfg.schedule.Delta, 0);
    const auto runs = hn::run_trials(cfg, prep, cfg.dda.trials);
    const auto inst = engine::random_l1_instance(cfg.graph.n, cfg.dda.p, cfg.dda.R,
                                                 hn::trial_seed(cfg.seed, 0));
    const auto rep = theory::make_bound_report(prep.terms, prep.timeline.sigma2_P0(), cfg.dda.T,
                                               cfg.graph.n, cfg.dda.R, inst.lipschitz, 0.1,
                                               runs.checkpoint_times);
    hn::write_theory_csv("theory_t.csv", rep, runs);
    const std::string content = slurp("theory_t.csv");
    CHECK(content.rfind("delta_star,beta_star,net_bound,thm2_bound_at_T,prop3_scale,t,"
                        "regret_mean,regret_max,thm2_bound_t\n",
                        0) == 0);
    int lines = 0;
    for (char c : content)
        if (c == '\n') ++lines;
    CHECK(lines == 1 + static_cast<int>(runs.checkpoint_times.size()));
    std::remove("theory_t.csv");
}

TEST_CASE("decentralized design path matches the structure of the centralized one") {
    auto cfg = tiny_config();
    cfg.graph.n = 8;
    cfg.design.k = 2;
    cfg.decentralized.enabled = true;
    cfg.decentralized.N1 = 150;
    cfg.decentralized.N2 = 300;
    const auto des = hn::run_design(cfg);
    CHECK(des.pick_order.size() == 2);
    for (const EdgeVec& e : des.pick_order)
        CHECK(des.problem.candidates[e.index].j == e.j);
}
