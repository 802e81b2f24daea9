#include "faircls/meta.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace faircls {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Rho: return "rho";
        case Variant::Delta: return "delta";
        case Variant::Meta2: return "meta2";
    }
    return "rho";
}

Variant variant_from_string(const std::string& s) {
    if (s == "rho") return Variant::Rho;
    if (s == "delta") return Variant::Delta;
    if (s == "meta2") return Variant::Meta2;
    throw std::invalid_argument("variant must be rho, delta or meta2, got '" + s + "'");
}

void MetaConfig::validate() const {
    if (metrics.empty()) throw std::invalid_argument("at least one metric is required");
    if (metrics.size() != tau.size()) throw std::invalid_argument("one tau per metric is required");
    if (!attributes.empty() && attributes.size() != metrics.size())
        throw std::invalid_argument("one attribute per metric is required");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
    for (double t : tau) {
        if (variant == Variant::Delta ? (t < -1.0 || t > 0.0) : (t < 0.0 || t > 1.0))
            throw std::invalid_argument("tau out of range for the variant");
    }
    if (variant == Variant::Meta2) {
        if (metrics.size() != 1) throw std::invalid_argument("meta2 takes exactly one metric");
        if (is_fractional_metric(metrics[0])) throw std::invalid_argument("meta2 requires a linear metric");
    }
}

namespace {

int steps(double span, double eps) {
    // ceil(span/eps) robust to representation error in span/eps
    return static_cast<int>(std::ceil(span / eps - 1e-9));
}

}  // namespace

std::vector<GridCell> build_grid_rho(double tau, double epsilon) {
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("rho grid needs tau in [0, 1]");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
    if (tau == 0.0) return {GridCell{{0.0}, {1.0}, {0}}};
    const int T = steps(tau, epsilon);
    std::vector<GridCell> out;
    for (int i = 1; i <= T; ++i)
        out.push_back({{(i - 1) * epsilon}, {std::min(1.0, i * epsilon / tau)}, {i - 1}});
    return out;
}

std::vector<GridCell> build_grid_delta(double tau, double epsilon) {
    if (tau < -1.0 || tau > 0.0) throw std::invalid_argument("delta grid needs tau in [-1, 0]");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1]");
    if (tau == -1.0) return {GridCell{{0.0}, {1.0}, {0}}};
    const int T = steps(1.0 + tau, epsilon);
    std::vector<GridCell> out;
    for (int i = 1; i <= T; ++i)
        out.push_back({{(i - 1) * epsilon}, {std::min(1.0, i * epsilon - tau)}, {i - 1}});
    return out;
}

std::vector<GridCell> build_grid_multi(const std::vector<double>& tau, double epsilon, Variant variant,
                                       int max_metrics, std::size_t max_cells) {
    if (tau.empty()) throw std::invalid_argument("no metrics");
    if (static_cast<int>(tau.size()) > max_metrics)
        throw std::invalid_argument("too many metrics for a product grid; the grid grows as eps^-m, use fewer "
                                    "metrics or a larger epsilon");
    std::vector<std::vector<GridCell>> per;
    std::size_t total = 1;
    for (double t : tau) {
        per.push_back(variant == Variant::Delta ? build_grid_delta(t, epsilon) : build_grid_rho(t, epsilon));
        total *= per.back().size();
    }
    if (total > max_cells)
        throw std::invalid_argument("product grid has " + std::to_string(total) +
                                    " cells, above the limit; use a larger epsilon");
    std::vector<GridCell> out{GridCell{}};
    for (const auto& g : per) {
        std::vector<GridCell> next;
        for (const auto& prefix : out) {
            for (const auto& c : g) {
                GridCell n = prefix;
                n.a.push_back(c.a[0]);
                n.b.push_back(c.b[0]);
                n.index.push_back(c.index[0]);
                next.push_back(std::move(n));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<PerfSpec> resolve_metrics(const MetaConfig& cfg, const ExpectationPool& pool) {
    std::vector<PerfSpec> specs;
    for (std::size_t m = 0; m < cfg.metrics.size(); ++m)
        specs.push_back(catalog_metric(cfg.metrics[m], pool, cfg.attributes.empty() ? 0 : cfg.attributes[m]));
    return specs;
}

bool guarantee_holds(const QVector& q, double tau, double epsilon, Variant variant, double slack) {
    if (q.defined_count() == 0) return true;
    double mn = 0.0, mx = 0.0;
    bool any = false;
    for (int g = 0; g < q.size(); ++g) {
        if (!q.defined[g]) continue;
        mn = any ? std::min(mn, q.value[g]) : q.value[g];
        mx = any ? std::max(mx, q.value[g]) : q.value[g];
        any = true;
    }
    if (variant == Variant::Delta) return mn - mx >= tau - epsilon - slack;
    return mn >= tau * mx - epsilon - slack;
}

MetaResult run_meta(std::shared_ptr<const Oracle> oracle, const ExpectationPool& pool, const MetaConfig& cfg) {
    cfg.validate();
    const std::vector<PerfSpec> specs = resolve_metrics(cfg, pool);

    std::vector<GridCell> grid;
    if (cfg.variant == Variant::Meta2) grid.push_back(GridCell{{cfg.tau[0]}, {1.0}, {0}});
    else grid = build_grid_multi(cfg.tau, cfg.epsilon, cfg.variant, cfg.max_metrics, cfg.max_cells);

    const double tol = cfg.solver.tolerance_for(pool);
    std::vector<CellOutcome> outcomes(grid.size());
    std::vector<std::optional<ThresholdClassifier>> classifiers(grid.size());

    auto work = [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        SolverConfig sc = cfg.solver;
        sc.seed = cfg.solver.seed + i;
        SolveResult r;
        if (cfg.variant == Variant::Meta2) {
            r = solve_meta2(oracle, pool, specs[0], cfg.tau[0], sc);
        } else {
            std::vector<int> groups;
            for (const auto& s : specs) groups.push_back(s.groups);
            r = solve_group_fair(oracle, pool, specs, FairnessBox::uniform(groups, grid[i].a, grid[i].b), sc);
        }
        CellOutcome& out = outcomes[i];
        out.cell = grid[i];
        out.status = r.status;
        out.max_violation = r.max_violation;
        out.solved = r.feasible();
        if (r.feasible()) {
            const Eigen::VectorXd f = r.classifier->label_pool(pool);
            out.error = pool.error(f);
            out.guarantee = true;
            for (std::size_t m = 0; m < specs.size(); ++m) {
                out.q.push_back(eval_q(specs[m], pool, f));
                const double eps = cfg.variant == Variant::Meta2 ? tol : cfg.epsilon;
                out.guarantee = out.guarantee && guarantee_holds(out.q.back(), cfg.tau[m], eps, cfg.variant);
            }
            classifiers[i] = std::move(r.classifier);
        }
        out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    unsigned jobs = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs) : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(grid.size()));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> pool_threads;
        for (unsigned j = 0; j < jobs; ++j) {
            pool_threads.emplace_back([&, j] {
                try {
                    for (std::size_t i; (i = next.fetch_add(1)) < grid.size();) work(i);
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            });
        }
        for (auto& t : pool_threads) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    RunReport report;
    report.cells = outcomes;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& o = outcomes[i];
        if (!o.solved || !o.guarantee) continue;
        if (report.chosen < 0 || o.error < outcomes[report.chosen].error) report.chosen = static_cast<int>(i);
    }
    if (report.chosen < 0) throw AllCellsInfeasible(std::move(report));

    const auto& best = outcomes[report.chosen];
    report.error = best.error;
    report.q = best.q;
    report.guarantee = best.guarantee;
    for (const auto& q : best.q) {
        if (q.defined_count() == 0) report.fairness.push_back(cfg.variant == Variant::Delta ? 0.0 : 1.0);
        else report.fairness.push_back(cfg.variant == Variant::Delta ? delta(q).value : rho(q).value);
    }
    MetaResult res{std::move(*classifiers[report.chosen]), std::move(report)};
    if (cfg.variant != Variant::Meta2) res.classifier.tau = cfg.tau.size() == 1 ? std::optional<double>(cfg.tau[0]) : std::nullopt;
    return res;
}

MetaResult run_meta(const std::vector<Sample>& train, const SensitiveLayout& layout, const MetaConfig& cfg,
                    std::size_t pool_draws, std::uint64_t pool_seed) {
    if (train.empty()) throw std::invalid_argument("run_meta: no training samples");
    auto gnb = std::make_shared<const GnbJointDistribution>(fit_gnb(train, layout));
    ExpectationPool pool = make_pool(*gnb, cfg.mode, pool_draws, pool_seed);
    return run_meta(gnb, pool, cfg);
}

}  // namespace faircls
