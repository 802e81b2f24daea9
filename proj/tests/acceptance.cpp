// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// all of them pass.
#include "support.hpp"

#include <faircls/data.hpp>
#include <faircls/experiment.hpp>
#include <faircls/meta.hpp>
#include <faircls/metrics.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace faircls;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    int failures = 0;

    void check(bool ok, const std::string& what) {
        if (ok) return;
        pass = false;
        if (failures++ < 5) detail << "\n    failed: " << what;
    }
};

std::function<int(const SupportPoint&)> labels_of(const ThresholdClassifier& clf) {
    return [&clf](const SupportPoint& p) { return clf.predict(p.x); };
}

bool rho_at_least(const QVector& q, double tau, double slack) {
    if (q.defined_count() == 0) return true;
    double mn = 1.0, mx = 0.0;
    for (int g = 0; g < q.size(); ++g) {
        if (!q.defined[g]) continue;
        mn = std::min(mn, q.value[g]);
        mx = std::max(mx, q.value[g]);
    }
    return mn >= tau * mx - slack;
}

Eigen::VectorXd random_theta(const ConstraintSystem& sys, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Eigen::VectorXd t(sys.size());
    for (int r = 0; r < sys.size(); ++r) t[r] = sys.blocks[r].free ? u(rng) : std::abs(u(rng));
    return t;
}

FairnessBox random_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd lo(2), hi(2);
    for (int g = 0; g < 2; ++g) {
        const double a = u(rng), b = u(rng);
        lo[g] = std::min(a, b);
        hi[g] = std::max(a, b);
    }
    return FairnessBox{{lo}, {hi}};
}

ExpectationPool pool_for(const DiscreteJointDistribution& d, const std::string& metric) {
    ExpectationPool pool = make_pool(d, Mode::GroupUnaware);
    if (metric == "csr") pool.attach_subset(FeatureSubset::parse("0>1.5"));
    return pool;
}

// 1 ------------------------------------------------------------------------

Outcome enumeration_optimality() {
    Outcome o;
    std::mt19937_64 rng(2024);
    int solved = 0;
    for (const auto& name : fx::fixture_names()) {
        auto d = fx::fixture(name);
        const auto xs = fx::distinct_x(*d);
        for (const auto& metric : catalog_names()) {
            const ExpectationPool pool = pool_for(*d, metric);
            const std::vector<PerfSpec> specs{catalog_metric(metric, pool)};
            for (int k = 0; k < 20; ++k) {
                // a box around a random labeling is feasible by construction
                const fx::Labeling f0{xs, static_cast<unsigned>(rng() % (1u << xs.size()))};
                const QVector q0 = fx::table_q(metric, *d, f0, pool.subset);
                std::uniform_real_distribution<double> slack(0.0, 0.15);
                Eigen::VectorXd lo(2), hi(2);
                for (int g = 0; g < 2; ++g) {
                    lo[g] = q0.defined[g] ? std::max(0.0, q0.value[g] - slack(rng)) : 0.0;
                    hi[g] = q0.defined[g] ? std::min(1.0, q0.value[g] + slack(rng)) : 1.0;
                }
                const FairnessBox box{{lo}, {hi}};
                const SolveResult r = solve_group_fair(d, pool, specs, box, {});
                const std::string tag = name + "/" + metric + "/box" + std::to_string(k);
                o.check(r.feasible(), tag + " reported infeasible");
                if (!r.feasible()) continue;
                const auto bf = fx::enumerate(*d, [&](const fx::Labeling& f) {
                    return fx::in_box(fx::table_q(metric, *d, f, pool.subset), lo, hi, 1e-12);
                });
                const auto f = labels_of(*r.classifier);
                o.check(fx::table_error(*d, f) <= bf.error + 1e-3, tag + " error above the enumeration optimum");
                o.check(fx::in_box(fx::table_q(metric, *d, f, pool.subset), lo, hi, 1e-6), tag + " outside its box");
                ++solved;
            }
        }
    }
    o.detail << solved << " boxes over " << fx::fixture_names().size() << " fixtures x " << catalog_names().size()
             << " metrics";
    return o;
}

// 2 ------------------------------------------------------------------------

Outcome meta_guarantee() {
    Outcome o;
    const double eps = 0.01;
    int runs = 0;
    for (const auto& name : fx::fixture_names()) {
        auto d = fx::fixture(name);
        const ExpectationPool pool = make_pool(*d, Mode::GroupUnaware);
        for (const std::string metric : {"sr", "tpr", "fdr"}) {
            for (int k = 1; k <= 10; ++k) {
                const double tau = k / 10.0;
                MetaConfig cfg;
                cfg.metrics = {metric};
                cfg.tau = {tau};
                cfg.epsilon = eps;
                const auto bf = fx::enumerate(
                    *d, [&](const fx::Labeling& g) { return rho_at_least(fx::table_q(metric, *d, g), tau, 1e-12); });
                const std::string tag = name + "/" + metric + "/tau" + std::to_string(tau).substr(0, 3);
                std::optional<MetaResult> res;
                try {
                    res = run_meta(d, pool, cfg);
                } catch (const AllCellsInfeasible&) {
                    o.check(!bf.feasible, tag + " no cell passed although a fair classifier exists");
                    continue;
                }
                ++runs;
                const auto f = labels_of(res->classifier);
                o.check(rho_at_least(fx::table_q(metric, *d, f), tau, eps + 1e-6), tag + " guarantee violated");
                if (bf.feasible)
                    o.check(fx::table_error(*d, f) <= bf.error + 1e-9, tag + " error above the fair optimum");
            }
        }
    }
    o.detail << runs << " runs (sr, tpr, fdr; tau 0.1..1.0)";
    return o;
}

// 3 ------------------------------------------------------------------------

struct Stat {
    std::vector<double> v;
    double mean() const {
        double s = 0;
        for (double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    }
    double sd() const {
        if (v.size() < 2) return 0.0;
        const double m = mean();
        double s = 0;
        for (double x : v) s += (x - m) * (x - m);
        return std::sqrt(s / static_cast<double>(v.size() - 1));
    }
};

std::string fmt(const Stat& s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f (%.3f)", s.mean(), s.sd());
    return buf;
}

double gamma_of(const MetricsReport& r, const std::string& m) {
    const auto& g = r.metrics.at(m);
    return g.gamma_defined ? g.gamma : 0.0;
}

Outcome adult_table() {
    Outcome o;
    const Dataset data = load_csv(std::string(FAIRCLS_DATA_DIR) + "/adult.csv", resolve_schema("adult"));
    struct Method {
        std::string name;
        std::vector<std::string> metrics;
        std::vector<double> tau;
        double eps;
        Stat acc, sr, fdr;
        bool all_guarantee = true;
    };
    std::vector<Method> methods{{"unconstrained", {"sr"}, {0.0}, 0.01},
                                {"sr", {"sr"}, {0.9}, 0.01},
                                {"fdr", {"fdr"}, {0.9}, 0.01},
                                {"sr+fdr", {"sr", "fdr"}, {0.7, 0.7}, 0.05}};
    for (int seed = 0; seed < 5; ++seed) {
        for (auto& m : methods) {
            ExperimentConfig cfg;
            cfg.meta.metrics = m.metrics;
            cfg.meta.tau = m.tau;
            cfg.meta.epsilon = m.eps;
            cfg.meta.solver.seed = static_cast<std::uint64_t>(seed);
            cfg.split = {0.7, static_cast<std::uint64_t>(seed), 0};
            const ExperimentResult r = run_experiment(data, cfg);
            m.all_guarantee = m.all_guarantee && r.classifier.has_value() && r.report.guarantee;
            m.acc.v.push_back(r.test.accuracy);
            m.sr.v.push_back(gamma_of(r.test, "sr"));
            m.fdr.v.push_back(gamma_of(r.test, "fdr"));
        }
    }
    for (const auto& m : methods)
        o.detail << "\n    " << m.name << ": acc " << fmt(m.acc) << "  gamma_sr " << fmt(m.sr) << "  gamma_fdr "
                 << fmt(m.fdr) << (m.all_guarantee ? "" : "  [a run had no certified cell]");
    const auto& un = methods[0];
    const auto& sr = methods[1];
    const auto& fdr = methods[2];
    const auto& both = methods[3];
    o.check(std::abs(un.acc.mean() - 0.83) <= 0.03, "unconstrained accuracy outside 0.83 +- 0.03");
    o.check(std::abs(un.fdr.mean() - 0.84) <= 0.12, "unconstrained gamma_fdr outside 0.84 +- 0.12");
    o.check(sr.sr.mean() >= 0.80, "sr: gamma_sr below 0.80");
    o.check(sr.acc.mean() >= 0.72, "sr: accuracy below 0.72");
    o.check(fdr.fdr.mean() >= 0.78, "fdr: gamma_fdr below 0.78");
    o.check(fdr.acc.mean() >= 0.80, "fdr: accuracy below 0.80");
    o.check(both.sr.mean() >= 0.65, "sr+fdr: gamma_sr below 0.65");
    o.check(both.fdr.mean() >= 0.60, "sr+fdr: gamma_fdr below 0.60");
    return o;
}

// 4 ------------------------------------------------------------------------

Outcome german_compas() {
    Outcome o;
    for (const auto& [name, need] : std::vector<std::pair<std::string, double>>{{"german", 0.90}, {"compas", 0.70}}) {
        const Dataset data = load_csv(std::string(FAIRCLS_DATA_DIR) + "/" + name + ".csv", resolve_schema(name));
        double best = 0.0, best_tau = 0.0;
        bool certified = true;
        for (int k = 1; k <= 10; ++k) {
            ExperimentConfig cfg;
            cfg.meta.metrics = {"fdr"};
            cfg.meta.tau = {k / 10.0};
            cfg.split = {0.7, 0, 0};
            const ExperimentResult r = run_experiment(data, cfg);
            if (!r.classifier || !r.report.guarantee) {
                certified = false;
                continue;
            }
            const double g = gamma_of(r.test, "fdr");
            if (g > best) best = g, best_tau = k / 10.0;
        }
        o.detail << "\n    " << name << ": max gamma_fdr " << best << " at tau " << best_tau;
        o.check(best >= need, name + " max gamma_fdr below " + std::to_string(need).substr(0, 4));
        o.check(certified, name + " a run ended without a certified cell");
    }
    return o;
}

// 5 ------------------------------------------------------------------------

Outcome error_identity() {
    Outcome o;
    std::mt19937_64 rng(55);
    double worst = 0.0;
    for (const auto& name : fx::fixture_names()) {
        auto d = fx::fixture(name);
        const ExpectationPool pool = make_pool(*d, Mode::GroupUnaware);
        const Eigen::VectorXd eta = pool.eta();
        const double pi = pool.w.dot(eta);
        const auto xs = fx::distinct_x(*d);
        for (int k = 0; k < 100; ++k) {
            const fx::Labeling f{xs, static_cast<unsigned>(rng() % (1u << xs.size()))};
            Eigen::VectorXd fv(pool.rows());
            for (Eigen::Index n = 0; n < pool.rows(); ++n) fv[n] = f.at(pool.x.row(n).transpose());
            const double rhs = pi + pool.w.dot((1.0 - 2.0 * eta.array()).matrix().cwiseProduct(fv));
            worst = std::max(worst, std::abs(fx::table_error(*d, f) - rhs));
        }
    }
    o.check(worst <= 1e-12, "identity off by more than 1e-12");
    o.detail << "max deviation " << worst;
    return o;
}

// 6 ------------------------------------------------------------------------

Outcome dual_properties() {
    Outcome o;
    std::mt19937_64 rng(66);
    std::normal_distribution<double> n01;
    double chord = 0.0, lower = 0.0;
    for (const auto& name : fx::fixture_names()) {
        auto d = fx::fixture(name);
        for (const auto& metric : catalog_names()) {
            const ExpectationPool pool = pool_for(*d, metric);
            const std::vector<PerfSpec> specs{catalog_metric(metric, pool)};
            const ConstraintSystem sys = build_system(specs, random_box(rng), d->layout());
            const PooledSystem ps(sys, pool);
            for (int k = 0; k < 1000; ++k) {
                const Eigen::VectorXd a = random_theta(sys, rng, 3.0), b = random_theta(sys, rng, 3.0);
                const double t = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                chord = std::max(chord, ps.dual(t * a + (1 - t) * b) - t * ps.dual(a) - (1 - t) * ps.dual(b));
            }
            for (int k = 0; k < 50; ++k) {
                const Eigen::VectorXd th = random_theta(sys, rng, 2.0);
                const Eigen::VectorXd g = ps.subgradient(th);
                Eigen::VectorXd dir(sys.size());
                for (int r = 0; r < sys.size(); ++r) dir[r] = n01(rng);
                Eigen::VectorXd moved = th + std::exp(n01(rng)) * dir;
                sys.project(moved);
                lower = std::max(lower, ps.dual(th) + g.dot(moved - th) - ps.dual(moved));
            }
        }
    }
    o.check(chord <= 1e-9, "chord violation above 1e-9");
    o.check(lower <= 1e-9, "subgradient inequality violated");
    o.detail << "chord " << chord << ", lower bound " << lower;

    // unbiasedness and the second-moment bound, 1e5 draws each
    int z_fail = 0, z_total = 0, bound_fail = 0, bound_total = 0;
    for (const auto& name : fx::fixture_names()) {
        auto d = fx::fixture(name);
        for (const auto& metric : catalog_names()) {
            const ExpectationPool pool = pool_for(*d, metric);
            const std::vector<PerfSpec> specs{catalog_metric(metric, pool)};
            const ConstraintSystem sys = build_system(specs, FairnessBox::uniform(2, 0.2, 0.8), d->layout());
            const PooledSystem ps(sys, pool);
            std::mt19937_64 trng(7);
            const Eigen::VectorXd th = random_theta(sys, trng, 1.5);
            const Eigen::VectorXd exact = ps.subgradient(th);
            Rng draw(1234);
            const int n = 100000;
            Eigen::VectorXd sum = Eigen::VectorXd::Zero(sys.size()), sq = Eigen::VectorXd::Zero(sys.size());
            double m2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const Eigen::VectorXd g =
                    stochastic_subgradient(sys, th, *d, d->draw(draw), Mode::GroupUnaware, pool.subset);
                sum += g;
                sq += g.cwiseProduct(g);
                m2 += g.squaredNorm();
            }
            const Eigen::VectorXd mean = sum / n;
            for (int r = 0; r < sys.size(); ++r) {
                const double var = std::max(0.0, sq[r] / n - mean[r] * mean[r]);
                ++z_total;
                if (std::abs(mean[r] - exact[r]) > 3.0 * std::sqrt(var / n) + 1e-9) ++z_fail;
            }
            if (!is_fractional_metric(metric)) {
                ++bound_total;
                if (m2 / n > subgradient_variance_bound(specs[0])) {
                    ++bound_fail;
                    o.check(false, name + "/" + metric + " second moment above the bound");
                }
            }
        }
    }
    // 3 sigma leaves about 0.27% of coordinates outside by chance alone
    o.check(z_fail <= std::max(1, z_total / 100), "too many coordinates outside 3 sigma");
    o.detail << "; unbiasedness " << z_total - z_fail << "/" << z_total << " within 3 sigma; second moment "
             << bound_total - bound_fail << "/" << bound_total << " under the bound";
    return o;
}

// 7 ------------------------------------------------------------------------

Outcome price() {
    Outcome o;
    double worst_gap = 0.0;
    int binding = 0;
    for (const auto& name : fx::fixture_names()) {
        auto d = fx::fixture(name);
        for (const std::string metric : {"sr", "tpr", "fpr"}) {
            const PriceReport zero = price_of_fairness(d, metric, FairnessBox::uniform(2, 0.0, 1.0));
            o.check(zero.f_direct == 0.0, name + "/" + metric + " F(0,1) is not zero");
            double prev = 0.0;
            for (double h : {0.4, 0.3, 0.2, 0.1, 0.05}) {
                PriceReport p;
                try {
                    p = price_of_fairness(d, metric, FairnessBox::uniform(2, 0.5 - h, 0.5 + h));
                } catch (const std::runtime_error&) {
                    break;  // narrower boxes stay infeasible
                }
                o.check(p.f_direct >= prev - 1e-9, name + "/" + metric + " price fell as the box shrank");
                prev = p.f_direct;
                if (p.f_direct > 1e-9) {
                    ++binding;
                    worst_gap = std::max(worst_gap, p.gap);
                }
            }
        }
    }
    o.check(binding > 0, "no binding box found");
    o.check(worst_gap <= 1e-3, "closed form and direct price differ by more than 1e-3");
    o.detail << binding << " binding boxes, max gap " << worst_gap;
    return o;
}

// 8 ------------------------------------------------------------------------

Outcome robustness() {
    Outcome o;
    const double eps = 0.02;
    int runs = 0;
    std::uint64_t seed = 80;
    for (const auto& name : fx::fixture_names()) {
        auto truth = fx::fixture(name);
        for (double delta : {0.005, 0.02}) {
            auto est = std::make_shared<const DiscreteJointDistribution>(fx::perturb(*truth, delta, seed++));
            const ExpectationPool pool = make_pool(*est, Mode::GroupUnaware);
            for (const std::string metric : {"sr", "tpr", "fpr"}) {
                const KappaTv kt = kappa_and_tv(*truth, *est, metric);
                for (double tau : {0.5, 0.8}) {
                    MetaConfig cfg;
                    cfg.metrics = {metric};
                    cfg.tau = {tau};
                    cfg.epsilon = eps;
                    // comparator: best classifier under the tightened rule min q >= tau max q + kappa,
                    // which keeps it admissible under the estimate
                    const auto best = fx::enumerate(*truth, [&](const fx::Labeling& g) {
                        return rho_at_least(fx::table_q(metric, *truth, g), tau, -kt.kappa + 1e-12);
                    });
                    std::optional<MetaResult> r;
                    try {
                        r = run_meta(est, pool, cfg);
                    } catch (const AllCellsInfeasible&) {
                        continue;
                    }
                    ++runs;
                    const auto f = labels_of(r->classifier);
                    const std::string tag = name + "/" + metric + "/delta" + std::to_string(delta);
                    if (best.feasible)
                        o.check(fx::table_error(*truth, f) <= best.error + 2 * kt.tv + 1e-6, tag + " error bound");
                    o.check(rho_at_least(fx::table_q(metric, *truth, f), tau, eps + kt.kappa + 1e-6),
                            tag + " fairness bound");
                }
            }
        }
    }
    o.check(runs > 0, "no run produced a classifier");
    o.detail << runs << " runs on perturbed fixtures";
    return o;
}

// 9 ------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FAIRCLS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / ("faircls_acc_" + std::to_string(::getpid()));
    const std::string fixture = fx::fixture_dir() + "/d2.json";
    const std::string data = std::string(FAIRCLS_DATA_DIR);
    const std::vector<std::pair<std::string, std::string>> commands{
        {"train-fixture", "train --fixture " + fixture + " --metric fdr --tau 0.7 --epsilon 0.05 --seed 3"},
        {"price", "price --fixture " + fixture + " --metric sr --box 0.3,0.7 --seed 3"},
        {"train-german", "train --data " + data + "/german.csv --schema german --metric sr --tau 0.8 --epsilon 0.05 "
                         "--pool-draws 20000 --jobs 4 --seed 5"},
        {"sweep-german", "sweep --data " + data + "/german.csv --schema german --metric sr --tau-grid 0.5:0.9:0.4 "
                         "--repetitions 2 --epsilon 0.1 --pool-draws 10000 --jobs 3 --seed 2"},
    };
    int files = 0;
    for (const auto& [tag, args] : commands) {
        for (const char* run : {"a", "b"}) {
            const int rc = run_cli(args + " --deterministic --out " + (root / tag / run).string());
            o.check(rc == 0, tag + " exited with " + std::to_string(rc));
        }
        for (const auto& entry : fs::directory_iterator(root / tag / "a")) {
            const fs::path other = root / tag / "b" / entry.path().filename();
            o.check(fs::exists(other) && slurp(entry.path()) == slurp(other),
                    tag + "/" + entry.path().filename().string() + " differs between runs");
            ++files;
        }
    }
    // eval of a stored model
    const std::string model = (root / "train-german" / "a" / "model.json").string();
    for (const char* run : {"a", "b"})
        run_cli("eval --model " + model + " --data " + data + "/german.csv --deterministic --out " +
                (root / "eval" / run).string());
    o.check(slurp(root / "eval" / "a" / "eval.json") == slurp(root / "eval" / "b" / "eval.json") &&
                !slurp(root / "eval" / "a" / "eval.json").empty(),
            "eval output differs between runs");
    ++files;
    fs::remove_all(root);
    o.detail << files << " files compared byte for byte";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    // optional: run a subset, e.g. `acceptance 1 5 9`
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"enumeration optimality of the box solver", enumeration_optimality},
        {"meta-algorithm guarantee and optimality on fixtures", meta_guarantee},
        {"Adult table at desk scale", adult_table},
        {"German and COMPAS fdr sweeps", german_compas},
        {"error identity", error_identity},
        {"dual convexity, subgradients, stochastic estimates", dual_properties},
        {"price of fairness", price},
        {"robustness to an estimated distribution", robustness},
        {"determinism of CLI outputs", determinism},
    };
    bool all = true;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        all = all && o.pass;
        std::printf("%s %d %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(), seconds_since(t0),
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
