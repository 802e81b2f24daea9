#include "faircls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace faircls {

namespace {

constexpr double kFeasTol = 1e-9;

Eigen::VectorXd positive_label(const SensitiveLayout& layout) { return cell_mask(layout, Event::y(1)); }

}  // namespace

// ------------------------------------------------------------------- box

FairnessBox FairnessBox::uniform(const std::vector<int>& groups, const std::vector<double>& lo,
                                 const std::vector<double>& hi) {
    if (groups.size() != lo.size() || groups.size() != hi.size())
        throw std::invalid_argument("box: one bound pair per metric");
    FairnessBox b;
    for (std::size_t m = 0; m < groups.size(); ++m) {
        b.lower.push_back(Eigen::VectorXd::Constant(groups[m], lo[m]));
        b.upper.push_back(Eigen::VectorXd::Constant(groups[m], hi[m]));
    }
    b.validate();
    return b;
}

void FairnessBox::validate() const {
    if (lower.size() != upper.size()) throw std::invalid_argument("box: lower/upper metric count differ");
    for (std::size_t m = 0; m < lower.size(); ++m) {
        if (lower[m].size() != upper[m].size()) throw std::invalid_argument("box: group count differs");
        for (Eigen::Index g = 0; g < lower[m].size(); ++g)
            if (!(lower[m][g] <= upper[m][g])) throw std::invalid_argument("box: lower bound exceeds upper bound");
            else if (lower[m][g] < 0.0 || upper[m][g] > 1.0) throw std::invalid_argument("box: bounds must lie in [0, 1]");
    }
}

// ------------------------------------------------------------ constraints

bool ConstraintSystem::uses_subset() const {
    return std::any_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.as.any(); });
}

double ConstraintSystem::h(const Eigen::VectorXd& theta) const {
    double v = 0.0;
    for (int r = 0; r < size(); ++r) {
        const auto& b = blocks[r];
        v += (theta[r] >= 0.0 || !b.free) ? b.slope_pos * theta[r] : b.slope_neg * theta[r];
    }
    return v;
}

Eigen::VectorXd ConstraintSystem::h_subgradient(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd g(size());
    for (int r = 0; r < size(); ++r) {
        const auto& b = blocks[r];
        g[r] = (!b.free || theta[r] > 0.0) ? b.slope_pos : b.slope_neg;
    }
    return g;
}

void ConstraintSystem::project(Eigen::VectorXd& theta) const {
    for (int r = 0; r < size(); ++r)
        if (!blocks[r].free) theta[r] = std::max(theta[r], 0.0);
}

ConstraintSystem build_system(const std::vector<PerfSpec>& specs, const FairnessBox& box,
                              const SensitiveLayout& layout) {
    box.validate();
    if (box.lower.size() != specs.size()) throw std::invalid_argument("box must have one entry per metric");
    ConstraintSystem sys;
    sys.layout = layout;
    for (std::size_t m = 0; m < specs.size(); ++m) {
        const auto& spec = specs[m];
        if (box.lower[m].size() != spec.groups) throw std::invalid_argument("box group count mismatch");
        sys.groups_per_metric.push_back(spec.groups);
        sys.kinds.push_back(spec.kind);
        for (int g = 0; g < spec.groups; ++g) {
            const double lo = box.lower[m][g], hi = box.upper[m][g];
            const Direction num = direction(spec.numerator[g], layout, spec.attribute, g);
            if (spec.linear()) {
                Block b;
                b.kind = BlockKind::Linear;
                b.metric = static_cast<int>(m);
                b.group = g;
                b.a = num.d;
                b.as = num.ds;
                b.slope_pos = num.offset - lo;
                b.slope_neg = num.offset - hi;
                b.free = true;
                sys.blocks.push_back(std::move(b));
            } else {
                const Direction den = direction(spec.denominator[g], layout, spec.attribute, g);
                Block lower;
                lower.kind = BlockKind::FractionalLower;
                lower.metric = static_cast<int>(m);
                lower.group = g;
                lower.a = num.d - lo * den.d;
                lower.as = num.ds - lo * den.ds;
                lower.slope_pos = num.offset - lo * den.offset;
                Block upper;
                upper.kind = BlockKind::FractionalUpper;
                upper.metric = static_cast<int>(m);
                upper.group = g;
                upper.a = hi * den.d - num.d;
                upper.as = hi * den.ds - num.ds;
                upper.slope_pos = hi * den.offset - num.offset;
                sys.blocks.push_back(std::move(lower));
                sys.blocks.push_back(std::move(upper));
            }
        }
    }
    return sys;
}

ConstraintSystem build_meta2_system(const PerfSpec& spec, double tau, const SensitiveLayout& layout) {
    if (!spec.linear()) throw std::invalid_argument("Meta2 is defined for linear metrics only");
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("Meta2 needs tau in [0, 1]");
    ConstraintSystem sys;
    sys.layout = layout;
    sys.meta2 = true;
    sys.groups_per_metric.push_back(spec.groups);
    sys.kinds.push_back(spec.kind);
    std::vector<Direction> dirs;
    for (int g = 0; g < spec.groups; ++g) dirs.push_back(direction(spec.numerator[g], layout, spec.attribute, g));
    for (int i = 0; i < spec.groups; ++i) {
        for (int j = 0; j < spec.groups; ++j) {
            if (i == j) continue;
            Block b;
            b.kind = BlockKind::Pair;
            b.group = i;
            b.other = j;
            b.a = dirs[i].d - tau * dirs[j].d;
            b.as = dirs[i].ds - tau * dirs[j].ds;
            b.slope_pos = dirs[i].offset - tau * dirs[j].offset;
            sys.blocks.push_back(std::move(b));
        }
    }
    return sys;
}

LagrangianParams to_params(const ConstraintSystem& sys, const Eigen::VectorXd& theta) {
    LagrangianParams p;
    const auto metrics = sys.groups_per_metric.size();
    for (std::size_t m = 0; m < metrics; ++m) {
        const int g = sys.groups_per_metric[m];
        if (sys.meta2) p.metrics.emplace_back(PairMultipliers{Eigen::MatrixXd::Zero(g, g)});
        else if (sys.kinds[m] == SpecKind::Linear) p.metrics.emplace_back(LinearMultipliers{Eigen::VectorXd::Zero(g)});
        else p.metrics.emplace_back(FractionalMultipliers{Eigen::VectorXd::Zero(g), Eigen::VectorXd::Zero(g)});
    }
    for (int r = 0; r < sys.size(); ++r) {
        const auto& b = sys.blocks[r];
        auto& slot = p.metrics[b.metric];
        switch (b.kind) {
            case BlockKind::Linear: std::get<LinearMultipliers>(slot).lambda[b.group] = theta[r]; break;
            case BlockKind::FractionalLower: std::get<FractionalMultipliers>(slot).nu[b.group] = theta[r]; break;
            case BlockKind::FractionalUpper: std::get<FractionalMultipliers>(slot).zeta[b.group] = theta[r]; break;
            case BlockKind::Pair: std::get<PairMultipliers>(slot).lambda(b.group, b.other) = theta[r]; break;
        }
    }
    return p;
}

Eigen::VectorXd to_theta(const ConstraintSystem& sys, const LagrangianParams& params) {
    if (params.metrics.size() != sys.groups_per_metric.size())
        throw std::invalid_argument("multiplier set does not match the constraint system");
    Eigen::VectorXd theta(sys.size());
    for (int r = 0; r < sys.size(); ++r) {
        const auto& b = sys.blocks[r];
        const auto& slot = params.metrics[b.metric];
        switch (b.kind) {
            case BlockKind::Linear: theta[r] = std::get<LinearMultipliers>(slot).lambda[b.group]; break;
            case BlockKind::FractionalLower: theta[r] = std::get<FractionalMultipliers>(slot).nu[b.group]; break;
            case BlockKind::FractionalUpper: theta[r] = std::get<FractionalMultipliers>(slot).zeta[b.group]; break;
            case BlockKind::Pair: theta[r] = std::get<PairMultipliers>(slot).lambda(b.group, b.other); break;
        }
        if (!b.free && theta[r] < 0.0) throw std::invalid_argument("multiplier must be nonnegative");
    }
    return theta;
}

// ------------------------------------------------------------ pooled view

PooledSystem::PooledSystem(const ConstraintSystem& s, const ExpectationPool& pool) : w(pool.w), sys(&s) {
    base = pool.post * positive_label(pool.layout) - Eigen::VectorXd::Constant(pool.rows(), 0.5);
    Eigen::MatrixXd a(pool.cells(), s.size()), as(pool.cells(), s.size());
    for (int r = 0; r < s.size(); ++r) {
        a.col(r) = s.blocks[r].a;
        as.col(r) = s.blocks[r].as;
    }
    A = pool.post * a;
    if (s.uses_subset()) {
        if (pool.in_subset.size() != pool.rows()) throw std::logic_error("constraint uses a subset the pool lacks");
        A += pool.in_subset.asDiagonal() * (pool.post * as);
    }
}

double PooledSystem::dual(const Eigen::VectorXd& theta) const {
    return w.dot(scores(theta).cwiseMax(0.0)) + sys->h(theta);
}

Eigen::VectorXd PooledSystem::subgradient(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd s = scores(theta);
    const Eigen::VectorXd active = (s.array() >= 0.0).select(w, 0.0);
    return A.transpose() * active + sys->h_subgradient(theta);
}

Eigen::VectorXd PooledSystem::slacks(const Eigen::VectorXd& f) const {
    const Eigen::VectorXd t = A.transpose() * w.cwiseProduct(f);
    int extra = 0;
    for (const auto& b : sys->blocks) extra += b.free ? 1 : 0;
    Eigen::VectorXd out(sys->size() + extra);
    int k = sys->size();
    for (int r = 0; r < sys->size(); ++r) {
        const auto& b = sys->blocks[r];
        out[r] = b.slope_pos + t[r];
        if (b.free) out[k++] = -b.slope_neg - t[r];
    }
    return out;
}

double PooledSystem::max_violation(const Eigen::VectorXd& f) const {
    const Eigen::VectorXd s = slacks(f);
    return s.size() == 0 ? 0.0 : std::max(0.0, -s.minCoeff());
}

double SolverConfig::tolerance_for(const ExpectationPool& pool) const {
    if (tolerance) return *tolerance;
    return pool.exact ? 1e-3 : 1e-2;
}

// ------------------------------------------------------------- classifier

double ThresholdClassifier::score(const Eigen::VectorXd& x, std::optional<int> tuple_index) const {
    if (!oracle) throw std::logic_error("classifier has no distribution oracle");
    if (mode == Mode::GroupAware && !tuple_index) throw std::invalid_argument("group-aware classifier needs z");
    const Posterior p = mode == Mode::GroupAware ? oracle->posterior(x, *tuple_index) : oracle->posterior(x);
    double s = p.p.dot(coef) - 0.5;
    if (subset && subset->contains(x)) s += p.p.dot(coef_subset);
    return s;
}

int ThresholdClassifier::predict(const Eigen::VectorXd& x, std::optional<int> tuple_index) const {
    for (const auto& o : overrides) {
        if (o.x.size() == x.size() && o.x == x && (mode == Mode::GroupUnaware || o.tuple == tuple_index.value_or(-1)))
            return o.label;
    }
    return score(x, tuple_index) > 0.0 ? 1 : 0;
}

Eigen::VectorXd ThresholdClassifier::label_pool(const ExpectationPool& pool) const {
    Eigen::VectorXd f(pool.rows());
    if (pool.exact) {
        for (Eigen::Index i = 0; i < pool.rows(); ++i) {
            const Eigen::VectorXd x = pool.x.row(i).transpose();
            f[i] = mode == Mode::GroupAware ? predict(x, pool.tuple[i]) : predict(x);
        }
        return f;
    }
    Eigen::VectorXd s = pool.post * coef - Eigen::VectorXd::Constant(pool.rows(), 0.5);
    if (subset) {
        const Eigen::VectorXd ps = pool.post * coef_subset;
        for (Eigen::Index i = 0; i < pool.rows(); ++i)
            if (subset->contains(pool.x.row(i).transpose())) s[i] += ps[i];
    }
    for (Eigen::Index i = 0; i < pool.rows(); ++i) f[i] = s[i] > 0.0 ? 1.0 : 0.0;
    return f;
}

ThresholdClassifier make_classifier(const ConstraintSystem& sys, const Eigen::VectorXd& theta,
                                    std::shared_ptr<const Oracle> oracle, Mode mode,
                                    const std::optional<FeatureSubset>& subset) {
    ThresholdClassifier clf;
    clf.mode = mode;
    clf.oracle = std::move(oracle);
    clf.params = to_params(sys, theta);
    clf.coef = positive_label(sys.layout);
    clf.coef_subset = Eigen::VectorXd::Zero(sys.layout.cells());
    clf.subset = subset;
    for (int r = 0; r < sys.size(); ++r) {
        clf.coef += theta[r] * sys.blocks[r].a;
        clf.coef_subset += theta[r] * sys.blocks[r].as;
    }
    return clf;
}

double threshold_score(const ThresholdClassifier& clf, const Eigen::VectorXd& x, std::optional<int> tuple_index) {
    return clf.score(x, tuple_index);
}

int predict(const ThresholdClassifier& clf, const Eigen::VectorXd& x, std::optional<int> tuple_index) {
    return clf.predict(x, tuple_index);
}

double dual_objective(const LagrangianParams& params, const FairnessBox& box, const std::vector<PerfSpec>& specs,
                      const ExpectationPool& pool) {
    const ConstraintSystem sys = build_system(specs, box, pool.layout);
    return PooledSystem(sys, pool).dual(to_theta(sys, params));
}

Eigen::VectorXd subgradient(const LagrangianParams& params, const FairnessBox& box,
                            const std::vector<PerfSpec>& specs, const ExpectationPool& pool) {
    const ConstraintSystem sys = build_system(specs, box, pool.layout);
    return PooledSystem(sys, pool).subgradient(to_theta(sys, params));
}

Eigen::VectorXd stochastic_subgradient(const ConstraintSystem& sys, const Eigen::VectorXd& theta,
                                       const Oracle& dist, const Sample& s, Mode mode,
                                       const std::optional<FeatureSubset>& subset) {
    const Posterior p = mode == Mode::GroupAware ? dist.posterior(s.features, sys.layout.tuple_index(s.sensitive))
                                                 : dist.posterior(s.features);
    const bool in_s = sys.uses_subset() && subset && subset->contains(s.features);
    Eigen::VectorXd a(sys.size());
    for (int r = 0; r < sys.size(); ++r) {
        a[r] = p.p.dot(sys.blocks[r].a);
        if (in_s) a[r] += p.p.dot(sys.blocks[r].as);
    }
    const double score = p.p.dot(positive_label(sys.layout)) - 0.5 + a.dot(theta);
    Eigen::VectorXd g = sys.h_subgradient(theta);
    if (score >= 0.0) g += a;
    return g;
}

double subgradient_variance_bound(const PerfSpec& spec) {
    if (!spec.linear()) throw std::invalid_argument("the variance bound is stated for linear metrics");
    double sum = 0.0, amax = 0.0, pmin = std::numeric_limits<double>::infinity();
    std::size_t k = 0;
    for (const auto& form : spec.numerator) {
        sum += 2.0 * std::pow(1.0 + std::abs(form.offset), 2);
        k = std::max(k, form.terms.size());
        for (const auto& t : form.terms) {
            amax = std::max(amax, std::abs(t.alpha));
            if (t.pi > 0.0) pmin = std::min(pmin, t.pi);
        }
    }
    const double kk = static_cast<double>(k);
    return sum + 2.0 * kk * kk * spec.groups * amax * amax / pmin;
}

// ------------------------------------------------------------------ solve

namespace {

/// Depth-first search over 0/1 labelings of a small exact pool, pruned by the
/// Lagrangian bound at the dual solution and by reachability of each
/// constraint.
struct LabelSearch {
    const PooledSystem& ps;
    Eigen::VectorXd s;
    std::vector<int> order;
    Eigen::VectorXd cost0, cost1;
    Eigen::MatrixXd rows;  // constraint rows x pool rows, already weighted
    Eigen::VectorXd c;
    double hval = 0.0;
    double pi = 0.0;

    std::vector<double> trivial_suffix, lag_suffix;
    Eigen::MatrixXd pos_suffix;  // constraint rows x (n+1)

    std::vector<int> current, best_labels;
    double best = std::numeric_limits<double>::infinity();
    long nodes = 0;

    LabelSearch(const PooledSystem& p, const Eigen::VectorXd& theta, const Eigen::VectorXd& eta) : ps(p) {
        const auto n = ps.w.size();
        s = ps.scores(theta);
        hval = ps.sys->h(theta);
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return std::abs(s[a]) > std::abs(s[b]); });
        cost1 = ps.w.cwiseProduct((1.0 - eta.array()).matrix());
        cost0 = ps.w.cwiseProduct(eta);
        pi = cost0.sum();

        int extra = 0;
        for (const auto& b : ps.sys->blocks) extra += b.free ? 1 : 0;
        const int m = ps.sys->size() + extra;
        rows.resize(m, n);
        c.resize(m);
        int k = ps.sys->size();
        for (int r = 0; r < ps.sys->size(); ++r) {
            const auto& b = ps.sys->blocks[r];
            rows.row(r) = ps.A.col(r).cwiseProduct(ps.w).transpose();
            c[r] = b.slope_pos;
            if (b.free) {
                rows.row(k) = -rows.row(r);
                c[k] = -b.slope_neg;
                ++k;
            }
        }
        trivial_suffix.assign(n + 1, 0.0);
        lag_suffix.assign(n + 1, 0.0);
        pos_suffix = Eigen::MatrixXd::Zero(m, n + 1);
        for (auto i = n; i-- > 0;) {
            const int r = order[i];
            trivial_suffix[i] = trivial_suffix[i + 1] + std::min(cost0[r], cost1[r]);
            lag_suffix[i] = lag_suffix[i + 1] + ps.w[r] * std::max(s[r], 0.0);
            pos_suffix.col(i) = pos_suffix.col(i + 1) + rows.col(r).cwiseMax(0.0);
        }
        current.assign(n, 0);
    }

    void offer(const std::vector<int>& labels) {
        Eigen::VectorXd f(labels.size());
        double err = 0.0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            f[i] = labels[i];
            err += labels[i] ? cost1[i] : cost0[i];
        }
        const Eigen::VectorXd sl = c + rows * f;
        if (sl.size() > 0 && sl.minCoeff() < -kFeasTol) return;
        if (err < best) {
            best = err;
            best_labels = labels;
        }
    }

    void run() { dfs(0, 0.0, 0.0, Eigen::VectorXd::Zero(c.size())); }

    void dfs(std::size_t depth, double fixed_cost, double fixed_score, const Eigen::VectorXd& fixed_rows) {
        ++nodes;
        const double trivial = fixed_cost + trivial_suffix[depth];
        const double lagrange = pi - 2.0 * (hval + fixed_score + lag_suffix[depth]);
        if (std::max(trivial, lagrange) >= best - 1e-15) return;
        if (c.size() > 0 && (c + fixed_rows + pos_suffix.col(depth)).minCoeff() < -kFeasTol) return;
        if (depth == order.size()) {
            offer(current);
            return;
        }
        const int r = order[depth];
        const int first = s[r] > 0.0 ? 1 : 0;
        for (int label : {first, 1 - first}) {
            current[r] = label;
            if (label)
                dfs(depth + 1, fixed_cost + cost1[r], fixed_score + ps.w[r] * s[r], fixed_rows + rows.col(r));
            else
                dfs(depth + 1, fixed_cost + cost0[r], fixed_score, fixed_rows);
        }
        current[r] = 0;
    }
};

}  // namespace

SolveResult solve_system(const ConstraintSystem& sys, const ExpectationPool& pool,
                         std::shared_ptr<const Oracle> oracle, const SolverConfig& cfg) {
    const PooledSystem ps(sys, pool);
    const int R = sys.size();
    const double c = cfg.step / std::sqrt(static_cast<double>(std::max(1, cfg.iterations)));
    const double tol = cfg.tolerance_for(pool);

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(R);
    Eigen::VectorXd best = theta;
    double best_val = ps.dual(theta);
    bool capped = false, best_capped = false;

    auto clip = [&](Eigen::VectorXd& t) {
        sys.project(t);
        const double nrm = t.norm();
        if (nrm > cfg.lambda_max) {
            t *= cfg.lambda_max / nrm;
            return true;
        }
        return false;
    };

    if (R > 0 && pool.exact) {
        for (int it = 0; it < cfg.iterations; ++it) {
            theta -= c * ps.subgradient(theta);
            capped = clip(theta);
            const double v = ps.dual(theta);
            if (v < best_val) {
                best_val = v;
                best = theta;
                best_capped = capped;
            }
        }
    } else if (R > 0) {
        Rng rng(cfg.seed);
        std::vector<double> cum(pool.rows());
        std::partial_sum(pool.w.data(), pool.w.data() + pool.rows(), cum.begin());
        std::uniform_real_distribution<double> u(0.0, cum.back());
        const Eigen::VectorXd pos = positive_label(pool.layout);
        const int batch = std::max(1, cfg.batch);
        Eigen::VectorXd g(R);
        for (int it = 1; it <= cfg.iterations; ++it) {
            g.setZero();
            for (int b = 0; b < batch; ++b) {
                auto idx = std::upper_bound(cum.begin(), cum.end(), u(rng)) - cum.begin();
                if (idx >= pool.rows()) idx = pool.rows() - 1;
                if (ps.base[idx] + ps.A.row(idx).dot(theta) >= 0.0) g += ps.A.row(idx).transpose();
            }
            g /= static_cast<double>(batch);
            g += sys.h_subgradient(theta);
            theta -= c * g;
            capped = clip(theta);
            if (it % std::max(1, cfg.eval_every) == 0 || it == cfg.iterations) {
                const double v = ps.dual(theta);
                if (v < best_val) {
                    best_val = v;
                    best = theta;
                    best_capped = capped;
                }
            }
        }
    }

    SolveResult res;
    res.theta = best;
    res.dual_value = best_val;
    const Eigen::VectorXd eta = pool.eta();
    res.lower_bound = pool.w.dot(eta) - 2.0 * best_val;

    ThresholdClassifier clf = make_classifier(sys, best, oracle, pool.mode, pool.subset);
    Eigen::VectorXd f = clf.label_pool(pool);

    if (pool.exact && pool.rows() <= cfg.exact_search_rows) {
        LabelSearch search(ps, best, eta);
        std::vector<int> seed_labels(f.size());
        for (Eigen::Index i = 0; i < f.size(); ++i) seed_labels[i] = static_cast<int>(f[i]);
        search.offer(seed_labels);
        search.run();
        res.exact_search = true;
        res.nodes = search.nodes;
        if (search.best_labels.empty()) {
            res.status = "infeasible";
            res.max_violation = ps.max_violation(f);
            return res;
        }
        for (Eigen::Index i = 0; i < f.size(); ++i) {
            const int want = search.best_labels[i];
            if (want != static_cast<int>(f[i])) {
                clf.overrides.push_back({pool.x.row(i).transpose(), pool.tuple[i], want});
                f[i] = want;
            }
        }
        res.status = "optimal";
    } else {
        res.status = "threshold";
    }
    res.max_violation = ps.max_violation(f);
    res.error = pool.error(f);
    if (res.max_violation > tol) {
        res.status = best_capped ? "infeasible" : "violated";
        return res;
    }
    res.classifier = std::move(clf);
    return res;
}

SolveResult solve_group_fair(std::shared_ptr<const Oracle> oracle, const ExpectationPool& pool,
                             const std::vector<PerfSpec>& specs, const FairnessBox& box, const SolverConfig& cfg) {
    const ConstraintSystem sys = build_system(specs, box, pool.layout);
    SolveResult r = solve_system(sys, pool, std::move(oracle), cfg);
    if (r.classifier) {
        r.classifier->specs = specs;
        r.classifier->box = box;
    }
    return r;
}

SolveResult solve_meta2(std::shared_ptr<const Oracle> oracle, const ExpectationPool& pool, const PerfSpec& spec,
                        double tau, const SolverConfig& cfg) {
    const ConstraintSystem sys = build_meta2_system(spec, tau, pool.layout);
    SolveResult r = solve_system(sys, pool, std::move(oracle), cfg);
    if (r.classifier) {
        r.classifier->specs = {spec};
        r.classifier->tau = tau;
    }
    return r;
}

}  // namespace faircls
