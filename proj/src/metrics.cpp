#include "faircls/metrics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace faircls {

const std::vector<std::string>& report_metric_names() {
    static const std::vector<std::string> names{"sr", "fpr", "fnr", "tpr", "tnr", "ar", "fdr", "for", "ppr", "npr"};
    return names;
}

MetricsReport empirical_report(const std::vector<int>& predictions, const std::vector<Sample>& samples,
                               int attribute, int groups) {
    if (predictions.size() != samples.size()) throw std::invalid_argument("one prediction per sample required");
    // counts[g][f][y]
    std::vector<std::array<std::array<long, 2>, 2>> counts(groups, {{{0, 0}, {0, 0}}});
    MetricsReport r;
    r.samples = static_cast<long>(samples.size());
    r.group_counts.assign(groups, 0);
    long correct = 0;
    for (std::size_t n = 0; n < samples.size(); ++n) {
        const int g = samples[n].sensitive.at(attribute);
        if (g < 0 || g >= groups) throw std::out_of_range("sample group out of range");
        const int f = predictions[n], y = samples[n].label;
        ++counts[g][f][y];
        ++r.group_counts[g];
        correct += f == y;
    }
    r.accuracy = samples.empty() ? 0.0 : static_cast<double>(correct) / samples.size();

    for (const auto& name : report_metric_names()) {
        GroupRates gr{Eigen::VectorXd::Zero(groups), std::vector<bool>(groups, false)};
        for (int g = 0; g < groups; ++g) {
            const auto& c = counts[g];
            long num = 0, den = 0;
            if (name == "sr") num = c[1][0] + c[1][1], den = num + c[0][0] + c[0][1];
            else if (name == "fpr") num = c[1][0], den = c[1][0] + c[0][0];
            else if (name == "fnr") num = c[0][1], den = c[0][1] + c[1][1];
            else if (name == "tpr") num = c[1][1], den = c[1][1] + c[0][1];
            else if (name == "tnr") num = c[0][0], den = c[0][0] + c[1][0];
            else if (name == "ar") num = c[0][0] + c[1][1], den = num + c[0][1] + c[1][0];
            else if (name == "fdr") num = c[1][0], den = c[1][0] + c[1][1];
            else if (name == "for") num = c[0][1], den = c[0][1] + c[0][0];
            else if (name == "ppr") num = c[1][1], den = c[1][0] + c[1][1];
            else if (name == "npr") num = c[0][0], den = c[0][1] + c[0][0];
            if (den > 0) {
                gr.rate[g] = static_cast<double>(num) / den;
                gr.defined[g] = true;
            }
        }
        const QVector q{gr.rate, gr.defined};
        if (q.defined_count() > 0) {
            gr.gamma = rho(q).value;
            gr.gamma_defined = true;
        }
        r.metrics.emplace(name, std::move(gr));
    }
    return r;
}

MetricsReport empirical_report(const ThresholdClassifier& clf, const std::vector<Sample>& samples, int attribute) {
    if (!clf.oracle) throw std::invalid_argument("classifier has no oracle");
    const SensitiveLayout& layout = clf.oracle->layout();
    std::vector<int> pred;
    pred.reserve(samples.size());
    for (const auto& s : samples) {
        if (clf.mode == Mode::GroupAware) pred.push_back(clf.predict(s.features, layout.tuple_index(s.sensitive)));
        else pred.push_back(clf.predict(s.features));
    }
    return empirical_report(pred, samples, attribute, layout.cardinality(attribute));
}

PriceReport price_of_fairness(std::shared_ptr<const DiscreteJointDistribution> dist, const std::string& metric,
                              const FairnessBox& box, const SolverConfig& cfg, Mode mode, int attribute) {
    ExpectationPool pool = make_pool(*dist, mode);
    const PerfSpec spec = catalog_metric(metric, pool, attribute);
    const SolveResult res = solve_group_fair(dist, pool, {spec}, box, cfg);
    if (!res.feasible()) throw std::runtime_error("price_of_fairness: the box is infeasible (" + res.status + ")");

    const Eigen::VectorXd eta = pool.eta();
    const Eigen::VectorXd f = res.classifier->label_pool(pool);
    PriceReport r;
    r.constrained_error = pool.error(f);
    r.unconstrained_error = pool.w.dot(eta.cwiseMin(Eigen::VectorXd::Ones(eta.size()) - eta));
    r.f_direct = r.constrained_error - r.unconstrained_error;
    r.lambda = res.classifier->params;

    double b = 0.0;
    for (Eigen::Index n = 0; n < pool.rows(); ++n) {
        const std::optional<int> t = pool.tuple[n] >= 0 ? std::optional<int>(pool.tuple[n]) : std::nullopt;
        // sign of s as realised by the classifier; ties on the support are
        // settled by its pinned labels, not by the raw score
        const double s = res.classifier->predict(pool.x.row(n).transpose(), t) == 1 ? 1.0 : -1.0;
        if ((eta[n] - 0.5) * s <= 0.0) b += pool.w[n] * std::abs(eta[n] - 0.5);
    }
    r.f_formula = 2.0 * b;
    r.gap = std::abs(r.f_direct - r.f_formula);
    return r;
}

std::vector<Eigen::VectorXd> joint_support(const DiscreteJointDistribution& a, const DiscreteJointDistribution& b) {
    std::vector<Eigen::VectorXd> out;
    for (const auto* d : {&a, &b}) {
        for (const auto& x : d->distinct_x()) {
            bool seen = false;
            for (const auto& o : out) seen = seen || (o.size() == x.size() && o == x);
            if (!seen) out.push_back(x);
        }
    }
    return out;
}

KappaTv kappa_and_tv(const DiscreteJointDistribution& truth, const DiscreteJointDistribution& est,
                     const std::string& metric, int attribute) {
    if (!(truth.layout() == est.layout())) throw std::invalid_argument("kappa_and_tv: layouts differ");
    const std::vector<Eigen::VectorXd> xs = joint_support(truth, est);
    if (xs.size() > 12)
        throw std::invalid_argument("kappa_and_tv enumerates 2^n classifiers and is meant for small fixtures; got " +
                                    std::to_string(xs.size()) + " distinct points (limit 12)");
    const PerfSpec st = catalog_metric(metric, make_pool(truth, Mode::GroupUnaware), attribute);
    const PerfSpec se = catalog_metric(metric, make_pool(est, Mode::GroupUnaware), attribute);

    KappaTv r;
    r.tv = tv_distance(truth, est);
    for (unsigned mask = 0; mask < (1u << xs.size()); ++mask) {
        auto f = [&](const SupportPoint& p) {
            for (std::size_t k = 0; k < xs.size(); ++k)
                if (xs[k] == p.x) return static_cast<int>((mask >> k) & 1u);
            return 0;
        };
        const QVector qt = eval_q_conditional(st, truth, f);
        const QVector qe = eval_q_conditional(se, est, f);
        for (int g = 0; g < qt.size(); ++g)
            if (qt.defined[g] && qe.defined[g]) r.kappa = std::max(r.kappa, 2.0 * std::abs(qe.value[g] - qt.value[g]));
    }
    return r;
}

}  // namespace faircls
