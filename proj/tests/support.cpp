#include "support.hpp"

#include <faircls/serialize.hpp>

#include <algorithm>
#include <random>

#ifndef FAIRCLS_FIXTURE_DIR
#define FAIRCLS_FIXTURE_DIR "tests/fixtures"
#endif

namespace fx {

std::string fixture_dir() { return FAIRCLS_FIXTURE_DIR; }

std::vector<std::string> fixture_names() { return {"d1", "d2", "d3", "d4", "d5", "d6"}; }

std::shared_ptr<const DiscreteJointDistribution> fixture(const std::string& name) {
    return std::make_shared<const DiscreteJointDistribution>(faircls::load_fixture(fixture_dir() + "/" + name + ".json"));
}

std::vector<Eigen::VectorXd> distinct_x(const DiscreteJointDistribution& d) {
    std::vector<Eigen::VectorXd> xs;
    for (const auto& p : d.points()) {
        if (std::none_of(xs.begin(), xs.end(), [&](const Eigen::VectorXd& v) { return v == p.x; })) xs.push_back(p.x);
    }
    return xs;
}

int Labeling::at(const Eigen::VectorXd& x) const {
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (xs[k] == x) return static_cast<int>((mask >> k) & 1u);
    return 0;
}

int Labeling::operator()(const faircls::SupportPoint& p) const { return at(p.x); }

double table_error(const DiscreteJointDistribution& d, const std::function<int(const faircls::SupportPoint&)>& f) {
    double e = 0.0;
    for (const auto& p : d.points())
        if (f(p) != p.y) e += p.mass;
    return e;
}

faircls::QVector table_q(const std::string& m, const DiscreteJointDistribution& d,
                         const std::function<int(const faircls::SupportPoint&)>& f,
                         const std::optional<faircls::FeatureSubset>& subset) {
    const int groups = d.layout().cardinality(0);
    faircls::QVector q{Eigen::VectorXd::Zero(groups), std::vector<bool>(groups, true)};
    for (int g = 0; g < groups; ++g) {
        // Pr[f = a | cond] for cond over (y, in-subset)
        auto pr = [&](int a, auto cond) {
            double num = 0.0, den = 0.0;
            for (const auto& p : d.points()) {
                if (p.z[0] != g || !cond(p)) continue;
                den += p.mass;
                if (f(p) == a) num += p.mass;
            }
            return std::pair{num, den};
        };
        auto ratio = [](std::pair<double, double> nd) { return nd.second > 0 ? nd.first / nd.second : 0.0; };
        auto any = [](const faircls::SupportPoint&) { return true; };
        auto y0 = [](const faircls::SupportPoint& p) { return p.y == 0; };
        auto y1 = [](const faircls::SupportPoint& p) { return p.y == 1; };
        // joint f/y masses in the group
        double f1y0 = 0, f1y1 = 0, f0y0 = 0, f0y1 = 0;
        for (const auto& p : d.points()) {
            if (p.z[0] != g) continue;
            (f(p) ? (p.y ? f1y1 : f1y0) : (p.y ? f0y1 : f0y0)) += p.mass;
        }
        auto frac = [&](double num, double den, int gi) {
            if (den > 1e-12) q.value[gi] = num / den;
            else q.defined[gi] = false;
        };
        if (m == "sr") q.value[g] = ratio(pr(1, any));
        else if (m == "csr") q.value[g] = ratio(pr(1, [&](const faircls::SupportPoint& p) { return subset->contains(p.x); }));
        else if (m == "fpr") q.value[g] = ratio(pr(1, y0));
        else if (m == "fnr") q.value[g] = ratio(pr(0, y1));
        else if (m == "tpr") q.value[g] = ratio(pr(1, y1));
        else if (m == "tnr") q.value[g] = ratio(pr(0, y0));
        else if (m == "ar") q.value[g] = (f1y1 + f0y0) / (f1y1 + f0y0 + f1y0 + f0y1);
        else if (m == "fdr") frac(f1y0, f1y0 + f1y1, g);
        else if (m == "for") frac(f0y1, f0y1 + f0y0, g);
        else if (m == "ppr") frac(f1y1, f1y0 + f1y1, g);
        else if (m == "npr") frac(f0y0, f0y1 + f0y0, g);
        else throw std::invalid_argument("table_q: unknown metric " + m);
    }
    return q;
}

bool in_box(const faircls::QVector& q, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double tol) {
    for (int g = 0; g < q.size(); ++g)
        if (q.defined[g] && (q.value[g] < lo[g] - tol || q.value[g] > hi[g] + tol)) return false;
    return true;
}

BruteForce enumerate(const DiscreteJointDistribution& d, const std::function<bool(const Labeling&)>& accept) {
    BruteForce best;
    Labeling lab{distinct_x(d), 0};
    for (unsigned mask = 0; mask < (1u << lab.xs.size()); ++mask) {
        lab.mask = mask;
        if (!accept(lab)) continue;
        const double e = table_error(d, lab);
        if (!best.feasible || e < best.error) best = {true, e, mask};
    }
    return best;
}

DiscreteJointDistribution perturb(const DiscreteJointDistribution& d, double delta, std::uint64_t seed) {
    std::vector<faircls::SupportPoint> pts = d.points();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    for (int k = 0; k < 2; ++k) {
        const std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        const double t = std::min({delta, pts[j].mass * 0.5});
        pts[i].mass += t;
        pts[j].mass -= t;
    }
    return DiscreteJointDistribution(d.layout(), pts);
}

}  // namespace fx
