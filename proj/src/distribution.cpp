#include "faircls/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace faircls {

namespace {

std::vector<double> key_of(const Eigen::VectorXd& x) { return {x.data(), x.data() + x.size()}; }

std::size_t pick(const std::vector<double>& cumulative, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, cumulative.back());
    const double r = u(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    if (it == cumulative.end()) --it;
    return static_cast<std::size_t>(it - cumulative.begin());
}

Eigen::VectorXd restrict_to(const Eigen::VectorXd& p, int tuple_index) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(p.size());
    out.segment<2>(2 * tuple_index) = p.segment<2>(2 * tuple_index);
    return out;
}

}  // namespace

SensitiveLayout::SensitiveLayout(std::vector<int> cardinalities) : card_(std::move(cardinalities)) {
    if (card_.empty()) throw std::invalid_argument("at least one sensitive attribute is required");
    tuples_ = 1;
    for (int c : card_) {
        if (c < 2) throw std::invalid_argument("sensitive cardinalities must be >= 2");
        tuples_ *= c;
    }
}

int SensitiveLayout::tuple_index(const std::vector<int>& z) const {
    if (!valid(z)) throw std::out_of_range("sensitive tuple outside declared cardinalities");
    int idx = 0;
    for (std::size_t a = 0; a < card_.size(); ++a) idx = idx * card_[a] + z[a];
    return idx;
}

std::vector<int> SensitiveLayout::tuple(int index) const {
    std::vector<int> z(card_.size());
    for (int a = attributes() - 1; a >= 0; --a) {
        z[a] = index % card_[a];
        index /= card_[a];
    }
    return z;
}

int SensitiveLayout::attribute_value(int tuple_index, int attr) const { return tuple(tuple_index).at(attr); }

bool SensitiveLayout::valid(const std::vector<int>& z) const {
    if (z.size() != card_.size()) return false;
    for (std::size_t a = 0; a < z.size(); ++a)
        if (z[a] < 0 || z[a] >= card_[a]) return false;
    return true;
}

Event Event::and_group(int attr, int val) const {
    Event e = *this;
    e.attribute = attr;
    e.value = val;
    return e;
}

Event Event::and_label(int lab) const {
    Event e = *this;
    e.label = lab;
    return e;
}

bool Event::matches(const SensitiveLayout& layout, int cell) const {
    if (label && cell % 2 != *label) return false;
    if (attribute && layout.attribute_value(cell / 2, *attribute) != value.value_or(0)) return false;
    return true;
}

Eigen::VectorXd cell_mask(const SensitiveLayout& layout, const Event& e) {
    Eigen::VectorXd m(layout.cells());
    for (int c = 0; c < layout.cells(); ++c) m[c] = e.matches(layout, c) ? 1.0 : 0.0;
    return m;
}

Posterior Oracle::posterior(const Eigen::VectorXd& x, int tuple_index) const {
    Posterior post = posterior(x);
    Eigen::VectorXd p = restrict_to(post.p, tuple_index);
    const double s = p.sum();
    if (!(s > 0.0)) {
        p = restrict_to(cell_mass(), tuple_index);
        return {p / p.sum(), true};
    }
    return {p / s, post.fallback};
}

// ---------------------------------------------------------------- discrete

DiscreteJointDistribution::DiscreteJointDistribution(SensitiveLayout layout, std::vector<SupportPoint> points)
    : layout_(std::move(layout)), points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("empty support");
    dim_ = static_cast<int>(points_.front().x.size());
    double total = 0.0;
    std::map<std::tuple<std::vector<double>, int>, int> seen;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (p.x.size() != dim_) throw std::invalid_argument("support points differ in dimension");
        if (p.mass < 0.0) throw std::invalid_argument("negative mass");
        if (p.y != 0 && p.y != 1) throw std::invalid_argument("label must be 0 or 1");
        const int cell = cell_of(p);
        if (!seen.emplace(std::make_tuple(key_of(p.x), cell), 1).second)
            throw std::invalid_argument("duplicate support point");
        by_x_[key_of(p.x)].push_back(i);
        total += p.mass;
        cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("masses must sum to 1");
}

Eigen::VectorXd DiscreteJointDistribution::cell_mass() const {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(layout_.cells());
    for (const auto& p : points_) m[cell_of(p)] += p.mass;
    return m;
}

Posterior DiscreteJointDistribution::posterior(const Eigen::VectorXd& x) const {
    auto it = by_x_.find(key_of(x));
    if (it != by_x_.end()) {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(layout_.cells());
        for (auto i : it->second) m[cell_of(points_[i])] += points_[i].mass;
        const double s = m.sum();
        if (s > 0.0) return {m / s, false};
    }
    return {cell_mass(), true};
}

Posterior DiscreteJointDistribution::posterior(const Eigen::VectorXd& x, int tuple_index) const {
    auto it = by_x_.find(key_of(x));
    if (it != by_x_.end()) {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(layout_.cells());
        for (auto i : it->second) {
            const int c = cell_of(points_[i]);
            if (c / 2 == tuple_index) m[c] += points_[i].mass;
        }
        const double s = m.sum();
        if (s > 0.0) return {m / s, false};
    }
    Eigen::VectorXd p = restrict_to(cell_mass(), tuple_index);
    const double s = p.sum();
    if (s > 0.0) p /= s;
    return {p, true};
}

Sample DiscreteJointDistribution::draw(Rng& rng) const {
    const auto& p = points_[pick(cumulative_, rng)];
    return {p.x, p.z, p.y};
}

std::vector<Eigen::VectorXd> DiscreteJointDistribution::distinct_x() const {
    std::vector<Eigen::VectorXd> out;
    std::map<std::vector<double>, int> seen;
    for (const auto& p : points_)
        if (seen.emplace(key_of(p.x), 1).second) out.push_back(p.x);
    return out;
}

// --------------------------------------------------------------------- gnb

GnbJointDistribution::GnbJointDistribution(SensitiveLayout layout, std::vector<GnbCell> cells, GnbConfig cfg)
    : layout_(std::move(layout)), cells_(std::move(cells)), cfg_(cfg) {
    if (static_cast<int>(cells_.size()) != layout_.cells())
        throw std::invalid_argument("one Gaussian cell per (z, y) is required");
    dim_ = static_cast<int>(cells_.front().mean.size());
    double total = 0.0;
    for (const auto& c : cells_) total += c.prior;
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("GNB priors must sum to 1");
    log_norm_.resize(layout_.cells());
    for (int k = 0; k < layout_.cells(); ++k) {
        auto& c = cells_[k];
        if (c.mean.size() != dim_ || c.var.size() != dim_) throw std::invalid_argument("GNB dimension mismatch");
        if ((c.var.array() < cfg_.var_floor).any()) {
            c.var = c.var.cwiseMax(cfg_.var_floor);
            floored_ = true;
        }
        log_norm_[k] = std::log(c.prior) - 0.5 * (2.0 * std::numbers::pi * c.var.array()).log().sum();
        cumulative_.push_back(cumulative_.empty() ? c.prior : cumulative_.back() + c.prior);
    }
}

Eigen::VectorXd GnbJointDistribution::cell_mass() const {
    Eigen::VectorXd m(layout_.cells());
    for (int k = 0; k < layout_.cells(); ++k) m[k] = cells_[k].prior;
    return m;
}

Eigen::VectorXd GnbJointDistribution::log_joint(const Eigen::VectorXd& x) const {
    Eigen::VectorXd l(layout_.cells());
    for (int k = 0; k < layout_.cells(); ++k) {
        const auto& c = cells_[k];
        l[k] = log_norm_[k] - 0.5 * ((x - c.mean).array().square() / c.var.array()).sum();
    }
    return l;
}

namespace {

Posterior softmax_or_prior(const Eigen::VectorXd& l, const Eigen::VectorXd& prior) {
    const double mx = l.maxCoeff();
    if (!std::isfinite(mx)) return {prior / prior.sum(), true};
    Eigen::VectorXd p(l.size());
    for (Eigen::Index k = 0; k < l.size(); ++k) p[k] = std::isinf(l[k]) ? 0.0 : std::exp(l[k] - mx);
    return {p / p.sum(), false};
}

}  // namespace

Posterior GnbJointDistribution::posterior(const Eigen::VectorXd& x) const {
    return softmax_or_prior(log_joint(x), cell_mass());
}

Posterior GnbJointDistribution::posterior(const Eigen::VectorXd& x, int tuple_index) const {
    Eigen::VectorXd l = log_joint(x);
    Eigen::VectorXd pr = restrict_to(cell_mass(), tuple_index);
    for (int k = 0; k < l.size(); ++k)
        if (k / 2 != tuple_index) l[k] = -std::numeric_limits<double>::infinity();
    Posterior p = softmax_or_prior(l, pr);
    return p;
}

Sample GnbJointDistribution::draw(Rng& rng) const {
    const auto k = pick(cumulative_, rng);
    const auto& c = cells_[k];
    std::normal_distribution<double> n01(0.0, 1.0);
    Eigen::VectorXd x(dim_);
    for (int j = 0; j < dim_; ++j) x[j] = c.mean[j] + std::sqrt(c.var[j]) * n01(rng);
    return {x, layout_.tuple(static_cast<int>(k) / 2), static_cast<int>(k) % 2};
}

GnbJointDistribution fit_gnb(const std::vector<Sample>& samples, const SensitiveLayout& layout, GnbConfig cfg) {
    if (samples.empty()) throw std::invalid_argument("fit_gnb: no samples");
    const int d = static_cast<int>(samples.front().features.size());
    const int K = layout.cells();
    std::vector<Eigen::VectorXd> sum(K, Eigen::VectorXd::Zero(d)), sq(K, Eigen::VectorXd::Zero(d));
    std::vector<double> count(K, 0.0);
    Eigen::VectorXd gsum = Eigen::VectorXd::Zero(d), gsq = Eigen::VectorXd::Zero(d);
    for (const auto& s : samples) {
        if (s.features.size() != d) throw std::invalid_argument("fit_gnb: feature dimension mismatch");
        const int k = 2 * layout.tuple_index(s.sensitive) + s.label;
        sum[k] += s.features;
        sq[k] += s.features.cwiseProduct(s.features);
        count[k] += 1.0;
        gsum += s.features;
        gsq += s.features.cwiseProduct(s.features);
    }
    for (int t = 0; t < layout.tuples(); ++t) {
        if (count[2 * t] + count[2 * t + 1] == 0.0) {
            std::string name;
            for (int v : layout.tuple(t)) name += (name.empty() ? "" : ",") + std::to_string(v);
            throw std::invalid_argument("fit_gnb: no samples for sensitive group (" + name + ")");
        }
    }
    const double n = static_cast<double>(samples.size());
    const Eigen::VectorXd gmean = gsum / n;
    const Eigen::VectorXd gvar = (gsq / n - gmean.cwiseProduct(gmean)).cwiseMax(0.0);
    bool floored = false;
    std::vector<GnbCell> cells(K);
    for (int k = 0; k < K; ++k) {
        cells[k].prior = (count[k] + cfg.prior_pseudocount) / (n + cfg.prior_pseudocount * K);
        if (count[k] > 0.0) {
            cells[k].mean = sum[k] / count[k];
            cells[k].var = (sq[k] / count[k] - cells[k].mean.cwiseProduct(cells[k].mean)).cwiseMax(0.0);
        } else {
            cells[k].mean = gmean;
            cells[k].var = gvar;
        }
        if ((cells[k].var.array() < cfg.var_floor).any()) floored = true;
        cells[k].var = cells[k].var.cwiseMax(cfg.var_floor);
    }
    GnbJointDistribution out(layout, std::move(cells), cfg);
    out.set_floored(floored);
    return out;
}

// ------------------------------------------------------------ free queries

double prob_event(const Oracle& dist, const Event& e) {
    if (e.subset) throw std::invalid_argument("prob_event: feature-subset events need an expectation pool");
    return dist.cell_mass().dot(cell_mask(dist.layout(), e));
}

double eta(const Oracle& dist, const Eigen::VectorXd& x, std::optional<int> tuple_index) {
    const Posterior p = tuple_index ? dist.posterior(x, *tuple_index) : dist.posterior(x);
    return p.p.dot(cell_mask(dist.layout(), Event::y(1)));
}

double cond_group_event(const Oracle& dist, const Eigen::VectorXd& x, int attribute, int value, const Event& e,
                        std::optional<int> tuple_index) {
    const Posterior p = tuple_index ? dist.posterior(x, *tuple_index) : dist.posterior(x);
    return p.p.dot(cell_mask(dist.layout(), e.and_group(attribute, value)));
}

double tv_distance(const DiscreteJointDistribution& a, const DiscreteJointDistribution& b) {
    std::map<std::tuple<std::vector<double>, std::vector<int>, int>, std::pair<double, double>> m;
    for (const auto& p : a.points()) m[{key_of(p.x), p.z, p.y}].first += p.mass;
    for (const auto& p : b.points()) m[{key_of(p.x), p.z, p.y}].second += p.mass;
    double s = 0.0;
    for (const auto& [k, v] : m) s += std::abs(v.first - v.second);
    return 0.5 * s;
}

Sample draw_sample(const Oracle& dist, Rng& rng) { return dist.draw(rng); }

}  // namespace faircls
