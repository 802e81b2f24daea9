#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace faircls {

using Rng = std::mt19937_64;

/// Cardinalities of the sensitive attributes. A full tuple z maps to a
/// mixed-radix index; a cell is (tuple index, label) with index 2*z + y.
class SensitiveLayout {
public:
    SensitiveLayout() = default;
    explicit SensitiveLayout(std::vector<int> cardinalities);

    int attributes() const { return static_cast<int>(card_.size()); }
    int cardinality(int attr) const { return card_.at(attr); }
    const std::vector<int>& cardinalities() const { return card_; }
    int tuples() const { return tuples_; }
    int cells() const { return 2 * tuples_; }

    int tuple_index(const std::vector<int>& z) const;
    std::vector<int> tuple(int index) const;
    int attribute_value(int tuple_index, int attr) const;
    bool valid(const std::vector<int>& z) const;

    bool operator==(const SensitiveLayout&) const = default;

private:
    std::vector<int> card_;
    int tuples_ = 0;
};

struct Sample {
    Eigen::VectorXd features;
    std::vector<int> sensitive;
    int label = 0;
};

/// Predicate over (z, y). The subset flag marks the user feature subset used
/// by the conditional statistical rate; it is not a (z, y) condition and is
/// applied by the expectation pool, never by cell masks.
struct Event {
    std::optional<int> label;
    std::optional<int> attribute;
    std::optional<int> value;
    bool subset = false;

    static Event always() { return {}; }
    static Event y(int label) { return Event{label, {}, {}, false}; }
    static Event group(int attribute, int value) { return Event{{}, attribute, value, false}; }
    Event and_group(int attr, int val) const;
    Event and_label(int lab) const;

    bool matches(const SensitiveLayout& layout, int cell) const;
};

/// 0/1 indicator over cells.
Eigen::VectorXd cell_mask(const SensitiveLayout& layout, const Event& e);

struct Posterior {
    Eigen::VectorXd p;      // Pr[cell | x] (or | x, z)
    bool fallback = false;  // zero density at x, prior returned instead
};

/// Query surface consumed by the solver. Implementations are immutable once
/// built; const member functions are safe to call from several threads.
class Oracle {
public:
    virtual ~Oracle() = default;

    virtual const SensitiveLayout& layout() const = 0;
    virtual int dim() const = 0;
    /// Pr[cell] for every cell.
    virtual Eigen::VectorXd cell_mass() const = 0;
    virtual Posterior posterior(const Eigen::VectorXd& x) const = 0;
    /// Group-aware posterior Pr[cell | x, z]; zero off the tuple z.
    virtual Posterior posterior(const Eigen::VectorXd& x, int tuple_index) const;
    virtual Sample draw(Rng& rng) const = 0;
};

struct SupportPoint {
    Eigen::VectorXd x;
    std::vector<int> z;
    int y = 0;
    double mass = 0.0;
};

class DiscreteJointDistribution final : public Oracle {
public:
    DiscreteJointDistribution(SensitiveLayout layout, std::vector<SupportPoint> points);

    const SensitiveLayout& layout() const override { return layout_; }
    int dim() const override { return dim_; }
    Eigen::VectorXd cell_mass() const override;
    Posterior posterior(const Eigen::VectorXd& x) const override;
    Posterior posterior(const Eigen::VectorXd& x, int tuple_index) const override;
    Sample draw(Rng& rng) const override;

    const std::vector<SupportPoint>& points() const { return points_; }
    int cell_of(const SupportPoint& p) const { return 2 * layout_.tuple_index(p.z) + p.y; }

    /// Distinct feature vectors in first-appearance order.
    std::vector<Eigen::VectorXd> distinct_x() const;

private:
    SensitiveLayout layout_;
    std::vector<SupportPoint> points_;
    int dim_ = 0;
    std::map<std::vector<double>, std::vector<std::size_t>> by_x_;
    std::vector<double> cumulative_;
};

struct GnbCell {
    double prior = 0.0;
    Eigen::VectorXd mean;
    Eigen::VectorXd var;
};

struct GnbConfig {
    double var_floor = 1e-6;
    double prior_pseudocount = 1.0;
};

class GnbJointDistribution final : public Oracle {
public:
    GnbJointDistribution(SensitiveLayout layout, std::vector<GnbCell> cells, GnbConfig cfg = {});

    const SensitiveLayout& layout() const override { return layout_; }
    int dim() const override { return dim_; }
    Eigen::VectorXd cell_mass() const override;
    Posterior posterior(const Eigen::VectorXd& x) const override;
    Posterior posterior(const Eigen::VectorXd& x, int tuple_index) const override;
    Sample draw(Rng& rng) const override;

    const std::vector<GnbCell>& cells() const { return cells_; }
    const GnbConfig& config() const { return cfg_; }
    bool floored() const { return floored_; }
    void set_floored(bool v) { floored_ = v; }

    Eigen::VectorXd log_joint(const Eigen::VectorXd& x) const;

private:
    SensitiveLayout layout_;
    std::vector<GnbCell> cells_;
    GnbConfig cfg_;
    int dim_ = 0;
    bool floored_ = false;
    std::vector<double> cumulative_;
    Eigen::VectorXd log_norm_;
};

/// Per-cell Gaussian fit. Throws if a declared sensitive tuple has no sample.
GnbJointDistribution fit_gnb(const std::vector<Sample>& samples, const SensitiveLayout& layout,
                             GnbConfig cfg = {});

double prob_event(const Oracle& dist, const Event& e);
/// eta(x) = Pr[Y=1 | x], or Pr[Y=1 | x, z] when a tuple index is given.
double eta(const Oracle& dist, const Eigen::VectorXd& x, std::optional<int> tuple_index = {});
/// Pr[G_i, E | x] with G_i = (Z_attr = value).
double cond_group_event(const Oracle& dist, const Eigen::VectorXd& x, int attribute, int value,
                        const Event& e, std::optional<int> tuple_index = {});
double tv_distance(const DiscreteJointDistribution& a, const DiscreteJointDistribution& b);
Sample draw_sample(const Oracle& dist, Rng& rng);

}  // namespace faircls
