#pragma once

#include "faircls/distribution.hpp"
#include "faircls/pool.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace faircls {

enum class SpecKind { Linear, Fractional };

/// One alpha_j * Pr[f=1 | G_i, A_j] term. `pi` is Pr[G_i, A_j]; the
/// expectation form uses alpha/pi as the weight of Pr[G_i, A_j | x].
struct Term {
    double alpha = 0.0;
    double pi = 0.0;
    Event event;         // A_j, without the group condition
    std::string symbol;  // how alpha was resolved, for model files
    double scale() const { return pi > 0.0 ? alpha / pi : 0.0; }
};

struct LinearForm {
    double offset = 0.0;
    std::vector<Term> terms;
};

struct PerfSpec {
    std::string name;
    SpecKind kind = SpecKind::Linear;
    int attribute = 0;
    int groups = 2;
    std::vector<LinearForm> numerator;    // one per group
    std::vector<LinearForm> denominator;  // fractional only
    std::optional<FeatureSubset> subset;

    bool linear() const { return kind == SpecKind::Linear; }
};

/// Per-group coefficient view of a linear form: value(f) = offset + E[P(x).(d + S(x) dS) f(x)].
struct Direction {
    double offset = 0.0;
    Eigen::VectorXd d;
    Eigen::VectorXd ds;
};

Direction direction(const LinearForm& form, const SensitiveLayout& layout, int attribute, int group);

const std::vector<std::string>& catalog_names();
bool is_fractional_metric(const std::string& name);

/// Builds a catalogue metric with coefficients resolved against the
/// pool. csr requires the pool to carry a feature subset.
PerfSpec catalog_metric(const std::string& name, const ExpectationPool& pool, int attribute = 0);

struct QVector {
    Eigen::VectorXd value;
    std::vector<bool> defined;

    int size() const { return static_cast<int>(value.size()); }
    int defined_count() const;
};

/// q_i(f) for a 0/1 labeling of the pool rows, in expectation form.
QVector eval_q(const PerfSpec& spec, const ExpectationPool& pool, const Eigen::VectorXd& f);

/// q_i(f) from the conditional-probability definition, summing the table.
QVector eval_q_conditional(const PerfSpec& spec, const DiscreteJointDistribution& dist,
                           const std::function<int(const SupportPoint&)>& f);

struct RatioResult {
    double value = 0.0;
    std::vector<int> excluded;
};

RatioResult rho(const QVector& q);
RatioResult delta(const QVector& q);

/// Min-over-max of a fully defined vector; 1 when the max is 0.
template <typename Derived>
typename Derived::Scalar rho(const Eigen::MatrixBase<Derived>& q) {
    using Scalar = typename Derived::Scalar;
    if (q.size() < 1) throw std::invalid_argument("rho of an empty vector");
    const Scalar mx = q.maxCoeff();
    if (mx == Scalar(0)) return Scalar(1);
    return q.minCoeff() / mx;
}

template <typename Derived>
typename Derived::Scalar delta(const Eigen::MatrixBase<Derived>& q) {
    if (q.size() < 1) throw std::invalid_argument("delta of an empty vector");
    return q.minCoeff() - q.maxCoeff();
}

}  // namespace faircls
