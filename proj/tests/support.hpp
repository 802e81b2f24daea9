#pragma once

#include <faircls/distribution.hpp>
#include <faircls/perf_spec.hpp>
#include <faircls/pool.hpp>
#include <faircls/solver.hpp>

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace fx {

using faircls::DiscreteJointDistribution;

std::string fixture_dir();
std::vector<std::string> fixture_names();
std::shared_ptr<const DiscreteJointDistribution> fixture(const std::string& name);

/// Labeling over the distinct feature vectors of a support, indexed by bit k.
struct Labeling {
    std::vector<Eigen::VectorXd> xs;
    unsigned mask = 0;
    int operator()(const faircls::SupportPoint& p) const;
    int at(const Eigen::VectorXd& x) const;
};

std::vector<Eigen::VectorXd> distinct_x(const DiscreteJointDistribution& d);

/// Pr[f != Y] summed straight off the table.
double table_error(const DiscreteJointDistribution& d, const std::function<int(const faircls::SupportPoint&)>& f);

/// q_i(f) straight from conditional probabilities on the table, with every
/// coefficient recomputed from the table (no pool involved).
faircls::QVector table_q(const std::string& metric, const DiscreteJointDistribution& d,
                         const std::function<int(const faircls::SupportPoint&)>& f,
                         const std::optional<faircls::FeatureSubset>& subset = {});

bool in_box(const faircls::QVector& q, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, double tol);

struct BruteForce {
    bool feasible = false;
    double error = 0.0;
    unsigned mask = 0;
};

/// Minimum error over all deterministic unaware classifiers passing `accept`.
BruteForce enumerate(const DiscreteJointDistribution& d,
                     const std::function<bool(const Labeling&)>& accept);

/// Perturbs masses pairwise by +-delta on random point pairs; returns a valid
/// distribution over the same support.
DiscreteJointDistribution perturb(const DiscreteJointDistribution& d, double delta, std::uint64_t seed);

}  // namespace fx
