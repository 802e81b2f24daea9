#pragma once

#include "faircls/distribution.hpp"
#include "faircls/pool.hpp"
#include "faircls/solver.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace faircls {

struct GroupRates {
    Eigen::VectorXd rate;
    std::vector<bool> defined;
    double gamma = 0.0;
    bool gamma_defined = false;
};

struct MetricsReport {
    double accuracy = 0.0;
    std::map<std::string, GroupRates> metrics;
    std::vector<long> group_counts;
    long samples = 0;
};

/// Names reported on test sets (the catalog without csr).
const std::vector<std::string>& report_metric_names();

MetricsReport empirical_report(const std::vector<int>& predictions, const std::vector<Sample>& samples,
                               int attribute = 0, int groups = 2);
MetricsReport empirical_report(const ThresholdClassifier& clf, const std::vector<Sample>& samples,
                               int attribute = 0);

struct PriceReport {
    double f_direct = 0.0;
    double f_formula = 0.0;
    double gap = 0.0;
    LagrangianParams lambda;
    double constrained_error = 0.0;
    double unconstrained_error = 0.0;
};

/// Exact price of a box on a discrete distribution: two solves plus the
/// closed form 2 E[|eta - 1/2| I[(eta - 1/2) s(x) <= 0]].
PriceReport price_of_fairness(std::shared_ptr<const DiscreteJointDistribution> dist, const std::string& metric,
                              const FairnessBox& box, const SolverConfig& cfg = {},
                              Mode mode = Mode::GroupUnaware, int attribute = 0);

struct KappaTv {
    double kappa = 0.0;
    double tv = 0.0;
};

/// Enumerates every deterministic classifier on the joint support (at most
/// 12 distinct feature vectors).
KappaTv kappa_and_tv(const DiscreteJointDistribution& truth, const DiscreteJointDistribution& est,
                     const std::string& metric, int attribute = 0);

/// Distinct x over both supports, in first-appearance order.
std::vector<Eigen::VectorXd> joint_support(const DiscreteJointDistribution& a, const DiscreteJointDistribution& b);

}  // namespace faircls
