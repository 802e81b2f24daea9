#pragma once

#include "faircls/distribution.hpp"
#include "faircls/perf_spec.hpp"
#include "faircls/pool.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace faircls {

/// Per metric, per group bounds l <= q <= u.
struct FairnessBox {
    std::vector<Eigen::VectorXd> lower;
    std::vector<Eigen::VectorXd> upper;

    static FairnessBox uniform(const std::vector<int>& groups, const std::vector<double>& lo,
                               const std::vector<double>& hi);
    static FairnessBox uniform(int groups, double lo, double hi) {
        return uniform(std::vector<int>{groups}, std::vector<double>{lo}, std::vector<double>{hi});
    }
    void validate() const;
    bool operator==(const FairnessBox&) const = default;
};

struct LinearMultipliers {
    Eigen::VectorXd lambda;
};
struct FractionalMultipliers {
    Eigen::VectorXd nu;
    Eigen::VectorXd zeta;
};
/// lambda(i, j) for the constraint q_i >= tau q_j; the diagonal is unused.
struct PairMultipliers {
    Eigen::MatrixXd lambda;
};
using MetricMultipliers = std::variant<LinearMultipliers, FractionalMultipliers, PairMultipliers>;

struct LagrangianParams {
    std::vector<MetricMultipliers> metrics;
};

enum class BlockKind { Linear, FractionalLower, FractionalUpper, Pair };

/// One multiplier theta_r. Its constraint is c + E[a(x) f(x)] >= 0 with
/// a(x) = P(x).a + S(x) P(x).as. Free blocks (linear metrics) pair a lower
/// and an upper constraint: h(theta) = slope_pos*theta for theta >= 0 and
/// slope_neg*theta below 0. Other blocks are restricted to theta >= 0.
struct Block {
    BlockKind kind = BlockKind::Linear;
    int metric = 0;
    int group = 0;
    int other = -1;
    Eigen::VectorXd a;
    Eigen::VectorXd as;
    double slope_pos = 0.0;
    double slope_neg = 0.0;
    bool free = false;
};

struct ConstraintSystem {
    SensitiveLayout layout;
    std::vector<Block> blocks;
    std::vector<int> groups_per_metric;
    std::vector<SpecKind> kinds;
    bool meta2 = false;

    int size() const { return static_cast<int>(blocks.size()); }
    bool uses_subset() const;
    double h(const Eigen::VectorXd& theta) const;
    Eigen::VectorXd h_subgradient(const Eigen::VectorXd& theta) const;
    void project(Eigen::VectorXd& theta) const;
};

ConstraintSystem build_system(const std::vector<PerfSpec>& specs, const FairnessBox& box,
                              const SensitiveLayout& layout);
ConstraintSystem build_meta2_system(const PerfSpec& spec, double tau, const SensitiveLayout& layout);

LagrangianParams to_params(const ConstraintSystem& sys, const Eigen::VectorXd& theta);
Eigen::VectorXd to_theta(const ConstraintSystem& sys, const LagrangianParams& params);

/// The system evaluated on a pool: row scores are base + A*theta.
struct PooledSystem {
    Eigen::VectorXd base;  // eta - 1/2
    Eigen::MatrixXd A;     // rows x blocks, a_r(x_n)
    Eigen::VectorXd w;
    const ConstraintSystem* sys = nullptr;

    PooledSystem(const ConstraintSystem& s, const ExpectationPool& pool);
    Eigen::VectorXd scores(const Eigen::VectorXd& theta) const { return base + A * theta; }
    double dual(const Eigen::VectorXd& theta) const;
    Eigen::VectorXd subgradient(const Eigen::VectorXd& theta) const;
    /// Constraint slacks for a labeling: one entry per block, plus one more
    /// per free block for its upper side. Negative means violated.
    Eigen::VectorXd slacks(const Eigen::VectorXd& f) const;
    double max_violation(const Eigen::VectorXd& f) const;
};

struct SolverConfig {
    int iterations = 20000;
    double step = 1.0;  // c_t = step / sqrt(iterations)
    double lambda_max = 1e3;
    int batch = 64;
    std::optional<double> tolerance;  // default 1e-3 exact, 1e-2 Monte Carlo
    std::uint64_t seed = 0;
    int eval_every = 250;
    int exact_search_rows = 20;  // exact pools up to this size get the exact labeling search

    double tolerance_for(const ExpectationPool& pool) const;
};

/// Label pinned on one support row (exact pools only): used where the
/// optimal deterministic labeling cannot be written as a strict threshold.
struct LabelOverride {
    Eigen::VectorXd x;
    int tuple = -1;
    int label = 0;
};

class ThresholdClassifier {
public:
    Mode mode = Mode::GroupUnaware;
    std::vector<PerfSpec> specs;
    LagrangianParams params;
    Eigen::VectorXd coef;         // e_{y=1} + sum theta_r a_r over cells
    Eigen::VectorXd coef_subset;  // sum theta_r as_r
    std::optional<FeatureSubset> subset;
    std::shared_ptr<const Oracle> oracle;
    std::vector<LabelOverride> overrides;
    std::optional<FairnessBox> box;
    std::optional<double> tau;

    double score(const Eigen::VectorXd& x, std::optional<int> tuple_index = {}) const;
    int predict(const Eigen::VectorXd& x, std::optional<int> tuple_index = {}) const;
    /// Labels of the pool rows.
    Eigen::VectorXd label_pool(const ExpectationPool& pool) const;
};

ThresholdClassifier make_classifier(const ConstraintSystem& sys, const Eigen::VectorXd& theta,
                                    std::shared_ptr<const Oracle> oracle, Mode mode,
                                    const std::optional<FeatureSubset>& subset = {});

double threshold_score(const ThresholdClassifier& clf, const Eigen::VectorXd& x,
                       std::optional<int> tuple_index = {});
int predict(const ThresholdClassifier& clf, const Eigen::VectorXd& x, std::optional<int> tuple_index = {});

double dual_objective(const LagrangianParams& params, const FairnessBox& box, const std::vector<PerfSpec>& specs,
                      const ExpectationPool& pool);
Eigen::VectorXd subgradient(const LagrangianParams& params, const FairnessBox& box,
                            const std::vector<PerfSpec>& specs, const ExpectationPool& pool);
/// Single-draw estimate of the subgradient at theta.
Eigen::VectorXd stochastic_subgradient(const ConstraintSystem& sys, const Eigen::VectorXd& theta,
                                       const Oracle& dist, const Sample& s, Mode mode,
                                       const std::optional<FeatureSubset>& subset = {});
/// Upper bound on E||g~||^2 for a linear spec with the lambda parametrisation.
double subgradient_variance_bound(const PerfSpec& spec);

struct SolveResult {
    std::optional<ThresholdClassifier> classifier;
    Eigen::VectorXd theta;
    double dual_value = 0.0;
    double lower_bound = 0.0;  // pi - 2 phi(theta), valid for every feasible labeling
    double error = 0.0;
    double max_violation = 0.0;
    bool exact_search = false;
    long nodes = 0;
    std::string status;  // "optimal", "threshold", "infeasible"

    bool feasible() const { return classifier.has_value(); }
};

SolveResult solve_system(const ConstraintSystem& sys, const ExpectationPool& pool,
                         std::shared_ptr<const Oracle> oracle, const SolverConfig& cfg);
SolveResult solve_group_fair(std::shared_ptr<const Oracle> oracle, const ExpectationPool& pool,
                             const std::vector<PerfSpec>& specs, const FairnessBox& box, const SolverConfig& cfg);
SolveResult solve_meta2(std::shared_ptr<const Oracle> oracle, const ExpectationPool& pool, const PerfSpec& spec,
                        double tau, const SolverConfig& cfg);

}  // namespace faircls
