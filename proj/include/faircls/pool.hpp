#pragma once

#include "faircls/distribution.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>

namespace faircls {

enum class Mode { GroupUnaware, GroupAware };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

/// x[feature] <op> value, the user-supplied set S of the conditional
/// statistical rate.
struct FeatureSubset {
    enum class Op { Less, LessEq, Greater, GreaterEq };
    int feature = 0;
    Op op = Op::Greater;
    double value = 0.0;

    bool contains(const Eigen::VectorXd& x) const;
    std::string str() const;
    /// Parses "<index><op><value>", e.g. "0>0.5" or "2<=1".
    static FeatureSubset parse(const std::string& s);
    bool operator==(const FeatureSubset&) const = default;
};

/// A finite weighted view of X under an oracle: every expectation the solver
/// needs is a weighted sum over rows. Built exactly from a discrete support,
/// or from seeded oracle draws.
struct ExpectationPool {
    Mode mode = Mode::GroupUnaware;
    bool exact = false;
    SensitiveLayout layout;
    Eigen::MatrixXd x;          // rows are points
    Eigen::VectorXi tuple;      // sensitive tuple per row (aware mode), -1 otherwise
    Eigen::VectorXd w;          // weights, sum to 1
    Eigen::MatrixXd post;       // Pr[cell | row], rows x cells
    Eigen::VectorXd in_subset;  // 0/1 per row; empty when no subset attached
    std::optional<FeatureSubset> subset;

    Eigen::Index rows() const { return w.size(); }
    int cells() const { return layout.cells(); }

    /// Expected posterior mass per cell, i.e. Pr[cell] as seen by the pool.
    Eigen::VectorXd cell_mass() const { return post.transpose() * w; }
    /// Pr[cell, X in S] per cell.
    Eigen::VectorXd cell_mass_in_subset() const;
    Eigen::VectorXd eta() const;
    /// Pr[f != Y] for a 0/1 labeling of the rows.
    double error(const Eigen::VectorXd& f) const;

    void attach_subset(const FeatureSubset& s);
};

ExpectationPool make_pool(const DiscreteJointDistribution& dist, Mode mode);
ExpectationPool make_pool(const Oracle& dist, Mode mode, std::size_t draws, std::uint64_t seed);
/// Rows taken from observed feature vectors, posteriors from the oracle.
ExpectationPool make_pool(const Oracle& dist, Mode mode, const std::vector<Sample>& rows);

}  // namespace faircls
