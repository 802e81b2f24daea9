#pragma once

#include "faircls/data.hpp"
#include "faircls/meta.hpp"
#include "faircls/metrics.hpp"

#include <memory>
#include <optional>

namespace faircls {

struct ExperimentConfig {
    MetaConfig meta;
    SplitConfig split;
    std::size_t pool_draws = 100000;
    std::optional<FeatureSubset> subset;  // needed by csr
    bool pool_from_train = false;         // training rows instead of model draws
};

/// One split of a dataset: encode, fit the Gaussian model, run the grid,
/// evaluate on both halves.
struct ExperimentResult {
    FeatureEncoder encoder;
    std::shared_ptr<const GnbJointDistribution> gnb;
    std::optional<ThresholdClassifier> classifier;  // empty when every cell was infeasible
    RunReport report;
    MetricsReport train;
    MetricsReport test;
};

std::uint64_t pool_seed(const SplitConfig& split);

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& cfg);

}  // namespace faircls
