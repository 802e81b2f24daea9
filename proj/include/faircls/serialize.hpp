#pragma once

#include "faircls/data.hpp"
#include "faircls/distribution.hpp"
#include "faircls/meta.hpp"
#include "faircls/metrics.hpp"
#include "faircls/perf_spec.hpp"
#include "faircls/solver.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>

namespace faircls {

using Json = nlohmann::json;

Json to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);

Json to_json(const PerfSpec& spec);
PerfSpec spec_from_json(const Json& j);

Json to_json(const FairnessBox& box);
FairnessBox box_from_json(const Json& j);

Json to_json(const LagrangianParams& p);
LagrangianParams params_from_json(const Json& j);

/// Fixture files: either a bare list of {x, z, y, mass} or an object with
/// "cardinalities" and "points".
Json to_json(const DiscreteJointDistribution& d);
DiscreteJointDistribution discrete_from_json(const Json& j);
DiscreteJointDistribution load_fixture(const std::string& path);

Json to_json(const GnbJointDistribution& d);
GnbJointDistribution gnb_from_json(const Json& j);

Json to_json(const FeatureEncoder& e);
FeatureEncoder encoder_from_json(const Json& j, const DatasetSchema& schema);

Json to_json(const ThresholdClassifier& clf);
/// The oracle is stored inline; discrete and Gaussian oracles round-trip.
ThresholdClassifier classifier_from_json(const Json& j);

Json to_json(const QVector& q);
Json to_json(const RunReport& r, bool include_timing);
Json to_json(const MetricsReport& r);
Json to_json(const PriceReport& r);

/// A trained model: classifier plus whatever maps raw rows to features.
struct ModelFile {
    ThresholdClassifier classifier;
    std::optional<DatasetSchema> schema;
    std::optional<FeatureEncoder> encoder;
};

Json to_json(const ModelFile& m);
ModelFile model_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace faircls
