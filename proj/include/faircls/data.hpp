#pragma once

#include "faircls/distribution.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace faircls {

/// Raised for unreadable or inconsistent input data (CLI exit code 4).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FeatureKind { Continuous, Categorical };

struct FeatureDef {
    std::string name;
    FeatureKind kind = FeatureKind::Continuous;
    std::vector<std::string> levels;  // categorical; filled from data when empty
    bool log1p = false;               // continuous: sign(v) log(1 + |v|) before scaling
};

struct SensitiveDef {
    std::string column;
    std::vector<std::string> levels;  // rows with other values are dropped
};

struct DatasetSchema {
    std::string name;
    std::string encoding = "target";  // "target" or "onehot"
    std::vector<FeatureDef> features;
    std::vector<SensitiveDef> sensitive;
    std::string label;
    std::vector<std::string> positive;

    SensitiveLayout layout() const;
    bool operator==(const DatasetSchema& o) const;
};

DatasetSchema schema_from_json_text(const std::string& text);
std::string schema_to_json_text(const DatasetSchema& s);
DatasetSchema load_schema(const std::string& path);
/// "adult", "german", "compas" resolve to the shipped schema files; any other
/// value is read as a path.
DatasetSchema resolve_schema(const std::string& name_or_path);
std::string builtin_schema_dir();

/// Rows as parsed: continuous values verbatim, categorical values as level
/// indices (-1 for a level unseen when the schema was frozen).
struct Dataset {
    DatasetSchema schema;
    std::vector<Sample> samples;
    std::size_t dropped_missing = 0;
    std::size_t dropped_sensitive = 0;
};

Dataset load_csv(const std::string& path, const DatasetSchema& schema);
Dataset parse_csv(std::istream& in, const DatasetSchema& schema);

struct SplitConfig {
    double fraction = 0.7;
    std::uint64_t seed = 0;
    int repetition = 0;
};

std::pair<std::vector<Sample>, std::vector<Sample>> split(const std::vector<Sample>& samples, const SplitConfig& cfg);

/// Maps raw rows to the real-valued features the Gaussian model sees:
/// categoricals by smoothed log-odds of the label (or one-hot), then every
/// column standardised with training statistics.
struct FeatureEncoder {
    std::string encoding = "target";
    std::vector<FeatureDef> features;
    std::vector<std::vector<double>> level_value;  // target encoding per feature
    double unseen_value = 0.0;
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;

    static FeatureEncoder fit(const std::vector<Sample>& train, const DatasetSchema& schema);
    int dim() const { return static_cast<int>(mean.size()); }
    Eigen::VectorXd transform(const Eigen::VectorXd& raw) const;
    std::vector<Sample> transform(const std::vector<Sample>& raw) const;
};

}  // namespace faircls
