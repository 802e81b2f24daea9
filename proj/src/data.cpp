#include "faircls/data.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#ifndef FAIRCLS_SCHEMA_DIR
#define FAIRCLS_SCHEMA_DIR "data/schemas"
#endif

namespace faircls {

using nlohmann::json;

SensitiveLayout DatasetSchema::layout() const {
    std::vector<int> card;
    for (const auto& s : sensitive) card.push_back(static_cast<int>(s.levels.size()));
    return SensitiveLayout(card);
}

bool DatasetSchema::operator==(const DatasetSchema& o) const {
    return schema_to_json_text(*this) == schema_to_json_text(o);
}

DatasetSchema schema_from_json_text(const std::string& text) {
    DatasetSchema s;
    try {
        const json j = json::parse(text);
        s.name = j.value("name", "custom");
        s.encoding = j.value("encoding", "target");
        if (s.encoding != "target" && s.encoding != "onehot") throw DataError("schema encoding must be target or onehot");
        for (const auto& f : j.at("features")) {
            FeatureDef d;
            d.name = f.at("name").get<std::string>();
            const std::string type = f.value("type", "continuous");
            if (type == "categorical") d.kind = FeatureKind::Categorical;
            else if (type != "continuous") throw DataError("feature '" + d.name + "' has unknown type " + type);
            d.levels = f.value("levels", std::vector<std::string>{});
            const std::string transform = f.value("transform", "none");
            if (transform == "log1p") d.log1p = true;
            else if (transform != "none") throw DataError("feature '" + d.name + "' has unknown transform " + transform);
            s.features.push_back(std::move(d));
        }
        for (const auto& z : j.at("sensitive")) {
            SensitiveDef d{z.at("column").get<std::string>(), z.at("levels").get<std::vector<std::string>>()};
            if (d.levels.size() < 2) throw DataError("sensitive attribute '" + d.column + "' needs two levels");
            s.sensitive.push_back(std::move(d));
        }
        s.label = j.at("label").at("column").get<std::string>();
        s.positive = j.at("label").at("positive").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed schema: ") + e.what());
    }
    if (s.features.empty()) throw DataError("schema lists no features");
    if (s.sensitive.empty()) throw DataError("schema lists no sensitive attribute");
    return s;
}

std::string schema_to_json_text(const DatasetSchema& s) {
    json j;
    j["name"] = s.name;
    j["encoding"] = s.encoding;
    j["features"] = json::array();
    for (const auto& f : s.features) {
        json d{{"name", f.name}, {"type", f.kind == FeatureKind::Categorical ? "categorical" : "continuous"}};
        if (!f.levels.empty()) d["levels"] = f.levels;
        if (f.log1p) d["transform"] = "log1p";
        j["features"].push_back(d);
    }
    j["sensitive"] = json::array();
    for (const auto& z : s.sensitive) j["sensitive"].push_back({{"column", z.column}, {"levels", z.levels}});
    j["label"] = {{"column", s.label}, {"positive", s.positive}};
    return j.dump(2);
}

DatasetSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open schema file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return schema_from_json_text(ss.str());
}

std::string builtin_schema_dir() {
    if (const char* env = std::getenv("FAIRCLS_SCHEMA_DIR")) return env;
    return FAIRCLS_SCHEMA_DIR;
}

DatasetSchema resolve_schema(const std::string& name_or_path) {
    if (name_or_path == "adult" || name_or_path == "german" || name_or_path == "compas")
        return load_schema(builtin_schema_dir() + "/" + name_or_path + ".json");
    return load_schema(name_or_path);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cur += '"', ++i;
            else if (c == '"') quoted = false;
            else cur += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool missing(const std::string& v) { return v.empty() || v == "?" || v == "NA" || v == "NaN"; }

}  // namespace

Dataset parse_csv(std::istream& in, const DatasetSchema& schema) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty CSV");
    const std::vector<std::string> header = split_csv_line(line);
    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw DataError("column '" + name + "' missing from CSV header");
        return static_cast<std::size_t>(it - header.begin());
    };
    std::vector<std::size_t> fcol, zcol;
    for (const auto& f : schema.features) fcol.push_back(column(f.name));
    for (const auto& z : schema.sensitive) zcol.push_back(column(z.column));
    const std::size_t ycol = column(schema.label);

    struct Raw {
        std::vector<std::string> f;
        std::vector<int> z;
        int y;
    };
    std::vector<Raw> rows;
    Dataset ds;
    ds.schema = schema;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError("line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                            " fields, header has " + std::to_string(header.size()));
        Raw r;
        bool drop = missing(cells[ycol]);
        for (auto c : fcol) drop = drop || missing(cells[c]);
        for (auto c : zcol) drop = drop || missing(cells[c]);
        if (drop) {
            ++ds.dropped_missing;
            continue;
        }
        bool outside = false;
        for (std::size_t a = 0; a < zcol.size(); ++a) {
            const auto& lv = schema.sensitive[a].levels;
            const auto it = std::find(lv.begin(), lv.end(), cells[zcol[a]]);
            if (it == lv.end()) outside = true;
            else r.z.push_back(static_cast<int>(it - lv.begin()));
        }
        if (outside) {
            ++ds.dropped_sensitive;
            continue;
        }
        for (auto c : fcol) r.f.push_back(cells[c]);
        r.y = std::find(schema.positive.begin(), schema.positive.end(), cells[ycol]) != schema.positive.end();
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw DataError("no usable rows");

    // freeze categorical levels (sorted) where the schema leaves them open
    for (std::size_t k = 0; k < schema.features.size(); ++k) {
        auto& f = ds.schema.features[k];
        if (f.kind != FeatureKind::Categorical || !f.levels.empty()) continue;
        std::vector<std::string> lv;
        for (const auto& r : rows) lv.push_back(r.f[k]);
        std::sort(lv.begin(), lv.end());
        lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
        f.levels = std::move(lv);
    }

    ds.samples.reserve(rows.size());
    for (const auto& r : rows) {
        Sample s;
        s.features.resize(static_cast<Eigen::Index>(schema.features.size()));
        for (std::size_t k = 0; k < schema.features.size(); ++k) {
            const auto& f = ds.schema.features[k];
            if (f.kind == FeatureKind::Categorical) {
                const auto it = std::find(f.levels.begin(), f.levels.end(), r.f[k]);
                s.features[k] = it == f.levels.end() ? -1.0 : static_cast<double>(it - f.levels.begin());
            } else {
                char* end = nullptr;
                s.features[k] = std::strtod(r.f[k].c_str(), &end);
                if (end == r.f[k].c_str() || *end != '\0')
                    throw DataError("non-numeric value '" + r.f[k] + "' in continuous column " + f.name);
            }
        }
        s.sensitive = r.z;
        s.label = r.y;
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

Dataset load_csv(const std::string& path, const DatasetSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file " + path);
    return parse_csv(in, schema);
}

std::pair<std::vector<Sample>, std::vector<Sample>> split(const std::vector<Sample>& samples, const SplitConfig& cfg) {
    if (!(cfg.fraction > 0.0 && cfg.fraction < 1.0)) throw std::invalid_argument("split fraction must lie in (0, 1)");
    if (samples.empty()) throw std::invalid_argument("split of an empty sample list");
    std::vector<std::size_t> idx(samples.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(cfg.repetition)};
    Rng rng(seq);
    for (std::size_t i = idx.size() - 1; i > 0; --i) std::swap(idx[i], idx[rng() % (i + 1)]);
    const auto n_train = static_cast<std::size_t>(std::llround(cfg.fraction * static_cast<double>(samples.size())));
    std::pair<std::vector<Sample>, std::vector<Sample>> out;
    for (std::size_t k = 0; k < idx.size(); ++k) (k < n_train ? out.first : out.second).push_back(samples[idx[k]]);
    return out;
}

FeatureEncoder FeatureEncoder::fit(const std::vector<Sample>& train, const DatasetSchema& schema) {
    if (train.empty()) throw DataError("cannot fit an encoder on no samples");
    FeatureEncoder enc;
    enc.encoding = schema.encoding;
    enc.features = schema.features;
    double pos = 0.0;
    for (const auto& s : train) pos += s.label;
    const double prior = (pos + 0.5) / (static_cast<double>(train.size()) + 1.0);
    enc.unseen_value = std::log(prior / (1.0 - prior));
    enc.level_value.resize(enc.features.size());
    for (std::size_t k = 0; k < enc.features.size(); ++k) {
        const auto& f = enc.features[k];
        if (f.kind != FeatureKind::Categorical || enc.encoding != "target") continue;
        std::vector<double> cnt(f.levels.size(), 0.0), hit(f.levels.size(), 0.0);
        for (const auto& s : train) {
            const int l = static_cast<int>(s.features[k]);
            if (l < 0) continue;
            cnt[l] += 1.0;
            hit[l] += s.label;
        }
        for (std::size_t l = 0; l < f.levels.size(); ++l) {
            const double r = (hit[l] + prior) / (cnt[l] + 1.0);
            enc.level_value[k].push_back(std::log(r / (1.0 - r)));
        }
    }
    // standardisation statistics over the unscaled encoding
    enc.mean.resize(0);
    const Eigen::Index d = enc.transform(train.front().features).size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(train.size()), d);
    for (std::size_t n = 0; n < train.size(); ++n) m.row(static_cast<Eigen::Index>(n)) = enc.transform(train[n].features);
    enc.mean = m.colwise().mean();
    enc.scale = ((m.rowwise() - enc.mean.transpose()).array().square().colwise().sum() / static_cast<double>(train.size()))
                    .sqrt()
                    .transpose();
    for (Eigen::Index j = 0; j < d; ++j)
        if (!(enc.scale[j] > 1e-12)) enc.scale[j] = 1.0;
    return enc;
}

Eigen::VectorXd FeatureEncoder::transform(const Eigen::VectorXd& raw) const {
    if (raw.size() != static_cast<Eigen::Index>(features.size())) throw DataError("raw row width does not match encoder");
    std::vector<double> out;
    for (std::size_t k = 0; k < features.size(); ++k) {
        const auto& f = features[k];
        if (f.kind == FeatureKind::Continuous) {
            out.push_back(f.log1p ? std::copysign(std::log1p(std::abs(raw[k])), raw[k]) : raw[k]);
        } else if (encoding == "target") {
            const int l = static_cast<int>(raw[k]);
            out.push_back(l >= 0 && l < static_cast<int>(level_value[k].size()) ? level_value[k][l] : unseen_value);
        } else {
            for (std::size_t l = 0; l < f.levels.size(); ++l) out.push_back(static_cast<int>(raw[k]) == static_cast<int>(l));
        }
    }
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
    if (mean.size() == 0) return v;
    return ((v - mean).array() / scale.array()).matrix();
}

std::vector<Sample> FeatureEncoder::transform(const std::vector<Sample>& raw) const {
    std::vector<Sample> out;
    out.reserve(raw.size());
    for (const auto& s : raw) out.push_back(Sample{transform(s.features), s.sensitive, s.label});
    return out;
}

}  // namespace faircls
