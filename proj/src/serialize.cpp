#include "faircls/serialize.hpp"

#include <fstream>
#include <sstream>

namespace faircls {

Json to_json(const Eigen::VectorXd& v) {
    Json j = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

Eigen::VectorXd vector_from_json(const Json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

namespace {

Json opt(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }
std::optional<int> opt_int(const Json& j) { return j.is_null() ? std::nullopt : std::optional<int>(j.get<int>()); }

Json to_json(const Event& e) {
    return {{"label", opt(e.label)}, {"attribute", opt(e.attribute)}, {"value", opt(e.value)}, {"subset", e.subset}};
}

Event event_from_json(const Json& j) {
    return Event{opt_int(j.at("label")), opt_int(j.at("attribute")), opt_int(j.at("value")), j.at("subset").get<bool>()};
}

Json to_json(const LinearForm& f) {
    Json terms = Json::array();
    for (const auto& t : f.terms)
        terms.push_back({{"alpha", t.alpha}, {"pi", t.pi}, {"event", to_json(t.event)}, {"symbol", t.symbol}});
    return {{"offset", f.offset}, {"terms", terms}};
}

LinearForm form_from_json(const Json& j) {
    LinearForm f;
    f.offset = j.at("offset").get<double>();
    for (const auto& t : j.at("terms"))
        f.terms.push_back(Term{t.at("alpha").get<double>(), t.at("pi").get<double>(), event_from_json(t.at("event")),
                               t.at("symbol").get<std::string>()});
    return f;
}

Json to_json(const FeatureSubset& s) { return s.str(); }

}  // namespace

Json to_json(const PerfSpec& spec) {
    Json num = Json::array(), den = Json::array();
    for (const auto& f : spec.numerator) num.push_back(to_json(f));
    for (const auto& f : spec.denominator) den.push_back(to_json(f));
    Json j{{"name", spec.name},
           {"kind", spec.linear() ? "linear" : "fractional"},
           {"attribute", spec.attribute},
           {"groups", spec.groups},
           {"numerator", num},
           {"denominator", den}};
    j["subset"] = spec.subset ? to_json(*spec.subset) : Json(nullptr);
    return j;
}

PerfSpec spec_from_json(const Json& j) {
    PerfSpec s;
    s.name = j.at("name").get<std::string>();
    s.kind = j.at("kind").get<std::string>() == "linear" ? SpecKind::Linear : SpecKind::Fractional;
    s.attribute = j.at("attribute").get<int>();
    s.groups = j.at("groups").get<int>();
    for (const auto& f : j.at("numerator")) s.numerator.push_back(form_from_json(f));
    for (const auto& f : j.at("denominator")) s.denominator.push_back(form_from_json(f));
    if (!j.at("subset").is_null()) s.subset = FeatureSubset::parse(j.at("subset").get<std::string>());
    if (static_cast<int>(s.numerator.size()) != s.groups) throw std::invalid_argument("spec: one numerator per group");
    if (!s.linear() && static_cast<int>(s.denominator.size()) != s.groups)
        throw std::invalid_argument("spec: one denominator per group");
    return s;
}

Json to_json(const FairnessBox& box) {
    Json lo = Json::array(), hi = Json::array();
    for (const auto& v : box.lower) lo.push_back(to_json(v));
    for (const auto& v : box.upper) hi.push_back(to_json(v));
    return {{"lower", lo}, {"upper", hi}};
}

FairnessBox box_from_json(const Json& j) {
    FairnessBox b;
    for (const auto& v : j.at("lower")) b.lower.push_back(vector_from_json(v));
    for (const auto& v : j.at("upper")) b.upper.push_back(vector_from_json(v));
    b.validate();
    return b;
}

Json to_json(const LagrangianParams& p) {
    Json out = Json::array();
    for (const auto& m : p.metrics) {
        if (const auto* l = std::get_if<LinearMultipliers>(&m)) {
            out.push_back({{"type", "linear"}, {"lambda", to_json(l->lambda)}});
        } else if (const auto* f = std::get_if<FractionalMultipliers>(&m)) {
            out.push_back({{"type", "fractional"}, {"nu", to_json(f->nu)}, {"zeta", to_json(f->zeta)}});
        } else {
            const auto& pm = std::get<PairMultipliers>(m).lambda;
            Json rows = Json::array();
            for (Eigen::Index i = 0; i < pm.rows(); ++i) rows.push_back(to_json(Eigen::VectorXd(pm.row(i).transpose())));
            out.push_back({{"type", "pair"}, {"lambda", rows}});
        }
    }
    return out;
}

LagrangianParams params_from_json(const Json& j) {
    LagrangianParams p;
    for (const auto& m : j) {
        const std::string type = m.at("type").get<std::string>();
        if (type == "linear") {
            p.metrics.emplace_back(LinearMultipliers{vector_from_json(m.at("lambda"))});
        } else if (type == "fractional") {
            p.metrics.emplace_back(FractionalMultipliers{vector_from_json(m.at("nu")), vector_from_json(m.at("zeta"))});
        } else if (type == "pair") {
            const auto& rows = m.at("lambda");
            Eigen::MatrixXd lam(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
            for (std::size_t i = 0; i < rows.size(); ++i) lam.row(static_cast<Eigen::Index>(i)) = vector_from_json(rows[i]).transpose();
            p.metrics.emplace_back(PairMultipliers{lam});
        } else {
            throw std::invalid_argument("unknown multiplier type " + type);
        }
    }
    return p;
}

Json to_json(const DiscreteJointDistribution& d) {
    Json pts = Json::array();
    for (const auto& p : d.points()) pts.push_back({{"x", to_json(p.x)}, {"z", p.z}, {"y", p.y}, {"mass", p.mass}});
    return {{"cardinalities", d.layout().cardinalities()}, {"points", pts}};
}

DiscreteJointDistribution discrete_from_json(const Json& j) {
    const Json& pts = j.is_array() ? j : j.at("points");
    std::vector<SupportPoint> points;
    std::vector<int> card;
    for (const auto& p : pts) {
        SupportPoint sp;
        sp.x = vector_from_json(p.at("x"));
        sp.z = p.at("z").is_array() ? p.at("z").get<std::vector<int>>() : std::vector<int>{p.at("z").get<int>()};
        sp.y = p.at("y").get<int>();
        sp.mass = p.at("mass").get<double>();
        if (card.size() < sp.z.size()) card.resize(sp.z.size(), 2);
        for (std::size_t a = 0; a < sp.z.size(); ++a) card[a] = std::max(card[a], sp.z[a] + 1);
        points.push_back(std::move(sp));
    }
    if (j.is_object() && j.contains("cardinalities")) card = j.at("cardinalities").get<std::vector<int>>();
    return DiscreteJointDistribution(SensitiveLayout(card), std::move(points));
}

DiscreteJointDistribution load_fixture(const std::string& path) {
    try {
        return discrete_from_json(read_json_file(path));
    } catch (const Json::exception& e) {
        throw DataError("malformed fixture " + path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError("invalid fixture " + path + ": " + e.what());
    }
}

Json to_json(const GnbJointDistribution& d) {
    Json cells = Json::array();
    for (const auto& c : d.cells()) cells.push_back({{"prior", c.prior}, {"mean", to_json(c.mean)}, {"var", to_json(c.var)}});
    return {{"cardinalities", d.layout().cardinalities()},
            {"var_floor", d.config().var_floor},
            {"prior_pseudocount", d.config().prior_pseudocount},
            {"floored", d.floored()},
            {"cells", cells}};
}

GnbJointDistribution gnb_from_json(const Json& j) {
    std::vector<GnbCell> cells;
    for (const auto& c : j.at("cells"))
        cells.push_back(GnbCell{c.at("prior").get<double>(), vector_from_json(c.at("mean")), vector_from_json(c.at("var"))});
    GnbConfig cfg{j.at("var_floor").get<double>(), j.at("prior_pseudocount").get<double>()};
    GnbJointDistribution d(SensitiveLayout(j.at("cardinalities").get<std::vector<int>>()), std::move(cells), cfg);
    d.set_floored(j.value("floored", false));
    return d;
}

Json to_json(const FeatureEncoder& e) {
    return {{"encoding", e.encoding},
            {"level_value", e.level_value},
            {"unseen_value", e.unseen_value},
            {"mean", to_json(e.mean)},
            {"scale", to_json(e.scale)}};
}

FeatureEncoder encoder_from_json(const Json& j, const DatasetSchema& schema) {
    FeatureEncoder e;
    e.encoding = j.at("encoding").get<std::string>();
    e.features = schema.features;
    e.level_value = j.at("level_value").get<std::vector<std::vector<double>>>();
    e.unseen_value = j.at("unseen_value").get<double>();
    e.mean = vector_from_json(j.at("mean"));
    e.scale = vector_from_json(j.at("scale"));
    return e;
}

Json to_json(const ThresholdClassifier& clf) {
    Json j;
    j["mode"] = to_string(clf.mode);
    j["specs"] = Json::array();
    for (const auto& s : clf.specs) j["specs"].push_back(to_json(s));
    j["params"] = to_json(clf.params);
    j["coef"] = to_json(clf.coef);
    j["coef_subset"] = to_json(clf.coef_subset);
    j["subset"] = clf.subset ? to_json(*clf.subset) : Json(nullptr);
    j["box"] = clf.box ? to_json(*clf.box) : Json(nullptr);
    j["tau"] = clf.tau ? Json(*clf.tau) : Json(nullptr);
    j["overrides"] = Json::array();
    for (const auto& o : clf.overrides)
        j["overrides"].push_back({{"x", to_json(o.x)}, {"tuple", o.tuple}, {"label", o.label}});
    if (const auto* g = dynamic_cast<const GnbJointDistribution*>(clf.oracle.get()))
        j["oracle"] = {{"type", "gnb"}, {"model", to_json(*g)}};
    else if (const auto* d = dynamic_cast<const DiscreteJointDistribution*>(clf.oracle.get()))
        j["oracle"] = {{"type", "discrete"}, {"model", to_json(*d)}};
    else
        throw std::invalid_argument("classifier oracle cannot be serialized");
    return j;
}

ThresholdClassifier classifier_from_json(const Json& j) {
    ThresholdClassifier c;
    c.mode = mode_from_string(j.at("mode").get<std::string>());
    for (const auto& s : j.at("specs")) c.specs.push_back(spec_from_json(s));
    c.params = params_from_json(j.at("params"));
    c.coef = vector_from_json(j.at("coef"));
    c.coef_subset = vector_from_json(j.at("coef_subset"));
    if (!j.at("subset").is_null()) c.subset = FeatureSubset::parse(j.at("subset").get<std::string>());
    if (!j.at("box").is_null()) c.box = box_from_json(j.at("box"));
    if (!j.at("tau").is_null()) c.tau = j.at("tau").get<double>();
    for (const auto& o : j.at("overrides"))
        c.overrides.push_back(LabelOverride{vector_from_json(o.at("x")), o.at("tuple").get<int>(), o.at("label").get<int>()});
    const Json& oracle = j.at("oracle");
    const std::string type = oracle.at("type").get<std::string>();
    if (type == "gnb") c.oracle = std::make_shared<const GnbJointDistribution>(gnb_from_json(oracle.at("model")));
    else if (type == "discrete") c.oracle = std::make_shared<const DiscreteJointDistribution>(discrete_from_json(oracle.at("model")));
    else throw std::invalid_argument("unknown oracle type " + type);
    if (c.coef.size() != c.oracle->layout().cells()) throw std::invalid_argument("classifier coefficients do not match oracle");
    return c;
}

Json to_json(const QVector& q) {
    Json v = Json::array();
    for (int g = 0; g < q.size(); ++g) v.push_back(q.defined[g] ? Json(q.value[g]) : Json(nullptr));
    return v;
}

Json to_json(const RunReport& r, bool include_timing) {
    Json cells = Json::array();
    for (const auto& c : r.cells) {
        Json q = Json::array();
        for (const auto& v : c.q) q.push_back(to_json(v));
        Json cj{{"index", c.cell.index}, {"a", c.cell.a},       {"b", c.cell.b},
                {"status", c.status},    {"feasible", c.solved},  {"guarantee", c.guarantee},
                {"error", c.error},      {"max_violation", c.max_violation}, {"q", q}};
        if (include_timing) cj["wall_time"] = c.wall_time;
        cells.push_back(cj);
    }
    Json q = Json::array();
    for (const auto& v : r.q) q.push_back(to_json(v));
    return {{"chosen", r.chosen},       {"error", r.error}, {"q", q},
            {"fairness", r.fairness},   {"guarantee", r.guarantee}, {"cells", cells}};
}

Json to_json(const MetricsReport& r) {
    Json m = Json::object();
    for (const auto& [name, g] : r.metrics) {
        Json rates = Json::array();
        for (Eigen::Index i = 0; i < g.rate.size(); ++i) rates.push_back(g.defined[i] ? Json(g.rate[i]) : Json(nullptr));
        m[name] = {{"gamma", g.gamma_defined ? Json(g.gamma) : Json(nullptr)}, {"rates", rates}};
    }
    return {{"accuracy", r.accuracy}, {"samples", r.samples}, {"group_counts", r.group_counts}, {"metrics", m}};
}

Json to_json(const PriceReport& r) {
    return {{"f_direct", r.f_direct},
            {"f_formula", r.f_formula},
            {"gap", r.gap},
            {"lambda", to_json(r.lambda)},
            {"constrained_error", r.constrained_error},
            {"unconstrained_error", r.unconstrained_error}};
}

Json to_json(const ModelFile& m) {
    Json j{{"format", "faircls-model"}, {"version", 1}, {"classifier", to_json(m.classifier)}};
    j["schema"] = m.schema ? Json::parse(schema_to_json_text(*m.schema)) : Json(nullptr);
    j["encoder"] = m.encoder ? to_json(*m.encoder) : Json(nullptr);
    return j;
}

ModelFile model_from_json(const Json& j) {
    if (j.value("format", "") != "faircls-model") throw DataError("not a model file");
    try {
        ModelFile m{classifier_from_json(j.at("classifier")), std::nullopt, std::nullopt};
        if (!j.at("schema").is_null()) m.schema = schema_from_json_text(j.at("schema").dump());
        if (!j.at("encoder").is_null()) {
            if (!m.schema) throw DataError("model has an encoder but no schema");
            m.encoder = encoder_from_json(j.at("encoder"), *m.schema);
        }
        return m;
    } catch (const Json::exception& e) {
        throw DataError(std::string("corrupted model file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("corrupted model file: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw DataError("cannot parse " + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace faircls
