#include <faircls/data.hpp>
#include <faircls/experiment.hpp>
#include <faircls/meta.hpp>
#include <faircls/metrics.hpp>
#include <faircls/serialize.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace faircls;

namespace {

constexpr const char* kVersion = "0.3.0";

enum Exit { kOk = 0, kUsage = 2, kInfeasible = 3, kData = 4 };

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Common {
    std::string data, schema = "adult", fixture, out = ".";
    std::string metric = "sr", tau = "0.9", mode = "unaware", variant = "rho", subset;
    double epsilon = 0.01;
    std::uint64_t seed = 0;
    int jobs = 0, iterations = 20000, repetition = 0;
    std::size_t pool_draws = 100000;
    std::string pool = "draws";
    double fraction = 0.7;
    bool deterministic = false;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("cannot parse ") + what + " value '" + item + "'");
        }
    }
    return out;
}

MetaConfig meta_config(const Common& c, std::vector<double> tau) {
    MetaConfig m;
    m.metrics = split_list(c.metric);
    m.tau = std::move(tau);
    m.epsilon = c.epsilon;
    m.jobs = c.jobs;
    m.solver.iterations = c.iterations;
    m.solver.seed = c.seed;
    try {
        m.mode = mode_from_string(c.mode);
        m.variant = variant_from_string(c.variant);
        for (const auto& name : m.metrics)
            if (std::find(catalog_names().begin(), catalog_names().end(), name) == catalog_names().end())
                throw std::invalid_argument("unknown metric '" + name + "'");
        if (std::count(m.metrics.begin(), m.metrics.end(), "csr") && c.subset.empty())
            throw std::invalid_argument("csr needs --subset");
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return m;
}

std::string timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream os;
    os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

Json manifest(const std::string& command, const Common& c, const Json& extra) {
    Json j{{"tool", "faircls"},
           {"version", kVersion},
           {"command", command},
           {"config",
            {{"data", c.data},
             {"schema", c.schema},
             {"fixture", c.fixture},
             {"metric", split_list(c.metric)},
             {"tau", c.tau},
             {"epsilon", c.epsilon},
             {"mode", c.mode},
             {"variant", c.variant},
             {"subset", c.subset},
             {"seed", c.seed},
             {"repetition", c.repetition},
             {"train_fraction", c.fraction},
             {"pool_draws", c.pool_draws},
             {"pool", c.pool},
             {"solver", {{"iterations", c.iterations}, {"step", SolverConfig{}.step}, {"lambda_max", SolverConfig{}.lambda_max},
                         {"batch", SolverConfig{}.batch}, {"eval_every", SolverConfig{}.eval_every},
                         {"exact_search_rows", SolverConfig{}.exact_search_rows}}}}}};
    if (extra.is_object()) j["config"].update(extra);
    if (!c.deterministic) j["created"] = timestamp();
    return j;
}

bool pool_from_train(const Common& c) {
    if (c.pool != "draws" && c.pool != "train") throw UsageError("--pool must be draws or train");
    return c.pool == "train";
}

Dataset load_dataset(const Common& c) {
    if (c.data.empty()) throw UsageError("--data is required");
    return load_csv(c.data, resolve_schema(c.schema));
}

void add_common(CLI::App* cmd, Common& c, bool data_flags) {
    if (data_flags) {
        cmd->add_option("--data", c.data, "CSV file with a header row");
        cmd->add_option("--schema", c.schema, "adult|german|compas or a schema JSON file");
        cmd->add_option("--repetition", c.repetition, "split repetition index");
        cmd->add_option("--train-fraction", c.fraction, "training share of each split");
        cmd->add_option("--pool-draws", c.pool_draws, "draws from the fitted model used for expectations");
        cmd->add_option("--pool", c.pool, "draws|train: where the expectation rows come from");
    }
    cmd->add_option("--metric", c.metric, "metric name(s), comma separated");
    cmd->add_option("--epsilon", c.epsilon, "grid resolution");
    cmd->add_option("--mode", c.mode, "unaware|aware");
    cmd->add_option("--variant", c.variant, "rho|delta|meta2");
    cmd->add_option("--subset", c.subset, "feature subset for csr, e.g. 0>0.5");
    cmd->add_option("--seed", c.seed, "seed for splits and solvers");
    cmd->add_option("--iterations", c.iterations, "subgradient iterations per cell");
    cmd->add_option("--jobs", c.jobs, "worker threads for grid cells (0: all cores)");
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_flag("--deterministic", c.deterministic, "omit timestamps and timings from outputs");
}

int cmd_train(const Common& c) {
    MetaConfig mc = meta_config(c, parse_doubles(c.tau, "--tau"));
    fs::create_directories(c.out);
    std::optional<FeatureSubset> subset;
    if (!c.subset.empty()) subset = FeatureSubset::parse(c.subset);

    ModelFile model;
    Json report;
    if (!c.fixture.empty()) {
        auto dist = std::make_shared<const DiscreteJointDistribution>(load_fixture(c.fixture));
        ExpectationPool pool = make_pool(*dist, mc.mode);
        if (subset) pool.attach_subset(*subset);
        try {
            MetaResult r = run_meta(dist, pool, mc);
            report["run"] = to_json(r.report, !c.deterministic);
            model.classifier = std::move(r.classifier);
        } catch (const AllCellsInfeasible& e) {
            report["run"] = to_json(e.report, !c.deterministic);
            write_json_file((fs::path(c.out) / "report.json").string(), report);
            write_json_file((fs::path(c.out) / "manifest.json").string(), manifest("train", c, Json::object()));
            std::cerr << "error: " << e.what() << '\n';
            return kInfeasible;
        }
    } else {
        const Dataset ds = load_dataset(c);
        ExperimentConfig ec{mc, SplitConfig{c.fraction, c.seed, c.repetition}, c.pool_draws, subset, pool_from_train(c)};
        ExperimentResult r = run_experiment(ds, ec);
        report["run"] = to_json(r.report, !c.deterministic);
        report["data"] = {{"rows", ds.samples.size()},
                          {"dropped_missing", ds.dropped_missing},
                          {"dropped_sensitive", ds.dropped_sensitive}};
        if (!r.classifier) {
            write_json_file((fs::path(c.out) / "report.json").string(), report);
            write_json_file((fs::path(c.out) / "manifest.json").string(), manifest("train", c, Json::object()));
            std::cerr << "error: every grid cell was infeasible\n";
            return kInfeasible;
        }
        report["train"] = to_json(r.train);
        report["test"] = to_json(r.test);
        model = ModelFile{std::move(*r.classifier), ds.schema, r.encoder};
    }
    write_json_file((fs::path(c.out) / "model.json").string(), to_json(model));
    write_json_file((fs::path(c.out) / "report.json").string(), report);
    write_json_file((fs::path(c.out) / "manifest.json").string(), manifest("train", c, Json::object()));
    std::cout << "guarantee " << (report["run"]["guarantee"].get<bool>() ? "true" : "false") << ", training error "
              << report["run"]["error"].get<double>() << '\n';
    return kOk;
}

std::vector<double> parse_grid(const std::string& s) {
    const auto parts = [&] {
        std::vector<std::string> p;
        std::stringstream ss(s);
        for (std::string item; std::getline(ss, item, ':');) p.push_back(item);
        return p;
    }();
    if (parts.size() != 3) throw UsageError("--tau-grid expects lo:hi:step");
    const double lo = parse_doubles(parts[0], "--tau-grid")[0];
    const double hi = parse_doubles(parts[1], "--tau-grid")[0];
    const double step = parse_doubles(parts[2], "--tau-grid")[0];
    if (!(step > 0.0) || hi < lo) throw UsageError("--tau-grid needs lo <= hi and step > 0");
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(std::round((lo + i * step) * 1e9) / 1e9);
    return out;
}

int cmd_sweep(const Common& c, const std::string& tau_grid, int repetitions) {
    const std::vector<double> taus = tau_grid.empty() ? parse_doubles(c.tau, "--tau") : parse_grid(tau_grid);
    if (repetitions < 1) throw UsageError("--repetitions must be positive");
    const auto metrics = split_list(c.metric);
    for (double t : taus) meta_config(c, std::vector<double>(metrics.size(), t));  // validate up front
    const Dataset ds = load_dataset(c);
    fs::create_directories(c.out);
    std::optional<FeatureSubset> subset;
    if (!c.subset.empty()) subset = FeatureSubset::parse(c.subset);

    std::ofstream csv(fs::path(c.out) / "sweep.csv");
    csv << std::setprecision(17) << "tau,repetition,feasible,guarantee,accuracy";
    for (const auto& m : report_metric_names()) csv << ",gamma_" << m;
    csv << '\n';
    Json summary = Json::array();
    for (double t : taus) {
        std::vector<double> acc;
        std::map<std::string, std::vector<double>> gam;
        int infeasible = 0;
        for (int rep = 0; rep < repetitions; ++rep) {
            MetaConfig mc = meta_config(c, std::vector<double>(metrics.size(), t));
            ExperimentConfig ec{mc, SplitConfig{c.fraction, c.seed, rep}, c.pool_draws, subset, pool_from_train(c)};
            const ExperimentResult r = run_experiment(ds, ec);
            csv << t << ',' << rep << ',' << (r.classifier ? 1 : 0) << ',' << (r.report.guarantee ? 1 : 0) << ',';
            if (!r.classifier) {
                ++infeasible;
                for (std::size_t k = 0; k < report_metric_names().size(); ++k) csv << ',';
                csv << '\n';
                continue;
            }
            csv << r.test.accuracy;
            acc.push_back(r.test.accuracy);
            for (const auto& m : report_metric_names()) {
                const auto& g = r.test.metrics.at(m);
                csv << ',';
                if (g.gamma_defined) {
                    csv << g.gamma;
                    gam[m].push_back(g.gamma);
                }
            }
            csv << '\n';
        }
        auto stats = [](const std::vector<double>& v) -> Json {
            if (v.empty()) return nullptr;
            double mean = 0.0, var = 0.0;
            for (double x : v) mean += x;
            mean /= static_cast<double>(v.size());
            for (double x : v) var += (x - mean) * (x - mean);
            return {{"mean", mean}, {"std", std::sqrt(var / static_cast<double>(v.size()))}, {"n", v.size()}};
        };
        Json row{{"tau", t}, {"infeasible", infeasible}, {"accuracy", stats(acc)}};
        for (const auto& m : report_metric_names()) row["gamma_" + m] = stats(gam[m]);
        summary.push_back(row);
        std::cerr << "tau " << t << " done\n";
    }
    write_json_file((fs::path(c.out) / "summary.json").string(), summary);
    write_json_file((fs::path(c.out) / "manifest.json").string(),
                    manifest("sweep", c, {{"tau_grid", tau_grid}, {"repetitions", repetitions}}));
    return kOk;
}

int cmd_eval(const Common& c, const std::string& model_path) {
    if (model_path.empty()) throw UsageError("--model is required");
    if (c.data.empty()) throw UsageError("--data is required");
    const ModelFile model = model_from_json(read_json_file(model_path));
    if (!model.schema || !model.encoder) throw DataError("model was trained on a fixture and has no data schema");
    const Dataset ds = load_csv(c.data, *model.schema);
    for (std::size_t k = 0; k < ds.schema.features.size(); ++k)
        if (ds.schema.features[k].levels != model.schema->features[k].levels)
            throw DataError("data does not match the model schema (feature " + ds.schema.features[k].name + ")");
    const std::vector<Sample> samples = model.encoder->transform(ds.samples);
    const int attr = model.classifier.specs.empty() ? 0 : model.classifier.specs.front().attribute;
    const Json report = to_json(empirical_report(model.classifier, samples, attr));
    fs::create_directories(c.out);
    write_json_file((fs::path(c.out) / "eval.json").string(), report);
    write_json_file((fs::path(c.out) / "manifest.json").string(), manifest("eval", c, {{"model", model_path}}));
    std::cout << report.dump(2) << '\n';
    return kOk;
}

int cmd_price(const Common& c, const std::string& box_flag) {
    if (c.fixture.empty()) throw UsageError("price works on discrete fixtures only; pass --fixture");
    const auto lu = parse_doubles(box_flag, "--box");
    if (lu.size() != 2 || lu[0] > lu[1] || lu[0] < 0.0 || lu[1] > 1.0)
        throw UsageError("--box expects l,u with 0 <= l <= u <= 1");
    Mode mode;
    try {
        mode = mode_from_string(c.mode);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    auto dist = std::make_shared<const DiscreteJointDistribution>(load_fixture(c.fixture));
    const int groups = dist->layout().cardinality(0);
    SolverConfig sc;
    sc.iterations = c.iterations;
    sc.seed = c.seed;
    PriceReport pr;
    try {
        pr = price_of_fairness(dist, c.metric, FairnessBox::uniform(groups, lu[0], lu[1]), sc, mode);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInfeasible;
    }
    fs::create_directories(c.out);
    const Json report = to_json(pr);
    write_json_file((fs::path(c.out) / "price.json").string(), report);
    write_json_file((fs::path(c.out) / "manifest.json").string(), manifest("price", c, {{"box", box_flag}}));
    std::cout << report.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fair classification under linear and linear-fractional group constraints"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Common train, sweep, eval, price;
    std::string tau_grid, model_path, box = "0,1";
    int repetitions = 5;

    auto* t = app.add_subcommand("train", "fit, solve the grid, write model and report");
    add_common(t, train, true);
    t->add_option("--tau", train.tau, "tau per metric, comma separated");
    t->add_option("--fixture", train.fixture, "discrete fixture JSON used as the oracle instead of --data");

    auto* s = app.add_subcommand("sweep", "train over a tau grid and repeated splits");
    add_common(s, sweep, true);
    s->add_option("--tau", sweep.tau, "explicit tau list (used without --tau-grid)");
    s->add_option("--tau-grid", tau_grid, "lo:hi:step");
    s->add_option("--repetitions", repetitions, "number of 70/30 splits");

    auto* e = app.add_subcommand("eval", "metrics of a saved model on a CSV");
    e->add_option("--model", model_path, "model JSON")->required();
    e->add_option("--data", eval.data, "CSV file")->required();
    e->add_option("--schema", eval.schema, "expected schema (checked against the model)");
    e->add_option("--out", eval.out, "output directory");
    e->add_flag("--deterministic", eval.deterministic, "omit timestamps");

    auto* p = app.add_subcommand("price", "price of fairness of a box on a fixture");
    p->add_option("--fixture", price.fixture, "discrete fixture JSON")->required();
    p->add_option("--metric", price.metric, "catalog metric");
    p->add_option("--box", box, "l,u applied to every group");
    p->add_option("--mode", price.mode, "unaware|aware");
    p->add_option("--seed", price.seed, "solver seed");
    p->add_option("--iterations", price.iterations, "subgradient iterations");
    p->add_option("--out", price.out, "output directory");
    p->add_flag("--deterministic", price.deterministic, "omit timestamps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*t) return cmd_train(train);
        if (*s) return cmd_sweep(sweep, tau_grid, repetitions);
        if (*e) {
            if (e->count("--schema")) {
                const DatasetSchema want = resolve_schema(eval.schema);
                const ModelFile m = model_from_json(read_json_file(model_path));
                if (!m.schema || want.name != m.schema->name || want.label != m.schema->label)
                    throw DataError("schema '" + eval.schema + "' does not match the model");
            }
            return cmd_eval(eval, model_path);
        }
        if (*p) return cmd_price(price, box);
    } catch (const UsageError& err) {
        std::cerr << "usage error: " << err.what() << '\n';
        return kUsage;
    } catch (const DataError& err) {
        std::cerr << "data error: " << err.what() << '\n';
        return kData;
    } catch (const std::invalid_argument& err) {
        std::cerr << "usage error: " << err.what() << '\n';
        return kUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kData;
    }
    return kUsage;
}
