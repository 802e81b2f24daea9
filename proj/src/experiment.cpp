#include "faircls/experiment.hpp"

namespace faircls {

std::uint64_t pool_seed(const SplitConfig& split) {
    return split.seed * 1000003ULL + static_cast<std::uint64_t>(split.repetition) * 7919ULL + 17ULL;
}

ExperimentResult run_experiment(const Dataset& data, const ExperimentConfig& cfg) {
    const auto [train_raw, test_raw] = split(data.samples, cfg.split);
    ExperimentResult r;
    r.encoder = FeatureEncoder::fit(train_raw, data.schema);
    const std::vector<Sample> train = r.encoder.transform(train_raw);
    const std::vector<Sample> test = r.encoder.transform(test_raw);
    const SensitiveLayout layout = data.schema.layout();
    r.gnb = std::make_shared<const GnbJointDistribution>(fit_gnb(train, layout));
    ExpectationPool pool = cfg.pool_from_train ? make_pool(*r.gnb, cfg.meta.mode, train)
                                               : make_pool(*r.gnb, cfg.meta.mode, cfg.pool_draws, pool_seed(cfg.split));
    if (cfg.subset) pool.attach_subset(*cfg.subset);
    try {
        MetaResult m = run_meta(r.gnb, pool, cfg.meta);
        r.report = std::move(m.report);
        r.classifier = std::move(m.classifier);
    } catch (const AllCellsInfeasible& e) {
        r.report = e.report;
        return r;
    }
    const int attr = cfg.meta.attributes.empty() ? 0 : cfg.meta.attributes[0];
    r.train = empirical_report(*r.classifier, train, attr);
    r.test = empirical_report(*r.classifier, test, attr);
    return r;
}

}  // namespace faircls
