#pragma once

#include "faircls/perf_spec.hpp"
#include "faircls/pool.hpp"
#include "faircls/solver.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace faircls {

enum class Variant { Rho, Delta, Meta2 };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct MetaConfig {
    std::vector<std::string> metrics{"sr"};
    std::vector<double> tau{0.9};
    std::vector<int> attributes;  // per metric; empty means attribute 0 everywhere
    double epsilon = 0.01;
    SolverConfig solver;
    Mode mode = Mode::GroupUnaware;
    Variant variant = Variant::Rho;
    int jobs = 0;  // 0: hardware concurrency
    int max_metrics = 3;
    std::size_t max_cells = 10000;

    void validate() const;
};

struct GridCell {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<int> index;
};

std::vector<GridCell> build_grid_rho(double tau, double epsilon);
std::vector<GridCell> build_grid_delta(double tau, double epsilon);
/// Cartesian product of per-metric grids (rho or delta formulas).
std::vector<GridCell> build_grid_multi(const std::vector<double>& tau, double epsilon, Variant variant = Variant::Rho,
                                       int max_metrics = 3, std::size_t max_cells = 10000);

struct CellOutcome {
    GridCell cell;
    bool solved = false;
    bool guarantee = false;
    std::string status;
    double error = 0.0;
    double max_violation = 0.0;
    std::vector<QVector> q;
    double wall_time = 0.0;
};

struct RunReport {
    std::vector<CellOutcome> cells;
    int chosen = -1;
    double error = 0.0;
    std::vector<QVector> q;
    std::vector<double> fairness;  // rho (or delta) per metric under the training oracle
    bool guarantee = false;
};

struct MetaResult {
    ThresholdClassifier classifier;
    RunReport report;
};

class AllCellsInfeasible : public std::runtime_error {
public:
    explicit AllCellsInfeasible(RunReport r)
        : std::runtime_error("every grid cell was infeasible"), report(std::move(r)) {}
    RunReport report;
};

/// Resolves the configured metrics against the pool.
std::vector<PerfSpec> resolve_metrics(const MetaConfig& cfg, const ExpectationPool& pool);

/// Checks min q >= tau max q - eps (rho) or min - max >= tau - eps (delta)
/// with all-undefined vectors counted as satisfied.
bool guarantee_holds(const QVector& q, double tau, double epsilon, Variant variant, double slack = 1e-6);

MetaResult run_meta(std::shared_ptr<const Oracle> oracle, const ExpectationPool& pool, const MetaConfig& cfg);

/// Fits the estimated distribution on the samples, draws the pool, then runs
/// the grid.
MetaResult run_meta(const std::vector<Sample>& train, const SensitiveLayout& layout, const MetaConfig& cfg,
                    std::size_t pool_draws = 100000, std::uint64_t pool_seed = 0);

}  // namespace faircls
