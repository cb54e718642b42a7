#pragma once

// Critical points of chart landscapes: multi-start search, Hessian-spectrum
// classification, null-direction probes and checks against known tables.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kinscape/landscape.hpp"

namespace kinscape {

enum class Classification { GlobalMax, GlobalMin, LocalMax, LocalMin, Saddle, SecondOrderTrap, Degenerate };

std::string_view to_string(Classification c);
Classification parse_classification(std::string_view s);

struct SearchConfig {
    int starts = 2000;
    std::uint64_t seed = 1;
    double grad_tol = 1e-10;
    double zero_eig_tol = 1e-8;
    double dedup_radius = 1e-4;
    int max_iterations = 200;
    double start_margin = 1e-3;     // polar starts drawn from [m, pi - m]
    double boundary_margin = 1e-3;  // converged points closer to b = 0, pi are dropped
    int workers = 0;                // 0: KINSCAPE_WORKERS or all cores

    void validate() const;  // throws InvalidArgument
};

struct ClassifyContext {
    double global_max = 1.0;
    double global_min = 0.0;
    double value_tol = 1e-9;
};

// Known extremal values of the whole landscape the chart belongs to; falls
// back to a seeded random scan when no closed value is known.
ClassifyContext context_for(const Chart& chart);

enum class ProbeStatus { NoIncrease, SlowGrowth, QuadraticGrowth, Inconclusive };

std::string_view to_string(ProbeStatus s);

struct ProbeResult {
    ProbeStatus status = ProbeStatus::NoIncrease;
    std::optional<int> order;  // fitted growth exponent, rounded
    double slope = 0.0;
    double fit_residual = 0.0;
    double max_increase = 0.0;  // largest f(x + eps v) - f(x) seen
};

// Steps along the columns of null_dirs (expressed over the stationary
// coordinates) and random unit combinations of them, for each eps.
ProbeResult null_direction_probe(const Landscape& land, const Eigen::VectorXd& full, const Eigen::MatrixXd& null_dirs,
                                 const std::vector<double>& eps_ladder = {1e-1, 1e-2, 1e-3});

// Spectral rules with tolerance zero_tol. A semidefinite-negative spectrum
// with a zero eigenvalue below the global max is a second-order trap unless
// the probe saw quadratic growth.
Classification classify(double value, const std::vector<double>& eigs, double zero_tol, const ClassifyContext& ctx,
                        std::optional<ProbeStatus> probe = std::nullopt);
Classification classify(double value, const std::vector<double>& eigs, const SearchConfig& cfg,
                        const ClassifyContext& ctx, std::optional<ProbeStatus> probe = std::nullopt);

struct CriticalPointRecord {
    std::string chart;                // descriptor
    std::vector<std::string> names;   // all chart coordinates
    Eigen::VectorXd coords;           // full coordinate vector
    std::vector<std::string> stationary;
    double value = 0.0;
    double grad_norm = 0.0;           // over the stationary coordinates
    std::vector<double> hessian_eigs; // ascending, over the stationary coordinates
    Classification classification = Classification::Degenerate;
    std::optional<ProbeStatus> probe_status;
    std::optional<int> probe_growth_order;
    std::string family;               // empty for isolated points
    int multiplicity = 1;             // converged starts merged into this record
};

// Derivatives, spectrum, family and classification at a given point.
CriticalPointRecord analyze_point(const Landscape& land, const Eigen::VectorXd& full, const SearchConfig& cfg,
                                  const ClassifyContext& ctx);

struct SearchStats {
    int converged = 0;
    int no_convergence = 0;
    int rejected_boundary = 0;
};

// Records sorted by value, descending.
std::vector<CriticalPointRecord> find_critical_points(const Chart& chart, const SearchConfig& cfg,
                                                      SearchStats* stats = nullptr);

struct VerifyOptions {
    double value_tol = 1e-10;
    double grad_tol = 1e-8;
    double hessian_tol = 1e-12;
    double spectrum_tol = 1e-10;
    double zero_eig_tol = 1e-8;
    int samples = 10;  // draws for starred (free) coordinates
    std::uint64_t seed = 7;
};

struct RowResult {
    std::string table;
    std::string row;
    std::string chart;
    Eigen::VectorXd coords;
    double expected_value = 0.0;
    double value = 0.0;
    double grad_norm = 0.0;
    std::vector<double> eigs;
    std::string expected_class;
    std::string found_class;
    bool pass = false;
    std::vector<std::string> failures;
};

// Table ids: l1, yzy-zyz, yzy-yzy, id-zyz, id-yzy, theorem; "all" selects
// every table. A selector may also name a single row id (e.g. l1.max.pi).
std::vector<std::string> table_ids();
std::vector<RowResult> verify_tables(const std::vector<std::string>& selectors, const VerifyOptions& opts);

}  // namespace kinscape
