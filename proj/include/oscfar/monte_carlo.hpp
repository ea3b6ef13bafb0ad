#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "oscfar/pareto.hpp"
#include "oscfar/pfa.hpp"

namespace oscfar {

struct SimulationSettings {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    double ci_level = 0.99;
    // Worker threads; 0 picks std::thread::hardware_concurrency(). Trial t
    // always draws from stream (seed, stream, t), so hit counts do not depend
    // on this value.
    unsigned shards = 0;
    // Philox stream word; cfar_sweep uses the grid index here.
    std::uint32_t stream = 0;

    void validate() const;
};

struct MonteCarloEstimate {
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    double pfa_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double ci_level = 0.0;
    std::uint64_t seed = 0;
    unsigned shards = 1;

    bool covers(double p) const noexcept { return ci_low <= p && p <= ci_high; }
    // Binomial standard error sqrt(p (1 - p) / trials) at a reference p.
    double standard_error(double p) const noexcept;
};

struct SweepRecord {
    ParetoParams params;
    DetectorConfig config;
    MonteCarloEstimate estimate;
    double analytic_pfa = 0.0;
    bool covered = false;
};

// Wilson score interval for hits/trials at two-sided confidence `level`.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double level);

// Empirical Pfa of the multipulse rule: each trial draws M cells under test
// then N CRP cells, all i.i.d. Pareto(alpha, beta), and counts H1 outcomes.
MonteCarloEstimate estimate_pfa(const DetectorConfig& config, const ParetoParams& params,
                                const SimulationSettings& settings);

// Same experiment in exponential-dual space: unit exponentials -ln(u) from the
// same uniforms, compared as X*_(k) > (1 - tau) Z*_(1) + tau Z*_(n).
MonteCarloEstimate estimate_pfa_dual(const DetectorConfig& config,
                                     const SimulationSettings& settings);

// Non-paper extension: cells under test multiplied by `scale` (>= 1) as a
// crude multiplicative target surrogate.
CellVector inject_signal(const CellVector& cuts, double scale);

// Detection rate with inject_signal applied to every trial's CUTs. Uses the
// same uniforms as estimate_pfa for a given seed, so the rate is
// nondecreasing in scale for a fixed seed.
MonteCarloEstimate estimate_detection_rate(const DetectorConfig& config,
                                           const ParetoParams& params, double scale,
                                           const SimulationSettings& settings);

// One estimate per (alpha, beta) grid point, row-major over alphas. Grid
// point i uses Philox stream i, so a 1x1 grid reproduces estimate_pfa.
std::vector<SweepRecord> cfar_sweep(const DetectorConfig& config, std::span<const double> alphas,
                                    std::span<const double> betas,
                                    const SimulationSettings& settings);

}  // namespace oscfar
