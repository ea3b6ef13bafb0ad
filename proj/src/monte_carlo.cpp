#include "oscfar/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <tuple>

#include <boost/math/distributions/normal.hpp>

#include "oscfar/detector.hpp"
#include "oscfar/error.hpp"
#include "oscfar/random.hpp"

namespace oscfar {

namespace {

unsigned resolve_shards(unsigned requested, std::uint64_t trials) {
    unsigned shards = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (trials < shards) {
        shards = static_cast<unsigned>(std::max<std::uint64_t>(trials, 1));
    }
    return shards;
}

// Runs trial(stream, cuts, crp) -> bool for every trial index, sharded over
// contiguous index ranges. Per-shard counts are summed in shard order.
template <class Trial>
std::uint64_t count_hits(const DetectorGeometry& g, const SimulationSettings& settings,
                         unsigned shards, const Trial& trial) {
    std::vector<std::uint64_t> hits(shards, 0);
    auto run_shard = [&](unsigned s) {
        const std::uint64_t begin = settings.trials * s / shards;
        const std::uint64_t end = settings.trials * (s + 1) / shards;
        std::vector<double> cuts(static_cast<std::size_t>(g.cut_count));
        std::vector<double> crp(static_cast<std::size_t>(g.crp_size));
        std::uint64_t local = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
            UniformStream stream(settings.seed, settings.stream, t);
            if (trial(stream, cuts, crp)) {
                ++local;
            }
        }
        hits[s] = local;
    };

    if (shards == 1) {
        run_shard(0);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(shards);
        for (unsigned s = 0; s < shards; ++s) {
            workers.emplace_back(run_shard, s);
        }
    }

    std::uint64_t total = 0;
    for (auto h : hits) {
        total += h;
    }
    return total;
}

MonteCarloEstimate make_estimate(std::uint64_t hits, const SimulationSettings& settings,
                                 unsigned shards) {
    MonteCarloEstimate e;
    e.trials = settings.trials;
    e.hits = hits;
    e.pfa_hat = static_cast<double>(hits) / static_cast<double>(settings.trials);
    std::tie(e.ci_low, e.ci_high) = wilson_interval(hits, settings.trials, settings.ci_level);
    e.ci_level = settings.ci_level;
    e.seed = settings.seed;
    e.shards = shards;
    return e;
}

MonteCarloEstimate simulate_raw(const DetectorConfig& config, const ParetoParams& params,
                                double scale, const SimulationSettings& settings) {
    config.validate();
    settings.validate();
    const auto& g = config.geometry;
    const unsigned shards = resolve_shards(settings.shards, settings.trials);
    const auto hits = count_hits(g, settings, shards,
                                 [&](UniformStream& u, std::vector<double>& cuts,
                                     std::vector<double>& crp) {
                                     for (auto& x : cuts) {
                                         x = scale * pareto_from_uniform(params, u.next());
                                     }
                                     for (auto& z : crp) {
                                         z = pareto_from_uniform(params, u.next());
                                     }
                                     return detail::decide_multi_inplace(cuts, crp, g.crp_rank,
                                                                         g.cut_rank, config.tau)
                                         .detected();
                                 });
    return make_estimate(hits, settings, shards);
}

}  // namespace

void SimulationSettings::validate() const {
    if (trials < 1) {
        throw InvalidArgument("trials", "trial count must be at least 1");
    }
    if (!(ci_level > 0.0 && ci_level < 1.0)) {
        throw InvalidArgument("ci-level", "confidence level must lie in (0, 1)");
    }
}

double MonteCarloEstimate::standard_error(double p) const noexcept {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double level) {
    if (trials == 0 || hits > trials) {
        throw InvalidArgument("trials", "Wilson interval needs 0 <= hits <= trials and trials >= 1");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw InvalidArgument("ci-level", "confidence level must lie in (0, 1)");
    }
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * level);
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    const double low = std::clamp(center - half, 0.0, p);
    const double high = std::clamp(center + half, p, 1.0);
    return {low, high};
}

MonteCarloEstimate estimate_pfa(const DetectorConfig& config, const ParetoParams& params,
                                const SimulationSettings& settings) {
    return simulate_raw(config, params, 1.0, settings);
}

MonteCarloEstimate estimate_pfa_dual(const DetectorConfig& config,
                                     const SimulationSettings& settings) {
    config.validate();
    settings.validate();
    const auto& g = config.geometry;
    const unsigned shards = resolve_shards(settings.shards, settings.trials);
    const auto hits = count_hits(
        g, settings, shards,
        [&](UniformStream& u, std::vector<double>& cuts, std::vector<double>& crp) {
            for (auto& x : cuts) {
                x = -std::log(u.next());
            }
            for (auto& z : crp) {
                z = -std::log(u.next());
            }
            const double crp_min = *std::min_element(crp.begin(), crp.end());
            auto crp_nth = crp.begin() + (g.crp_rank - 1);
            std::nth_element(crp.begin(), crp_nth, crp.end());
            auto cut_nth = cuts.begin() + (g.cut_rank - 1);
            std::nth_element(cuts.begin(), cut_nth, cuts.end());
            return *cut_nth > crp_min + config.tau * (*crp_nth - crp_min);
        });
    return make_estimate(hits, settings, shards);
}

CellVector inject_signal(const CellVector& cuts, double scale) {
    if (!(scale >= 1.0) || !std::isfinite(scale)) {
        throw InvalidArgument("signal-scale", "signal scale must be finite and >= 1");
    }
    std::vector<double> out(cuts.values().begin(), cuts.values().end());
    for (auto& v : out) {
        v *= scale;
    }
    return CellVector(std::move(out));
}

MonteCarloEstimate estimate_detection_rate(const DetectorConfig& config,
                                           const ParetoParams& params, double scale,
                                           const SimulationSettings& settings) {
    if (!(scale >= 1.0) || !std::isfinite(scale)) {
        throw InvalidArgument("signal-scale", "signal scale must be finite and >= 1");
    }
    return simulate_raw(config, params, scale, settings);
}

std::vector<SweepRecord> cfar_sweep(const DetectorConfig& config, std::span<const double> alphas,
                                    std::span<const double> betas,
                                    const SimulationSettings& settings) {
    if (alphas.empty()) {
        throw InvalidArgument("grid-alphas", "alpha grid must not be empty");
    }
    if (betas.empty()) {
        throw InvalidArgument("grid-betas", "beta grid must not be empty");
    }
    config.validate();
    settings.validate();

    std::vector<ParetoParams> grid;
    grid.reserve(alphas.size() * betas.size());
    for (double a : alphas) {
        for (double b : betas) {
            grid.emplace_back(a, b);
        }
    }

    const double analytic = multipulse_os_pfa(config).value;
    std::vector<SweepRecord> out;
    out.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SimulationSettings point = settings;
        point.stream = settings.stream + static_cast<std::uint32_t>(i);
        auto est = estimate_pfa(config, grid[i], point);
        const bool covered = est.covers(analytic);
        out.push_back(SweepRecord{grid[i], config, est, analytic, covered});
    }
    return out;
}

}  // namespace oscfar
