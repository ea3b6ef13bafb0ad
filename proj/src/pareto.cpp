#include "oscfar/pareto.hpp"

#include <algorithm>
#include <string>

#include "oscfar/error.hpp"
#include "oscfar/random.hpp"

namespace oscfar {

ParetoParams::ParetoParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InvalidArgument("alpha", "Pareto shape alpha must be a finite positive number, got " +
                              std::to_string(alpha));
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw InvalidArgument("beta", "Pareto scale beta must be a finite positive number, got " +
                              std::to_string(beta));
    }
}

CellVector::CellVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw InvalidArgument("cell vector must not be empty");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        // NaN fails this comparison as well.
        if (!(values_[i] >= 0.0)) {
            throw InvalidArgument("cell " + std::to_string(i) +
                                  " is negative or NaN; cells must be non-negative");
        }
    }
}

CellVector::CellVector(std::initializer_list<double> values)
    : CellVector(std::vector<double>(values)) {}

double pareto_cdf(const ParetoParams& params, double t) noexcept {
    if (!(t >= params.beta())) {
        return 0.0;
    }
    // -expm1(alpha * log(beta / t)) == 1 - (beta / t)^alpha without cancellation near beta.
    return -std::expm1(params.alpha() * std::log(params.beta() / t));
}

CellVector sample_pareto(const ParetoParams& params, std::size_t count, std::uint64_t seed) {
    if (count == 0) {
        throw InvalidArgument("count", "sample count must be at least 1");
    }
    UniformStream stream(seed, 0, 0);
    std::vector<double> out(count);
    for (auto& v : out) {
        v = pareto_from_uniform(params, stream.next());
    }
    return CellVector(std::move(out));
}

double to_exponential_dual(double z, const ParetoParams& params) {
    if (!(z >= params.beta())) {
        throw InvalidArgument("value " + std::to_string(z) + " lies below the Pareto support [" +
                              std::to_string(params.beta()) + ", inf)");
    }
    return params.alpha() * std::log(z / params.beta());
}

double from_exponential_dual(double x, const ParetoParams& params) {
    return params.beta() * std::exp(x / params.alpha());
}

double order_statistic(std::span<const double> cells, std::size_t j) {
    if (j < 1 || j > cells.size()) {
        throw InvalidArgument("j", "order statistic index " + std::to_string(j) + " outside [1, " +
                              std::to_string(cells.size()) + "]");
    }
    std::vector<double> scratch(cells.begin(), cells.end());
    auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(j - 1);
    std::nth_element(scratch.begin(), nth, scratch.end());
    return *nth;
}

}  // namespace oscfar
