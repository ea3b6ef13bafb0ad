#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace oscfar {

// Pareto Type I clutter: F(t) = 1 - (beta / t)^alpha on t >= beta.
class ParetoParams {
public:
    ParetoParams(double alpha, double beta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }

    friend bool operator==(const ParetoParams&, const ParetoParams&) = default;

private:
    double alpha_;
    double beta_;
};

// Non-empty list of non-negative cell measurements (a clutter range profile
// or the set of cells under test).
class CellVector {
public:
    explicit CellVector(std::vector<double> values);
    CellVector(std::initializer_list<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    operator std::span<const double>() const noexcept { return values_; }

    friend bool operator==(const CellVector&, const CellVector&) = default;

private:
    std::vector<double> values_;
};

double pareto_cdf(const ParetoParams& params, double t) noexcept;

// Inverse CDF applied to one uniform draw u in (0, 1]; u = 1 gives beta.
inline double pareto_from_uniform(const ParetoParams& params, double u) {
    return params.beta() * std::pow(u, -1.0 / params.alpha());
}

// Inverse-CDF sampling, beta * u^(-1/alpha), driven by UniformStream(seed, 0, 0).
CellVector sample_pareto(const ParetoParams& params, std::size_t count, std::uint64_t seed);

// Pareto -> unit exponential: alpha * ln(z / beta). Requires z >= beta.
double to_exponential_dual(double z, const ParetoParams& params);

// Unit exponential -> Pareto: beta * exp(x / alpha).
double from_exponential_dual(double x, const ParetoParams& params);

// j-th smallest value, 1-based, with multiset semantics for ties.
double order_statistic(std::span<const double> cells, std::size_t j);

}  // namespace oscfar
