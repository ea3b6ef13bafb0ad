#pragma once

#include <cstddef>
#include <functional>

#include "oscfar/pfa.hpp"

namespace oscfar {

struct QuadratureSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_subdivisions = 2000;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;     // sum of per-rectangle |Kronrod - Gauss| estimates
    int subdivisions = 0;   // number of bisections performed
    int evaluations = 0;    // integrand calls
    bool converged = false;
};

// Globally adaptive cubature of f over [0,1]^2. Each rectangle is integrated
// with the tensor-product 15-point Gauss-Kronrod rule; the rectangle with the
// largest error estimate is bisected along the axis whose embedded 7-point
// Gauss rule disagrees most. The returned value is summed over rectangles in
// creation order, so it is independent of heap ordering details.
QuadratureResult integrate_unit_square(const std::function<double(double, double)>& f,
                                       const QuadratureSettings& settings = {});

// P(X_(k) > s) for the k-th order statistic of M unit exponentials.
double cut_os_survival(double s, int cut_count, int cut_rank);

// Same probability written in terms of x = exp(-s) in [0, 1].
double cut_os_survival_from_decay(double x, int cut_count, int cut_rank) noexcept;

// Numerical false-alarm probability: the double integral over the CRP minimum
// T ~ Exp(N) and the conditional spacing Q (the (n-1)th order statistic of
// N-1 unit exponentials) of P(X_(k) > T + tau Q), mapped to the unit square
// by phi = exp(-T), psi = exp(-Q). Throws ConvergenceError (carrying the best
// estimate) when max_subdivisions is exhausted.
PfaValue quad_pfa(const DetectorConfig& config, const QuadratureSettings& settings = {});

}  // namespace oscfar
