#pragma once

#include <span>
#include <string_view>

namespace oscfar {

enum class Hypothesis { H0, H1 };

std::string_view to_string(Hypothesis h) noexcept;

struct Decision {
    Hypothesis outcome = Hypothesis::H0;
    double statistic = 0.0;  // CUT side
    double threshold = 0.0;  // CRP side

    bool detected() const noexcept { return outcome == Hypothesis::H1; }
};

// H1 iff z0 > Z_(1)^(1-tau) * Z_(k)^tau, with 1 < k <= N. Ties go to H0.
Decision decide_single(double z0, std::span<const double> crp, int crp_rank, double tau);

// H1 iff X_(k) > Z_(1)^(1-tau) * Z_(n)^tau, 1 <= k <= M, 1 < n <= N.
Decision decide_multi(std::span<const double> cuts, std::span<const double> crp, int crp_rank,
                      int cut_rank, double tau);

// Z_(1)^(1-tau) Z_(n)^tau evaluated as Z_(1) * exp(tau * ln(Z_(n) / Z_(1))).
double os_threshold(double crp_min, double crp_ranked, double tau) noexcept;

namespace detail {

// Same rule as decide_multi without input validation; reorders both buffers.
Decision decide_multi_inplace(std::span<double> cuts, std::span<double> crp, int crp_rank,
                              int cut_rank, double tau) noexcept;

}  // namespace detail

}  // namespace oscfar
