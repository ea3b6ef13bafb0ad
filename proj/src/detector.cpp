#include "oscfar/detector.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oscfar/error.hpp"

namespace oscfar {

namespace {

void check_crp(std::span<const double> crp) {
    if (crp.size() < 2) {
        throw InvalidArgument("crp", "clutter range profile needs at least 2 cells, got " +
                                         std::to_string(crp.size()));
    }
    for (std::size_t i = 0; i < crp.size(); ++i) {
        // Pareto support starts at beta > 0; zero or negative cells are not clutter.
        if (!(crp[i] > 0.0) || !std::isfinite(crp[i])) {
            throw InvalidArgument("crp", "CRP cell " + std::to_string(i) +
                                             " must be finite and strictly positive");
        }
    }
}

void check_tau(double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("tau", "threshold multiplier tau must be finite and >= 0");
    }
}

}  // namespace

std::string_view to_string(Hypothesis h) noexcept {
    return h == Hypothesis::H1 ? "H1" : "H0";
}

double os_threshold(double crp_min, double crp_ranked, double tau) noexcept {
    if (tau == 1.0) {
        return crp_ranked;
    }
    if (tau == 0.0 || crp_ranked == crp_min) {
        return crp_min;
    }
    return crp_min * std::exp(tau * std::log(crp_ranked / crp_min));
}

namespace detail {

Decision decide_multi_inplace(std::span<double> cuts, std::span<double> crp, int crp_rank,
                              int cut_rank, double tau) noexcept {
    const double crp_min = *std::min_element(crp.begin(), crp.end());
    auto crp_nth = crp.begin() + (crp_rank - 1);
    std::nth_element(crp.begin(), crp_nth, crp.end());
    auto cut_nth = cuts.begin() + (cut_rank - 1);
    std::nth_element(cuts.begin(), cut_nth, cuts.end());

    Decision d;
    d.statistic = *cut_nth;
    d.threshold = os_threshold(crp_min, *crp_nth, tau);
    d.outcome = d.statistic > d.threshold ? Hypothesis::H1 : Hypothesis::H0;
    return d;
}

}  // namespace detail

Decision decide_single(double z0, std::span<const double> crp, int crp_rank, double tau) {
    check_crp(crp);
    if (crp_rank <= 1 || static_cast<std::size_t>(crp_rank) > crp.size()) {
        throw InvalidArgument("k", "single-pulse rank must satisfy 1 < k <= N");
    }
    if (!(z0 >= 0.0)) {
        throw InvalidArgument("z0", "cell under test must be non-negative");
    }
    check_tau(tau);
    double cut = z0;
    std::vector<double> scratch(crp.begin(), crp.end());
    return detail::decide_multi_inplace(std::span<double>(&cut, 1), scratch, crp_rank, 1, tau);
}

Decision decide_multi(std::span<const double> cuts, std::span<const double> crp, int crp_rank,
                      int cut_rank, double tau) {
    if (cuts.empty()) {
        throw InvalidArgument("cuts", "at least one cell under test is required");
    }
    for (double v : cuts) {
        if (!(v >= 0.0)) {
            throw InvalidArgument("cuts", "cells under test must be non-negative");
        }
    }
    check_crp(crp);
    if (crp_rank <= 1 || static_cast<std::size_t>(crp_rank) > crp.size()) {
        throw InvalidArgument("n", "CRP rank must satisfy 1 < n <= N");
    }
    if (cut_rank < 1 || static_cast<std::size_t>(cut_rank) > cuts.size()) {
        throw InvalidArgument("k", "CUT rank must satisfy 1 <= k <= M");
    }
    check_tau(tau);
    std::vector<double> cut_scratch(cuts.begin(), cuts.end());
    std::vector<double> crp_scratch(crp.begin(), crp.end());
    return detail::decide_multi_inplace(cut_scratch, crp_scratch, crp_rank, cut_rank, tau);
}

}  // namespace oscfar
