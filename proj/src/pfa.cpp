#include "oscfar/pfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "oscfar/detail/numeric.hpp"
#include "oscfar/error.hpp"

namespace oscfar {

namespace {

// Beyond this many factors the integer-offset gamma ratios fall back to lgamma.
constexpr int kProductLimit = 4096;

// 2^53: coefficients below this are exact in double.
constexpr double kExactIntegerLimit = 9007199254740992.0;

std::string describe(const DetectorGeometry& g) {
    std::ostringstream os;
    os << "(N=" << g.crp_size << ", M=" << g.cut_count << ", n=" << g.crp_rank
       << ", k=" << g.cut_rank << ")";
    return os.str();
}

void check_tau(double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("tau", "threshold multiplier tau must be finite and >= 0, got " +
                                         std::to_string(tau));
    }
}

// log E[exp(-m S)] for S = T + tau * Q, T ~ Exp(N) the CRP minimum and Q the
// (n-1)th order statistic of N-1 unit exponentials:
//   log N/(N+m) + sum_{j=1}^{n-1} log (N-j)/(N-j+tau*m).
double log_decay_moment(int crp_size, int crp_rank, double tau, int m) {
    const double N = crp_size;
    const double shift = tau * m;
    if (crp_rank - 1 > kProductLimit) {
        return std::lgamma(N + 1.0) - std::lgamma(N - crp_rank + 1.0) +
               std::lgamma(N - crp_rank + shift + 1.0) - std::log(N + m) -
               std::lgamma(N + shift);
    }
    double acc = -std::log1p(m / N);
    if (shift > 0.0) {
        for (int j = 1; j < crp_rank; ++j) {
            acc -= std::log1p(shift / (N - j));
        }
    }
    return acc;
}

}  // namespace

void DetectorGeometry::validate() const {
    if (crp_size < 2) {
        throw InvalidArgument("N", "CRP length N must be at least 2, got " + std::to_string(crp_size));
    }
    if (cut_count < 1) {
        throw InvalidArgument("M", "number of cells under test M must be at least 1, got " +
                                       std::to_string(cut_count));
    }
    if (crp_rank <= 1 || crp_rank > crp_size) {
        throw InvalidArgument("n", "CRP rank n must satisfy 1 < n <= N " + describe(*this));
    }
    if (cut_rank < 1 || cut_rank > cut_count) {
        throw InvalidArgument("k", "CUT rank k must satisfy 1 <= k <= M " + describe(*this));
    }
}

void DetectorConfig::validate() const {
    geometry.validate();
    check_tau(tau);
}

std::string_view to_string(PfaMethod method) noexcept {
    switch (method) {
        case PfaMethod::analytic:
            return "analytic";
        case PfaMethod::quadrature:
            return "quadrature";
        case PfaMethod::simulated:
            return "simulated";
    }
    return "unknown";
}

PfaValue single_pulse_os_pfa(int crp_size, int crp_rank, double tau) {
    if (crp_size < 2) {
        throw InvalidArgument("N", "CRP length N must be at least 2, got " + std::to_string(crp_size));
    }
    if (crp_rank <= 1 || crp_rank > crp_size) {
        throw InvalidArgument("k", "single-pulse rank must satisfy 1 < k <= N, got k=" +
                                       std::to_string(crp_rank) + ", N=" + std::to_string(crp_size));
    }
    check_tau(tau);

    const double N = crp_size;
    double value;
    if (crp_rank - 1 > kProductLimit) {
        value = std::exp(std::lgamma(N + 1.0) - std::log(N + 1.0) -
                         std::lgamma(N - crp_rank + 1.0) + std::lgamma(tau + N - crp_rank + 1.0) -
                         std::lgamma(tau + N));
    } else {
        // Gamma(tau+N-k+1)/Gamma(tau+N) * (N-1)!/(N-k)! telescopes into k-1 factors.
        value = N / (N + 1.0);
        for (int j = 1; j < crp_rank; ++j) {
            value *= (N - j) / (N - j + tau);
        }
    }

    PfaValue out;
    out.value = value;
    out.raw_value = value;
    out.method = PfaMethod::analytic;
    return out;
}

PfaValue multipulse_os_pfa(const DetectorConfig& config) {
    config.validate();
    const auto& g = config.geometry;
    const int M = g.cut_count;
    const int k = g.cut_rank;

    // P(X_(k) > S) = E[ sum_{i<k} C(M,i) e^{-(M-i)S} (1 - e^{-S})^i ]. Expanding and
    // collecting powers of e^{-S} leaves only m = M-k+1 .. M, with coefficient
    //   (-1)^j C(M,m) C(m-1,j),  j = m - (M-k+1),
    // which is the closed-form double sum with its i/l terms grouped by m.
    detail::CompensatedSum sum;
    detail::CompensatedSum abs_sum;
    for (int m = M - k + 1; m <= M; ++m) {
        const int j = m - (M - k + 1);
        const double log_moment = log_decay_moment(g.crp_size, g.crp_rank, config.tau, m);
        const double coeff = detail::binomial(M, m) * detail::binomial(m - 1, j);
        double magnitude;
        if (coeff < kExactIntegerLimit) {
            magnitude = coeff * std::exp(log_moment);
        } else {
            magnitude = std::exp(detail::log_binomial(M, m) + detail::log_binomial(m - 1, j) +
                                 log_moment);
        }
        sum.add(j % 2 == 0 ? magnitude : -magnitude);
        abs_sum.add(magnitude);
    }

    const double raw = sum.value();
    const double total = abs_sum.value();
    double condition = 1.0;
    if (raw != 0.0) {
        condition = total / std::fabs(raw);
    } else if (total > 0.0) {
        condition = std::numeric_limits<double>::infinity();
    }

    if (raw < -kRangeSlack || raw > 1.0 + kRangeSlack || !std::isfinite(raw)) {
        std::ostringstream os;
        os.precision(17);
        os << "closed-form Pfa " << raw << " lies outside [0, 1] for " << describe(g)
           << ", tau=" << config.tau << " (condition estimate " << condition
           << "); catastrophic cancellation";
        throw CancellationError(os.str(), raw, condition);
    }

    PfaValue out;
    out.raw_value = raw;
    out.value = std::clamp(raw, 0.0, 1.0);
    out.condition_estimate = condition;
    out.method = PfaMethod::analytic;
    return out;
}

}  // namespace oscfar
