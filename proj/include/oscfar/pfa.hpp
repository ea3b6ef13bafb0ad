#pragma once

#include <string_view>

namespace oscfar {

// Window geometry of the multipulse order-statistic detector
//
//     X_(cut_rank)  >  Z_(1)^(1 - tau) * Z_(crp_rank)^tau
//
// where Z is the clutter range profile (crp_size cells) and X the cells under
// test (cut_count pulses).
struct DetectorGeometry {
    int crp_size = 0;   // N
    int cut_count = 0;  // M
    int crp_rank = 0;   // n, 1 < n <= N
    int cut_rank = 0;   // k, 1 <= k <= M

    // Throws InvalidArgument naming the offending field.
    void validate() const;
};

struct DetectorConfig {
    DetectorGeometry geometry;
    double tau = 0.0;

    void validate() const;
};

enum class PfaMethod { analytic, quadrature, simulated };

std::string_view to_string(PfaMethod method) noexcept;

struct PfaValue {
    double value = 0.0;  // clamped to [0, 1]
    PfaMethod method = PfaMethod::analytic;
    // Sum of |terms| over |sum| for the closed form; 1 for cancellation-free paths.
    double condition_estimate = 1.0;
    // Pre-clamp value.
    double raw_value = 0.0;
    // Achieved absolute error (quadrature only).
    double error_estimate = 0.0;

    static constexpr double kIllConditioned = 1e6;

    bool ill_conditioned() const noexcept { return condition_estimate > kIllConditioned; }
};

// Raw closed-form values farther than this outside [0, 1] are treated as a
// cancellation failure.
inline constexpr double kRangeSlack = 1e-9;

// Single-CUT detector Z_0 > Z_(1)^(1-tau) Z_(k)^tau:
//   N! / ((N+1)(N-k)!) * Gamma(tau+N-k+1) / Gamma(tau+N),  1 < k <= N, tau >= 0.
PfaValue single_pulse_os_pfa(int crp_size, int crp_rank, double tau);

// Closed-form false-alarm probability of the multipulse detector. Throws
// CancellationError when the raw value leaves [-1e-9, 1 + 1e-9].
PfaValue multipulse_os_pfa(const DetectorConfig& config);

}  // namespace oscfar
