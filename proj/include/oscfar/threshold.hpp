#pragma once

#include "oscfar/pfa.hpp"

namespace oscfar {

struct SolverOptions {
    double pfa_tol = 1e-10;
    // Relative width of the final tau bracket.
    double tau_rel_tol = 1e-12;
    // Upper end of the first bracket [0, initial_upper]; doubled until it
    // straddles the target.
    double initial_upper = 1.0;
    double tau_cap = 1e4;
    int max_iterations = 200;
};

struct SolveResult {
    double tau = 0.0;
    double achieved_pfa = 0.0;
    int iterations = 0;  // closed-form evaluations after bracketing
    double bracket_low = 0.0;
    double bracket_high = 0.0;
};

// Threshold multiplier tau with multipulse_os_pfa(tau) == target_pfa.
//
// Requires 0 < target_pfa < Pfa(tau = 0). Throws InfeasibleTarget when the
// target is at or above Pfa(0), UnbracketableTarget when Pfa(tau_cap) is still
// above it, and NonMonotoneError if a sampled point contradicts the assumed
// strict decrease of Pfa in tau.
SolveResult solve_tau(const DetectorGeometry& geometry, double target_pfa,
                      const SolverOptions& options = {});

}  // namespace oscfar
