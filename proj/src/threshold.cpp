#include "oscfar/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "oscfar/error.hpp"

namespace oscfar {

namespace {

// Two closed-form evaluations may disagree with strict monotonicity by this
// much relative to their magnitude before we call it a violation. The
// rounding noise of the alternating sum grows with its condition estimate.
constexpr double kMonotoneSlack = 1e-12;
constexpr double kNoisePerCondition = 64.0 * std::numeric_limits<double>::epsilon();

struct Probe {
    double tau;
    double pfa;
    double condition;
};

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

class PfaOfTau {
public:
    PfaOfTau(const DetectorGeometry& g, double target) : geometry_(g), target_(target) {}

    Probe operator()(double tau) {
        ++calls_;
        const auto v = multipulse_os_pfa(DetectorConfig{geometry_, tau});
        return {tau, v.value, v.condition_estimate};
    }

    double excess(const Probe& p) const { return p.pfa - target_; }
    int calls() const { return calls_; }

private:
    DetectorGeometry geometry_;
    double target_;
    int calls_ = 0;
};

void require_decrease(const Probe& left, const Probe& right) {
    const double relative =
        std::max(kMonotoneSlack, kNoisePerCondition * std::max(left.condition, right.condition));
    const double slack = relative * std::max(left.pfa, right.pfa);
    if (right.pfa > left.pfa + slack) {
        throw NonMonotoneError("Pfa is not decreasing in tau: Pfa(" + format_number(left.tau) +
                               ") = " + format_number(left.pfa) + " < Pfa(" +
                               format_number(right.tau) + ") = " + format_number(right.pfa));
    }
}

}  // namespace

SolveResult solve_tau(const DetectorGeometry& geometry, double target_pfa,
                      const SolverOptions& options) {
    geometry.validate();
    if (!(target_pfa > 0.0 && target_pfa < 1.0)) {
        throw InvalidArgument("pfa", "target Pfa must lie in (0, 1), got " + format_number(target_pfa));
    }
    if (!(options.pfa_tol > 0.0) || !(options.tau_rel_tol > 0.0) ||
        !(options.initial_upper > 0.0) || !(options.tau_cap >= options.initial_upper)) {
        throw InvalidArgument("solver options must have positive tolerances and 0 < initial_upper <= tau_cap");
    }

    PfaOfTau pfa(geometry, target_pfa);

    Probe lo = pfa(0.0);
    if (pfa.excess(lo) <= 0.0) {
        throw InfeasibleTarget("target Pfa " + format_number(target_pfa) +
                                   " is not attainable: the maximum, at tau = 0, is " +
                                   format_number(lo.pfa),
                               lo.pfa);
    }

    // Grow [lo, hi] geometrically until Pfa(hi) <= target.
    Probe hi = pfa(std::min(options.initial_upper, options.tau_cap));
    require_decrease(lo, hi);
    while (pfa.excess(hi) > 0.0) {
        if (hi.tau >= options.tau_cap) {
            throw UnbracketableTarget("target Pfa " + format_number(target_pfa) +
                                          " needs tau beyond the cap " +
                                          format_number(options.tau_cap) + " (Pfa there is " +
                                          format_number(hi.pfa) + ")",
                                      options.tau_cap);
        }
        lo = hi;
        hi = pfa(std::min(2.0 * hi.tau, options.tau_cap));
        require_decrease(lo, hi);
    }
    if (pfa.excess(hi) == 0.0) {
        return {hi.tau, hi.pfa, 0, hi.tau, hi.tau};
    }

    // Brent's method on excess(tau). b is the current best point, c the
    // opposite end of the bracket, a the previous iterate.
    const int bracket_calls = pfa.calls();
    Probe a = lo;
    Probe b = hi;
    Probe c = a;
    double fa = pfa.excess(a);
    double fb = pfa.excess(b);
    double fc = fa;
    double d = b.tau - a.tau;
    double e = d;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b.tau - a.tau;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        const double tol = 2.0 * eps * std::fabs(b.tau) +
                           0.5 * options.tau_rel_tol * std::max(1.0, std::fabs(b.tau));
        const double half = 0.5 * (c.tau - b.tau);
        if (std::fabs(half) <= tol || fb == 0.0) {
            const Probe& low = fb > 0.0 ? b : c;
            const Probe& high = fb > 0.0 ? c : b;
            if (std::fabs(fb) > options.pfa_tol) {
                throw ComputationError("tau converged to " + format_number(b.tau) +
                                       " but |Pfa - target| = " + format_number(std::fabs(fb)) +
                                       " exceeds pfa_tol " + format_number(options.pfa_tol));
            }
            return {b.tau, b.pfa, pfa.calls() - bracket_calls, std::min(low.tau, high.tau),
                    std::max(low.tau, high.tau)};
        }

        if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
            // Secant or inverse quadratic interpolation.
            const double s = fb / fa;
            double p;
            double q;
            if (a.tau == c.tau) {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b.tau - a.tau) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) {
                q = -q;
            } else {
                p = -p;
            }
            if (2.0 * p < std::min(3.0 * half * q - std::fabs(tol * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }

        a = b;
        fa = fb;
        const double step = std::fabs(d) > tol ? d : std::copysign(tol, half);
        b = pfa(b.tau + step);
        fb = pfa.excess(b);

        // b lies strictly between a and c; its value must sit between theirs.
        const Probe& left = a.tau < c.tau ? a : c;
        const Probe& right = a.tau < c.tau ? c : a;
        require_decrease(left, b);
        require_decrease(b, right);
    }

    throw ComputationError("tau solver did not converge within " +
                           std::to_string(options.max_iterations) + " iterations");
}

}  // namespace oscfar
