#pragma once

#include <cmath>

namespace oscfar::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// C(n, k) in double. Exact while the intermediate C(n-k+i, i) * (n-k+i) stays
// below 2^53.
inline double binomial(int n, int k) noexcept {
    if (k < 0 || k > n) {
        return 0.0;
    }
    if (k > n - k) {
        k = n - k;
    }
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return c;
}

inline double log_binomial(int n, int k) noexcept {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace oscfar::detail
