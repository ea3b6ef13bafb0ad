#include "oscfar/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "oscfar/detail/numeric.hpp"
#include "oscfar/error.hpp"

namespace oscfar {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
struct GaussKronrod15 {
    std::array<double, 15> nodes{};
    std::array<double, 15> kronrod{};
    std::array<double, 15> gauss{};

    GaussKronrod15() {
        constexpr std::array<double, 8> xgk = {
            0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
            0.207784955007898467600689403773245, 0.0};
        constexpr std::array<double, 8> wgk = {
            0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
        // Gauss weights at xgk[1], xgk[3], xgk[5], xgk[7].
        constexpr std::array<double, 4> wg = {
            0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
            0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
        for (int i = 0; i < 7; ++i) {
            nodes[i] = -xgk[i];
            nodes[14 - i] = xgk[i];
            kronrod[i] = kronrod[14 - i] = wgk[i];
            gauss[i] = gauss[14 - i] = (i % 2 == 1) ? wg[i / 2] : 0.0;
        }
        nodes[7] = 0.0;
        kronrod[7] = wgk[7];
        gauss[7] = wg[3];
    }
};

const GaussKronrod15& rule() {
    static const GaussKronrod15 r;
    return r;
}

struct Rect {
    double x0, x1, y0, y1;
    double value = 0.0;
    double error = 0.0;
    bool split_x = true;
    bool active = true;
};

void evaluate(Rect& r, const std::function<double(double, double)>& f, int& evaluations) {
    const auto& gk = rule();
    const double hx = 0.5 * (r.x1 - r.x0);
    const double hy = 0.5 * (r.y1 - r.y0);
    const double cx = 0.5 * (r.x1 + r.x0);
    const double cy = 0.5 * (r.y1 + r.y0);

    double kk = 0.0;  // Kronrod x Kronrod
    double gx_ky = 0.0;  // Gauss in x, Kronrod in y
    double kx_gy = 0.0; // Kronrod in x, Gauss in y
    for (int i = 0; i < 15; ++i) {
        const double x = cx + hx * gk.nodes[i];
        double col_k = 0.0;
        double col_g = 0.0;
        for (int j = 0; j < 15; ++j) {
            const double v = f(x, cy + hy * gk.nodes[j]);
            col_k += gk.kronrod[j] * v;
            col_g += gk.gauss[j] * v;
        }
        kk += gk.kronrod[i] * col_k;
        gx_ky += gk.gauss[i] * col_k;
        kx_gy += gk.kronrod[i] * col_g;
    }
    evaluations += 225;

    const double area = hx * hy;
    r.value = area * kk;
    const double ex = std::fabs(area * (kk - gx_ky));
    const double ey = std::fabs(area * (kk - kx_gy));
    r.error = ex + ey;
    r.split_x = ex >= ey;
}

double survival_terms(double x, double y, int cut_count, int cut_rank) noexcept {
    if (x <= 0.0) {
        return 0.0;
    }
    double s = 0.0;
    for (int i = 0; i < cut_rank; ++i) {
        s += detail::binomial(cut_count, i) * std::pow(x, cut_count - i) * std::pow(y, i);
    }
    return s;
}

void check_cut_indices(int cut_count, int cut_rank) {
    if (cut_count < 1) {
        throw InvalidArgument("M", "number of cells under test M must be at least 1");
    }
    if (cut_rank < 1 || cut_rank > cut_count) {
        throw InvalidArgument("k", "CUT rank k must satisfy 1 <= k <= M");
    }
}

}  // namespace

void QuadratureSettings::validate() const {
    if (!(abs_tol > 0.0)) {
        throw InvalidArgument("abs_tol", "quadrature abs_tol must be positive");
    }
    if (!(rel_tol > 0.0)) {
        throw InvalidArgument("rel_tol", "quadrature rel_tol must be positive");
    }
    if (max_subdivisions < 1) {
        throw InvalidArgument("max_subdivisions", "quadrature max_subdivisions must be >= 1");
    }
}

QuadratureResult integrate_unit_square(const std::function<double(double, double)>& f,
                                       const QuadratureSettings& settings) {
    settings.validate();

    std::vector<Rect> rects;
    rects.reserve(2 * static_cast<std::size_t>(settings.max_subdivisions) + 1);
    QuadratureResult out;

    rects.push_back(Rect{0.0, 1.0, 0.0, 1.0});
    evaluate(rects.back(), f, out.evaluations);

    auto by_error = [&rects](std::size_t a, std::size_t b) {
        if (rects[a].error != rects[b].error) {
            return rects[a].error < rects[b].error;
        }
        return a > b;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)> heap(by_error);
    heap.push(0);

    auto totals = [&rects]() {
        detail::CompensatedSum value;
        detail::CompensatedSum error;
        for (const auto& r : rects) {
            if (r.active) {
                value.add(r.value);
                error.add(r.error);
            }
        }
        return std::pair{value.value(), error.value()};
    };

    auto [value, error] = totals();
    while (error > std::max(settings.abs_tol, settings.rel_tol * std::fabs(value)) &&
           out.subdivisions < settings.max_subdivisions) {
        const std::size_t worst = heap.top();
        heap.pop();
        Rect parent = rects[worst];
        rects[worst].active = false;

        Rect lo = parent;
        Rect hi = parent;
        if (parent.split_x) {
            const double mid = 0.5 * (parent.x0 + parent.x1);
            lo.x1 = mid;
            hi.x0 = mid;
        } else {
            const double mid = 0.5 * (parent.y0 + parent.y1);
            lo.y1 = mid;
            hi.y0 = mid;
        }
        evaluate(lo, f, out.evaluations);
        evaluate(hi, f, out.evaluations);
        rects.push_back(lo);
        heap.push(rects.size() - 1);
        rects.push_back(hi);
        heap.push(rects.size() - 1);
        ++out.subdivisions;

        std::tie(value, error) = totals();
    }

    out.value = value;
    out.error = error;
    out.converged = error <= std::max(settings.abs_tol, settings.rel_tol * std::fabs(value));
    return out;
}

double cut_os_survival(double s, int cut_count, int cut_rank) {
    check_cut_indices(cut_count, cut_rank);
    if (!(s >= 0.0)) {
        throw InvalidArgument("s", "survival argument must be non-negative, got " + std::to_string(s));
    }
    // Written as the lower tail sum_{i<k} rather than 1 - sum_{i>=k}; the two
    // agree exactly and this one has no subtraction.
    return survival_terms(std::exp(-s), -std::expm1(-s), cut_count, cut_rank);
}

double cut_os_survival_from_decay(double x, int cut_count, int cut_rank) noexcept {
    return survival_terms(x, 1.0 - x, cut_count, cut_rank);
}

PfaValue quad_pfa(const DetectorConfig& config, const QuadratureSettings& settings) {
    config.validate();
    settings.validate();

    const auto& g = config.geometry;
    const int N = g.crp_size;
    const int n = g.crp_rank;
    const double tau = config.tau;
    // Density of Q in psi = exp(-Q), Jacobian included:
    //   (n-1) C(N-1, n-1) (1 - psi)^(n-2) psi^(N-n).
    const double q_norm = (n - 1) * detail::binomial(N - 1, n - 1);

    auto integrand = [&](double phi, double psi) {
        // N exp(-N t) dt becomes N phi^(N-1) dphi.
        const double t_density = N * std::pow(phi, N - 1);
        const double q_density = q_norm * std::pow(1.0 - psi, n - 2) * std::pow(psi, N - n);
        const double decay = tau == 0.0 ? phi : phi * std::pow(psi, tau);
        return t_density * q_density * cut_os_survival_from_decay(decay, g.cut_count, g.cut_rank);
    };

    const QuadratureResult r = integrate_unit_square(integrand, settings);
    if (!r.converged) {
        std::ostringstream os;
        os.precision(17);
        os << "quadrature did not converge within " << settings.max_subdivisions
           << " subdivisions: best estimate " << r.value << ", achieved error " << r.error;
        throw ConvergenceError(os.str(), r.value, r.error);
    }

    PfaValue out;
    out.method = PfaMethod::quadrature;
    out.raw_value = r.value;
    out.value = std::clamp(r.value, 0.0, 1.0);
    out.error_estimate = r.error;
    return out;
}

}  // namespace oscfar
