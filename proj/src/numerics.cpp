#include "statage/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "statage/error.hpp"

namespace statage::numerics {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;
constexpr int kHalleyIterations = 50;
constexpr double kGolden = 0.6180339887498948482;  // (sqrt(5) - 1) / 2

// Series of W0 around the branch point in s = sqrt(2 (e x + 1)); returns 1 + W0.
double branch_series(double s) {
    return s * (1.0 + s * (-1.0 / 3.0 + s * (11.0 / 72.0 + s * (-43.0 / 540.0 + s * (769.0 / 17280.0)))));
}

double halley_w0(double x, double w) {
    for (int i = 0; i < kHalleyIterations; ++i) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        if (wp1 == 0.0) break;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if (denom == 0.0 || !std::isfinite(denom)) break;
        const double step = f / denom;
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
    }
    return w;
}

}  // namespace

void Bracket::validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw DomainError("invalid bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

double lambert_gap(double u) {
    if (std::abs(u) < 0.5) {
        // 1 - (1 - u) e^u = sum_{k>=2} (k - 1) u^k / k!
        double term = u;  // u^k / (k-1)! at k = 1
        double sum = 0.0;
        for (int k = 2; k < 40; ++k) {
            term *= u / static_cast<double>(k - 1);  // u^k / (k-1)!
            const double add = term * static_cast<double>(k - 1) / static_cast<double>(k);
            sum += add;
            if (std::abs(add) <= 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return 1.0 - (1.0 - u) * std::exp(u);
}

double lambert_w0(double x) {
    if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
    if (x < -kInvE) {
        if (x < -kInvE - 1e-12) {
            throw DomainError("lambert_w0: argument " + std::to_string(x) + " below -1/e");
        }
        return -1.0;
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;
    if (x == -kInvE) return -1.0;

    double w;
    if (x < -0.32) {
        const double s = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
        w = branch_series(s) - 1.0;
    } else if (x < 3.0) {
        // Winitzki-style estimate, good to a few percent on (-0.32, 3).
        const double l = std::log1p(x);
        w = l * (1.0 - std::log1p(l) / (2.0 + l));
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    return halley_w0(x, w);
}

double lambert_w0_exp(double log_x) {
    if (std::isnan(log_x)) throw DomainError("lambert_w0_exp: NaN argument");
    if (log_x < 700.0) return lambert_w0(std::exp(log_x));
    // Solve w + log(w) = log_x by Newton; the map is smooth and w > 600 here.
    double w = log_x - std::log(log_x);
    for (int i = 0; i < kHalleyIterations; ++i) {
        const double f = w + std::log(w) - log_x;
        const double step = f / (1.0 + 1.0 / w);
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * w) break;
    }
    return w;
}

double lambert_w0_offset(double p) {
    if (std::isnan(p)) throw DomainError("lambert_w0_offset: NaN argument");
    if (p < 0.0) {
        if (p < -1e-12) throw DomainError("lambert_w0_offset: argument below the branch point");
        return 0.0;
    }
    if (p >= 2.0) return 1.0 + lambert_w0((p - 1.0) * kInvE);
    const double s = std::sqrt(2.0 * p);
    double d = branch_series(s);
    if (s < 1e-6) return d;
    // Halley on G(d) = (d - 1) e^d + 1 - p, where (d - 1) e^d + 1 == lambert_gap(d).
    for (int i = 0; i < kHalleyIterations; ++i) {
        const double ed = std::exp(d);
        const double g = lambert_gap(d) - p;
        const double g1 = d * ed;
        const double g2 = (d + 1.0) * ed;
        if (g1 == 0.0) break;
        const double step = g / g1 / (1.0 - g * g2 / (2.0 * g1 * g1));
        d -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * d) break;
    }
    return d;
}

double find_root_monotone(const ScalarFn& f, Bracket bracket, double tol) {
    return find_root_monotone(f, bracket, RootOptions{tol, tol, 2000});
}

double find_root_monotone(const ScalarFn& f, Bracket bracket, const RootOptions& options) {
    bracket.validate();
    double lo = bracket.lo;
    double hi = bracket.hi;
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (std::signbit(f_lo) == std::signbit(f_hi) || std::isnan(f_lo) || std::isnan(f_hi)) {
        throw BracketError("find_root_monotone: no sign change on bracket", lo, hi, f_lo, f_hi);
    }
    double best = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
    double best_f = std::min(std::abs(f_lo), std::abs(f_hi));
    for (int i = 0; i < options.max_iterations; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(mid);
        if (std::abs(f_mid) < best_f) {
            best = mid;
            best_f = std::abs(f_mid);
        }
        if (f_mid == 0.0 || std::abs(f_mid) <= options.f_tol) return mid;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= options.x_tol) break;
    }
    // Bracket exhausted: report the midpoint unless an evaluated point is a better root.
    const double mid = lo + 0.5 * (hi - lo);
    return best_f <= options.f_tol ? best : mid;
}

MinimizeResult minimize_unimodal(const ScalarFn& f, Bracket bracket, double tol) {
    bracket.validate();
    double a = bracket.lo;
    double b = bracket.hi;
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = f(c);
    double fd = f(d);
    int iterations = 0;
    while (b - a > tol && iterations < 10000) {
        ++iterations;
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(d);
        }
        if (!(c < d)) break;
    }
    MinimizeResult result;
    result.iterations = iterations;
    result.final_width = b - a;
    if (fc <= fd) {
        result.x = c;
        result.fx = fc;
    } else {
        result.x = d;
        result.fx = fd;
    }
    const double f_lo = f(bracket.lo);
    const double f_hi = f(bracket.hi);
    if (f_lo <= result.fx && f_lo <= f_hi) {
        result.x = bracket.lo;
        result.fx = f_lo;
        result.boundary = BoundaryHit::lower;
    } else if (f_hi <= result.fx) {
        result.x = bracket.hi;
        result.fx = f_hi;
        result.boundary = BoundaryHit::upper;
    } else if (result.x - bracket.lo <= tol) {
        result.boundary = BoundaryHit::lower;
    } else if (bracket.hi - result.x <= tol) {
        result.boundary = BoundaryHit::upper;
    }
    return result;
}

double central_difference(const ScalarFn& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

double log_sum_exp(std::span<const double> exponents, std::span<const double> weights) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (weights[i] > 0.0) peak = std::max(peak, exponents[i]);
    }
    if (!std::isfinite(peak)) return peak;
    double sum = 0.0;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (weights[i] > 0.0) sum += weights[i] * std::exp(exponents[i] - peak);
    }
    return peak + std::log(sum);
}

}  // namespace statage::numerics
