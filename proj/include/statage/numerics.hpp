#pragma once

#include <functional>
#include <span>

namespace statage::numerics {

/// Closed interval [lo, hi] with lo < hi, both finite.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;

    /// Throws DomainError unless lo < hi and both are finite.
    void validate() const;
    double width() const noexcept { return hi - lo; }
};

using ScalarFn = std::function<double(double)>;

/// Principal branch W0 of the Lambert W function, the inverse of w*e^w on w >= -1.
///
/// Accepts x >= -1/e (x slightly below -1/e within 1e-12 is snapped to the
/// branch point). Residual |w e^w - x| <= 1e-12 * max(1, |x|).
double lambert_w0(double x);

/// W0(e^log_x) for arguments whose exponential overflows a double.
double lambert_w0_exp(double log_x);

/// 1 + W0((p - 1)/e) for p >= 0, accurate when the argument sits next to the
/// branch point -1/e (p is then small and 1 + W0 is of order sqrt(2p)).
double lambert_w0_offset(double p);

/// 1 - (1 - u) e^u, evaluated without cancellation for small |u|.
double lambert_gap(double u);

/// Bisection controls. Iteration stops at |f| <= f_tol, width <= x_tol, or
/// when the bracket cannot be split further in floating point.
struct RootOptions {
    double f_tol = 0.0;
    double x_tol = 0.0;
    int max_iterations = 2000;
};

/// Root of a continuous, sign-changing f on the bracket by deterministic bisection.
///
/// Returns x* with |f(x*)| <= tol or final bracket width <= tol. Throws
/// BracketError carrying the endpoint values when f(lo) and f(hi) share a sign.
double find_root_monotone(const ScalarFn& f, Bracket bracket, double tol);
double find_root_monotone(const ScalarFn& f, Bracket bracket, const RootOptions& options);

enum class BoundaryHit { none, lower, upper };

struct MinimizeResult {
    double x = 0.0;
    double fx = 0.0;
    BoundaryHit boundary = BoundaryHit::none;
    int iterations = 0;
    double final_width = 0.0;
};

/// Golden-section minimization of a unimodal f over the bracket.
///
/// The endpoints are evaluated as well, so a monotone f returns its boundary
/// minimum with the corresponding flag.
MinimizeResult minimize_unimodal(const ScalarFn& f, Bracket bracket, double tol);

/// Central finite difference with step h.
double central_difference(const ScalarFn& f, double x, double h);

/// log(sum_i weights_i * exp(exponents_i)) for positive weights.
double log_sum_exp(std::span<const double> exponents, std::span<const double> weights);

}  // namespace statage::numerics
