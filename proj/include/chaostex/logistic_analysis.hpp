#pragma once

#include <cstddef>
#include <vector>

namespace ctx {

/// Even power series F(x) = x^2 - x^4/(mu-1) + ... conjugating the logistic
/// map to multiplication: x_n = F(mu^{n/2} F^{-1}(x_0)).
///
/// Magnitudes follow |a_2n| = sum_{j=1}^{n-1} |a_2j||a_{2n-2j}| / (mu^{n-1} - 1)
/// and signs alternate from a_2 = +1, which is what substituting the series
/// into F(sqrt(mu) x) = mu F(x) (1 - F(x)) produces.
class PowerSeries {
public:
    PowerSeries(double mu, std::vector<double> coefficients);

    double mu() const noexcept { return mu_; }
    /// Highest retained power.
    int order() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
    /// Coefficient of x^power (0 beyond the order).
    double coefficient(int power) const noexcept;
    const std::vector<double>& coefficients() const noexcept { return coefficients_; }

    /// Neumaier-compensated evaluation.
    double operator()(double x) const;
    double derivative(double x) const;

private:
    double mu_;
    std::vector<double> coefficients_;  // index == power
};

/// Throws DomainError for mu <= 1 and ContractViolation unless order is even and >= 2.
PowerSeries series_coefficients(double mu, int order);

/// First omitted term |a_6| x^6 = 2 x^6 / ((mu-1)^2 (mu+1)) of the 4th-order
/// series. Only order 4 is supported (ContractViolation otherwise).
double truncation_bound(double mu, double x, int order);

enum class Branch { Plus, Minus };

/// Second-order closed approximation
///   x_n = (mu^{n+1} - mu^n)/2 (1 +- s) - (mu^{2n+1} - mu^{2n})/2 (1 +- s - 2 x0/(mu-1)),
///   s = sqrt(1 - 4 x0/(mu-1)).
/// Raw value, not clamped. Throws DomainError when x0 > (mu-1)/4 or mu <= 1.
double closed_approx_xn(double x0, double mu, int n, Branch branch = Branch::Minus);

/// Inverse of the 4th-order series x^2 - x^4/(mu-1) via the biquadratic root
/// x = sqrt((1 +- sqrt(1 - 4 a F)) / (2a)), a = 1/(mu-1).
double inverse_biquadratic(double value, double mu, Branch branch = Branch::Minus);

/// Inverse of `series` on its increasing branch through 0 (bisection).
/// Throws DomainError when `value` exceeds the branch maximum.
double series_inverse(const PowerSeries& series, double value);

/// x_n = F(mu^{n/2} F^{-1}(x0)).
double series_predict(const PowerSeries& series, double x0, int n, Branch branch = Branch::Minus);

/// 1/2 (1 - cos(2^n arccos(1 - 2 x0))), the exact logistic orbit at mu = 4.
double exact_logistic_mu4(double x0, int n);

struct OrbitComparison {
    int n = 0;
    double direct = 0.0;
    double series = 0.0;
    double closed_approx = 0.0;
    double abs_error = 0.0;  // |series - direct|
};

struct SeriesOrbitReport {
    double x0 = 0.0;
    double mu = 0.0;
    int order = 0;
    /// Two evaluations of the truncated series, each off by at most the
    /// truncation bound at x = 1 (order 4 only, 0 otherwise).
    double first_step_tolerance = 0.0;
    std::vector<OrbitComparison> steps;  // n = 0..N
};

/// Compares series predictions and the closed approximation with the directly
/// iterated logistic orbit for n = 0..steps. Order 4 inverts explicitly, other
/// orders numerically (minus branch only).
SeriesOrbitReport series_orbit_check(double x0, double mu, int steps, int order,
                                     Branch branch = Branch::Minus);

struct QuasiLinearityReport {
    double mu = 0.0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    /// r_squared[K-1]: coefficient of determination of a straight-line fit to
    /// x0 -> sum_{k=1..K} (1 -+ sqrt(1 - 4 x0/(mu-1)))^k over the grid.
    std::vector<double> r_squared;
};

QuasiLinearityReport quasi_linearity_probe(double mu, int max_k, double x_lo, double x_hi,
                                           std::size_t grid_points,
                                           Branch branch = Branch::Minus);

}  // namespace ctx
