#include "chaostex/logistic_analysis.hpp"

#include "chaostex/chaotic_maps.hpp"
#include "chaostex/errors.hpp"

#include <cmath>
#include <string>

namespace ctx {

namespace {

void require_mu(double mu) {
    if (!(mu > 1.0) || !std::isfinite(mu)) {
        throw DomainError("logistic analysis requires mu > 1, got " + std::to_string(mu));
    }
}

// Neumaier summation
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double sign(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }

double radicand(double x0, double mu) {
    double r = 1.0 - 4.0 * x0 / (mu - 1.0);
    if (r < 0.0 && r > -1e-12) r = 0.0;  // x0 at the threshold up to rounding
    if (r < 0.0) {
        throw DomainError("x0 = " + std::to_string(x0) + " exceeds (mu-1)/4 = " +
                          std::to_string((mu - 1.0) / 4.0) + "; square root is not real");
    }
    return r;
}

}  // namespace

PowerSeries::PowerSeries(double mu, std::vector<double> coefficients)
    : mu_(mu), coefficients_(std::move(coefficients)) {}

double PowerSeries::coefficient(int power) const noexcept {
    if (power < 0 || power > order()) return 0.0;
    return coefficients_[static_cast<std::size_t>(power)];
}

double PowerSeries::operator()(double x) const {
    CompensatedSum sum;
    double xp = 1.0;
    for (double a : coefficients_) {
        if (a != 0.0) sum.add(a * xp);
        xp *= x;
    }
    return sum.value();
}

double PowerSeries::derivative(double x) const {
    CompensatedSum sum;
    double xp = 1.0;
    for (std::size_t p = 1; p < coefficients_.size(); ++p) {
        if (coefficients_[p] != 0.0) sum.add(static_cast<double>(p) * coefficients_[p] * xp);
        xp *= x;
    }
    return sum.value();
}

PowerSeries series_coefficients(double mu, int order) {
    require_mu(mu);
    if (order < 2 || order % 2 != 0) {
        throw ContractViolation("series order must be even and >= 2, got " + std::to_string(order));
    }
    const int half = order / 2;
    std::vector<double> magnitude(static_cast<std::size_t>(half) + 1, 0.0);  // |a_2n|
    magnitude[1] = 1.0;
    for (int n = 2; n <= half; ++n) {
        CompensatedSum sum;
        for (int j = 1; j <= n - 1; ++j) {
            sum.add(magnitude[static_cast<std::size_t>(j)] *
                    magnitude[static_cast<std::size_t>(n - j)]);
        }
        magnitude[static_cast<std::size_t>(n)] = sum.value() / (std::pow(mu, n - 1) - 1.0);
    }
    std::vector<double> coefficients(static_cast<std::size_t>(order) + 1, 0.0);
    for (int n = 1; n <= half; ++n) {
        const double s = n % 2 == 1 ? 1.0 : -1.0;
        coefficients[static_cast<std::size_t>(2 * n)] = s * magnitude[static_cast<std::size_t>(n)];
    }
    return PowerSeries(mu, std::move(coefficients));
}

double truncation_bound(double mu, double x, int order) {
    require_mu(mu);
    if (order != 4) {
        throw ContractViolation("truncation bound is only derived for order 4, got " +
                                std::to_string(order));
    }
    const double x6 = std::pow(x, 6);
    return std::abs(2.0 / ((mu - 1.0) * (mu - 1.0) * (mu + 1.0)) * x6);
}

double closed_approx_xn(double x0, double mu, int n, Branch branch) {
    require_mu(mu);
    const double s = sign(branch) * std::sqrt(radicand(x0, mu));
    const double mun = std::pow(mu, n);
    const double mu2n = mun * mun;
    return (mu * mun - mun) / 2.0 * (1.0 + s) -
           (mu * mu2n - mu2n) / 2.0 * (1.0 + s - 2.0 * x0 / (mu - 1.0));
}

double inverse_biquadratic(double value, double mu, Branch branch) {
    require_mu(mu);
    const double alpha = 1.0 / (mu - 1.0);
    const double z = (1.0 + sign(branch) * std::sqrt(radicand(value, mu))) / (2.0 * alpha);
    return std::sqrt(std::max(0.0, z));
}

double series_inverse(const PowerSeries& series, double value) {
    if (value == 0.0) return 0.0;
    if (value < 0.0) throw DomainError("series_inverse: negative value");

    // Locate the end of the increasing branch starting at 0.
    constexpr double kStep = 1e-3;
    constexpr double kSearchLimit = 8.0;
    double hi = kStep;
    while (hi < kSearchLimit && series.derivative(hi) > 0.0) hi += kStep;
    if (series(hi) < value) {
        throw DomainError("series_inverse: value " + std::to_string(value) +
                          " exceeds the increasing branch maximum " + std::to_string(series(hi)));
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (series(mid) < value ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double series_predict(const PowerSeries& series, double x0, int n, Branch branch) {
    double root = 0.0;
    if (series.order() == 4) {
        root = inverse_biquadratic(x0, series.mu(), branch);
    } else if (branch == Branch::Minus) {
        root = series_inverse(series, x0);
    } else {
        throw ContractViolation("plus branch is only available for the 4th-order series");
    }
    return series(std::pow(std::sqrt(series.mu()), n) * root);
}

double exact_logistic_mu4(double x0, int n) {
    return 0.5 * (1.0 - std::cos(std::ldexp(1.0, n) * std::acos(1.0 - 2.0 * x0)));
}

SeriesOrbitReport series_orbit_check(double x0, double mu, int steps, int order, Branch branch) {
    require_mu(mu);
    if (steps < 0) throw ContractViolation("series_orbit_check: negative step count");
    radicand(x0, mu);

    const PowerSeries series = series_coefficients(mu, order);
    const auto direct = orbit(x0, ChaoticMapSpec{MapFamily::Logistic, mu, 0.0},
                              static_cast<std::size_t>(steps));

    SeriesOrbitReport report;
    report.x0 = x0;
    report.mu = mu;
    report.order = order;
    report.first_step_tolerance = order == 4 ? 2.0 * truncation_bound(mu, 1.0, 4) : 0.0;
    for (int n = 0; n <= steps; ++n) {
        OrbitComparison row;
        row.n = n;
        row.direct = direct[static_cast<std::size_t>(n)];
        row.series = n == 0 ? x0 : series_predict(series, x0, n, branch);
        row.closed_approx = closed_approx_xn(x0, mu, n, branch);
        row.abs_error = std::abs(row.series - row.direct);
        report.steps.push_back(row);
    }
    return report;
}

QuasiLinearityReport quasi_linearity_probe(double mu, int max_k, double x_lo, double x_hi,
                                           std::size_t grid_points, Branch branch) {
    require_mu(mu);
    if (grid_points < 3 || !(x_hi > x_lo) || max_k < 1) {
        throw ContractViolation("quasi_linearity_probe: need >= 3 grid points, x_hi > x_lo, max_k >= 1");
    }
    radicand(x_lo, mu);
    radicand(x_hi, mu);

    std::vector<double> xs(grid_points);
    std::vector<double> base(grid_points);
    for (std::size_t g = 0; g < grid_points; ++g) {
        xs[g] = x_lo + (x_hi - x_lo) * static_cast<double>(g) / static_cast<double>(grid_points - 1);
        base[g] = 1.0 + sign(branch) * std::sqrt(radicand(xs[g], mu));
    }

    QuasiLinearityReport report{mu, x_lo, x_hi, {}};
    std::vector<double> partial(grid_points, 0.0);
    std::vector<double> power(grid_points, 1.0);
    const double n = static_cast<double>(grid_points);
    for (int k = 1; k <= max_k; ++k) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        for (std::size_t g = 0; g < grid_points; ++g) {
            power[g] *= base[g];
            partial[g] += power[g];
            sx += xs[g];
            sy += partial[g];
            sxx += xs[g] * xs[g];
            sxy += xs[g] * partial[g];
            syy += partial[g] * partial[g];
        }
        const double cov = sxy - sx * sy / n;
        const double vx = sxx - sx * sx / n;
        const double vy = syy - sy * sy / n;
        report.r_squared.push_back(vy > 0.0 ? cov * cov / (vx * vy) : 1.0);
    }
    return report;
}

}  // namespace ctx
