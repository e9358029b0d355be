#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace qsb {

// Neumaier-compensated sum.  For the weight sums that drive termination
// decisions we need every sum to be exact to within one ulp of the true
// value, independent of m.
double neumaier_sum(std::span<const double> xs);

// Running form of the same thing, for sums built incrementally.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Regularized incomplete gamma functions, series + continued fraction.
double gamma_p(double a, double x); // P(a,x)
double gamma_q(double a, double x); // Q(a,x) = 1 - P(a,x)

// Survival function of the chi-square distribution with df degrees of
// freedom: Pr[X > x].
double chi_square_sf(double x, double df);

// 95% normal-approximation half-width for a binomial proportion estimate.
double binomial_halfwidth95(double p_hat, std::size_t n);

// Ordinary least squares y = a + b x.
struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double slope_ci95 = 0.0; // t-quantile * stderr, df = n - 2
    std::size_t n = 0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> xs); // by value: sorts its copy

} // namespace qsb
