// Test-side reference implementations, kept independent of the library code
// they check: a power-series incomplete beta (the library uses a continued
// fraction), a long-double term-by-term entropy, rank-based Spearman, and a
// two-pass mean/std.
#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace oracles {

/// Regularized incomplete beta via the ascending power series
/// I_x(a,b) = x^a (1-x)^b / (a B(a,b)) * [1 + sum_n B(a+1,n+1)/B(a+b,n+1) x^(n+1)],
/// with the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) to keep x small.
double seriesRegularizedIncompleteBeta(double a, double b, double x);

/// Upper F tail computed from the series form above.
double seriesFUpperTail(double f, double df1, double df2);

/// -sum p log2 p accumulated in long double, term by term.
double directEntropyBits(std::span<const double> p);

/// Spearman rank correlation (average ranks on ties).
double spearmanRho(std::span<const double> xs, std::span<const double> ys);

/// Two-pass mean and sample (n-1) standard deviation.
std::pair<double, double> twoPassMeanStd(std::span<const double> values);

} // namespace oracles
