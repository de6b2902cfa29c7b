#pragma once

#include <span>

namespace bnn {

double mean(std::span<const double> xs);

// population standard deviation (divides by n)
double stdev(std::span<const double> xs);

// Spearman rank correlation with average ranks for ties. Undefined for a
// constant sequence; returns 1.0 there, which suits the monotone-trend
// checks this backs (a flat response is trivially non-decreasing).
double spearman(std::span<const double> x, std::span<const double> y);

} // namespace bnn
