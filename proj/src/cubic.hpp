#pragma once

#include <vector>

namespace clusterkin {

/// Real roots of c3*x^3 + c2*x^2 + c1*x + c0 = 0, ascending, each polished
/// by Newton steps while the residual falls. Falls back to the quadratic or linear formula when
/// c3 (then c2) is exactly zero; returns an empty list for a nonzero constant
/// and for the zero polynomial.
///
/// Three real roots use the trigonometric form of the depressed cubic; a
/// single real root uses Cardano's radicals with cancellation-free
/// combination. Double roots are reported twice.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0);

/// Real roots of c2*x^2 + c1*x + c0 = 0, ascending (stable formula).
std::vector<double> real_quadratic_roots(double c2, double c1, double c0);

}  // namespace clusterkin
