#include "circdiv/phase_family.hpp"

#include <cmath>

#include "circdiv/numeric.hpp"

namespace circdiv {

PhaseFamily PhaseFamily::reciprocal() { return {PhaseKind::reciprocal, 0.0, false, 0.0}; }
PhaseFamily PhaseFamily::shifted_plus() { return {PhaseKind::shifted_plus, 0.25, false, 0.0}; }
PhaseFamily PhaseFamily::shifted_minus() { return {PhaseKind::shifted_minus, -0.25, false, 0.0}; }

PhaseFamily PhaseFamily::quarter_minus(double M, double T) {
  if (!(T != 0.0)) throw DomainError("PhaseFamily: T must be non-zero");
  return {PhaseKind::quarter_minus, 0.0, true, -M / (4.0 * T)};
}

PhaseFamily PhaseFamily::quarter_plus(double M, double T) {
  if (!(T != 0.0)) throw DomainError("PhaseFamily: T must be non-zero");
  return {PhaseKind::quarter_plus, 0.0, true, M / (4.0 * T)};
}

std::array<PhaseFamily, 5> PhaseFamily::all(double M, double T) {
  return {reciprocal(), shifted_plus(), shifted_minus(), quarter_minus(M, T), quarter_plus(M, T)};
}

std::string_view PhaseFamily::name() const {
  switch (kind_) {
    case PhaseKind::reciprocal: return "1/z";
    case PhaseKind::shifted_plus: return "1/(z+1/4)";
    case PhaseKind::shifted_minus: return "1/(z-1/4)";
    case PhaseKind::quarter_minus: return "1/(4z)-M/(4T)";
    case PhaseKind::quarter_plus: return "1/(4z)+M/(4T)";
  }
  return "?";
}

double PhaseFamily::derivative(int order, double z) const {
  if (order < 0 || order > 3) throw DomainError("PhaseFamily: derivative order must be in 0..3");
  static constexpr double kFactorial[] = {1.0, 1.0, 2.0, 6.0};
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  if (quarter_) {
    const double v = sign * kFactorial[order] / (4.0 * std::pow(z, order + 1));
    return order == 0 ? v + offset_ : v;
  }
  return sign * kFactorial[order] / std::pow(z + shift_, order + 1);
}

}  // namespace circdiv
