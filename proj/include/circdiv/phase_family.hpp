#pragma once

#include <array>
#include <string_view>

namespace circdiv {

enum class PhaseKind {
  reciprocal,     // 1/z
  shifted_plus,   // 1/(z + 1/4)
  shifted_minus,  // 1/(z - 1/4)
  quarter_minus,  // 1/(4z) - M/(4T)
  quarter_plus,   // 1/(4z) + M/(4T)
};

/// One of the five phase functions F on [1,2] that arise from the circle and
/// divisor recompositions, with analytic derivatives up to order 3.
class PhaseFamily {
 public:
  static PhaseFamily reciprocal();
  static PhaseFamily shifted_plus();
  static PhaseFamily shifted_minus();
  static PhaseFamily quarter_minus(double M, double T);
  static PhaseFamily quarter_plus(double M, double T);
  /// All five families; the quarter families use the given M/T offset.
  static std::array<PhaseFamily, 5> all(double M, double T);

  PhaseKind kind() const { return kind_; }
  std::string_view name() const;

  double operator()(double z) const { return derivative(0, z); }
  /// F^{(order)}(z) for order in 0..3.
  double derivative(int order, double z) const;

  double offset() const { return offset_; }

 private:
  PhaseFamily(PhaseKind kind, double shift, bool quarter, double offset)
      : kind_(kind), shift_(shift), quarter_(quarter), offset_(offset) {}

  // F(z) = 1/(z + shift), or 1/(4z) + offset for the quarter families
  PhaseKind kind_;
  double shift_;
  bool quarter_;
  double offset_;
};

}  // namespace circdiv
