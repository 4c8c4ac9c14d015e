#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mirec/errors.hpp"
#include "mirec/poly.hpp"
#include "mirec/rational.hpp"

namespace mirec {

/// Incremental Newton interpolation over exact rationals with duplicate-node
/// detection. Nodes can be added one at a time; the divided-difference
/// coefficients are kept up to date, and the interpolant can be expanded to
/// the power basis at any point.
class NewtonInterpolator {
 public:
  /// Adds the node (x, y). Throws DuplicateNode on a repeated abscissa.
  void add_node(const Rational& x, const Rational& y) {
    for (const auto& prev : xs_)
      if (prev == x) throw DuplicateNode("repeated abscissa " + x.str());
    // Extend the bottom diagonal of the divided-difference table.
    std::vector<Rational> row(xs_.size() + 1);
    row[0] = y;
    for (std::size_t j = 1; j < row.size(); ++j) {
      const Rational dx = x - xs_[xs_.size() - j];
      row[j] = (row[j - 1] - diag_[j - 1]) / dx;
    }
    xs_.push_back(x);
    diag_ = std::move(row);
    top_.push_back(diag_.back());
  }

  std::size_t size() const { return xs_.size(); }

  /// Evaluates the current interpolant without expanding it.
  Rational eval(const Rational& x) const {
    if (xs_.empty()) return Rational(0);
    Rational acc = top_.back();
    for (std::size_t i = top_.size() - 1; i-- > 0;)
      acc = acc * (x - xs_[i]) + top_[i];
    return acc;
  }

  /// Expands the Newton form to the power basis.
  Poly polynomial() const {
    Poly acc;
    if (xs_.empty()) return acc;
    for (std::size_t i = top_.size(); i-- > 0;) {
      // acc = acc * (x - x_i) + c_i
      acc = acc * Poly({-xs_[i], Rational(1)}, 0) + Poly(top_[i]);
    }
    return acc;
  }

 private:
  std::vector<Rational> xs_;
  std::vector<Rational> top_;   // Newton coefficients c_0, c_1, ...
  std::vector<Rational> diag_;  // newest divided-difference diagonal
};

/// One-shot interpolation through the given (x, y) points.
inline Poly interpolate(std::span<const std::pair<Rational, Rational>> pts) {
  NewtonInterpolator in;
  for (const auto& [x, y] : pts) in.add_node(x, y);
  return in.polynomial();
}

inline Poly interpolate(
    const std::vector<std::pair<Rational, Rational>>& pts) {
  return interpolate(std::span<const std::pair<Rational, Rational>>(pts));
}

}  // namespace mirec
