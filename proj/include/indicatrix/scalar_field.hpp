#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "indicatrix/jet.hpp"

namespace indicatrix {

/// A scalar function of `arity` coordinates, evaluable on jets.
struct ScalarField {
  using Evaluator = std::function<JetD(std::span<const JetD>)>;

  int arity = 0;
  Evaluator evaluate;

  JetD operator()(std::span<const JetD> args) const { return evaluate(args); }

  double at(std::span<const double> point) const {
    auto seeds = seed_variables(point, 0);
    return evaluate(seeds).value();
  }
};

/// True partial derivative d^|idx| f / dz^idx at `point`. The jet order is
/// exactly |idx|.
inline double partial(const ScalarField& f, const MultiIndex& idx, std::span<const double> point) {
  if (static_cast<int>(idx.size()) != f.arity || static_cast<int>(point.size()) != f.arity)
    throw OrderError("partial: multi-index / point arity mismatch");
  auto seeds = seed_variables(point, degree(idx));
  return f(seeds).partial(idx);
}

/// Same as partial() but generic over the scalar type, so the result can
/// itself be a jet (nested differentiation). `f` must be callable on a
/// std::vector<Jet<T>>.
template <class T, class F>
T partial_generic(F&& f, const MultiIndex& idx, std::span<const T> point) {
  auto seeds = seed_variables<T>(point, degree(idx));
  return std::forward<F>(f)(seeds).partial(idx);
}

}  // namespace indicatrix
