#pragma once

// Eigen glue: jets as an Eigen scalar, and the dense aliases used across the
// library.

#include <Eigen/Dense>
#include <vector>

#include "indicatrix/jet.hpp"

namespace Eigen {

template <class T>
struct NumTraits<indicatrix::Jet<T>> : GenericNumTraits<indicatrix::Jet<T>> {
  using Real = indicatrix::Jet<T>;
  using NonInteger = indicatrix::Jet<T>;
  using Literal = double;
  using Nested = indicatrix::Jet<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 64,
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return std::numeric_limits<double>::digits10; }
};

template <class T, typename BinaryOp>
struct ScalarBinaryOpTraits<indicatrix::Jet<T>, double, BinaryOp> {
  using ReturnType = indicatrix::Jet<T>;
};
template <class T, typename BinaryOp>
struct ScalarBinaryOpTraits<double, indicatrix::Jet<T>, BinaryOp> {
  using ReturnType = indicatrix::Jet<T>;
};

}  // namespace Eigen

namespace indicatrix {

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

using Eigen::MatrixXd;
using Eigen::VectorXd;
using VecJ = Vec<JetD>;
using MatJ = Mat<JetD>;

/// Base-point values of a jet matrix.
template <class Derived>
MatrixXd values(const Eigen::MatrixBase<Derived>& m) {
  MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = scalar_value(m(i, j).value());
  return out;
}

/// Gradient d m / dz_var of every entry.
template <class Derived>
MatrixXd gradients(const Eigen::MatrixBase<Derived>& m, int var) {
  MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).gradient(var);
  return out;
}

/// Entry-wise truncation.
template <class S>
Mat<S> truncate(const Mat<S>& m, int order) {
  return m.unaryExpr([order](const S& s) { return s.truncate(order); });
}
template <class S>
Vec<S> truncate(const Vec<S>& v, int order) {
  return v.unaryExpr([order](const S& s) { return s.truncate(order); });
}

/// Entry-wise exact partial derivative (one order lower).
template <class S>
Mat<S> derivative(const Mat<S>& m, int var) {
  return m.unaryExpr([var](const S& s) { return s.derivative(var); });
}
template <class S>
Vec<S> derivative(const Vec<S>& v, int var) {
  return v.unaryExpr([var](const S& s) { return s.derivative(var); });
}

/// Product of jet matrices. Coefficient-based, since the blocked kernels
/// assume a scalar with ordered comparisons.
template <class A, class B>
auto mul(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using S = typename Eigen::ScalarBinaryOpTraits<typename A::Scalar, typename B::Scalar>::ReturnType;
  Mat<S> out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      S acc = S(0.0);
      for (Eigen::Index k = 0; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

/// Inverse of a jet matrix. Splits A = A0 + A1 with A1 nilpotent under
/// truncation, so A^-1 = sum_k (-A0^-1 A1)^k A0^-1 terminates after `order`
/// terms.
inline MatJ jet_inverse(const MatJ& a) {
  const MatrixXd a0 = values(a);
  Eigen::FullPivLU<MatrixXd> lu(a0);
  if (!lu.isInvertible()) throw GeometryError("jet_inverse: singular base value");
  const MatrixXd inv0 = lu.inverse();
  int order = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).has_shape()) {
      order = a(i).order();
      break;
    }
  }
  MatJ a1 = a;
  for (Eigen::Index i = 0; i < a1.size(); ++i) a1(i) = a1(i) - a0(i);
  const MatJ step = -mul(inv0, a1);
  MatJ term = inv0.cast<JetD>();
  MatJ sum = term;
  for (int k = 0; k < order; ++k) {
    term = mul(step, term);
    sum += term;
  }
  return sum;
}

/// Base-point values of a jet vector.
inline VectorXd values(const VecJ& v) {
  VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(i).value();
  return out;
}

}  // namespace indicatrix
