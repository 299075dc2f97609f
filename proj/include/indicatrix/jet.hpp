#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet<T> of order K in n variables stores the raw Taylor coefficients
//   f(z0 + h) = sum_{|alpha| <= K} c_alpha h^alpha
// in a dense graded-lexicographic table. Raw coefficients are stored; the
// true partial derivative is c_alpha * alpha!. Coefficients of degree <= k
// form a prefix of the table, so truncation is a resize.
//
// The coefficient type T may itself be a Jet, which gives nested jets. A jet
// without a layout is a plain constant and promotes against any shape.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "indicatrix/error.hpp"

namespace indicatrix {

using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

inline double multi_factorial(const MultiIndex& alpha) {
  double r = 1.0;
  for (int a : alpha) {
    for (int k = 2; k <= a; ++k) r *= k;
  }
  return r;
}

inline std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

/// Immutable monomial table for a (nvars, order) pair, shared by all jets of
/// that shape.
class JetLayout {
 public:
  struct Product {
    std::uint32_t rhs;
    std::uint32_t out;
  };
  struct DerivativeTerm {
    std::uint32_t src;  // index in this layout
    std::uint32_t dst;  // index in the order-1 layout
    double factor;
  };

  static std::shared_ptr<const JetLayout> get(int nvars, int order) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot = std::shared_ptr<const JetLayout>(new JetLayout(nvars, order));
    return slot;
  }

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return monomials_.size(); }
  const MultiIndex& monomial(std::size_t i) const { return monomials_[i]; }
  int monomial_degree(std::size_t i) const { return degrees_[i]; }

  /// Number of monomials of total degree <= k.
  std::size_t prefix_size(int k) const { return binomial(nvars_ + k, k); }

  std::size_t index_of(const MultiIndex& alpha) const {
    auto it = index_.find(alpha);
    if (it == index_.end()) throw OrderError("multi-index not representable at jet order " + std::to_string(order_));
    return it->second;
  }

  /// Products grouped by left operand: for lhs i, entries
  /// products_[row_start_[i] .. row_start_[i+1]).
  std::span<const Product> products_of(std::size_t lhs) const {
    return {products_.data() + row_start_[lhs], products_.data() + row_start_[lhs + 1]};
  }

  const std::vector<DerivativeTerm>& derivative_terms(int var) const { return derivative_[var]; }

 private:
  JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
    if (nvars < 0 || order < 0) throw OrderError("negative jet shape");
    MultiIndex alpha(nvars, 0);
    for (int d = 0; d <= order; ++d) enumerate(alpha, 0, d);
    for (std::size_t i = 0; i < monomials_.size(); ++i) {
      index_[monomials_[i]] = i;
      degrees_.push_back(degree(monomials_[i]));
    }
    row_start_.push_back(0);
    for (std::size_t i = 0; i < monomials_.size(); ++i) {
      for (std::size_t j = 0; j < monomials_.size(); ++j) {
        if (degrees_[i] + degrees_[j] > order) continue;
        MultiIndex sum = monomials_[i];
        for (int v = 0; v < nvars; ++v) sum[v] += monomials_[j][v];
        products_.push_back({static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(index_.at(sum))});
      }
      row_start_.push_back(products_.size());
    }
    derivative_.resize(nvars);
    for (std::size_t i = 0; i < monomials_.size(); ++i) {
      for (int v = 0; v < nvars; ++v) {
        if (monomials_[i][v] == 0) continue;
        MultiIndex lower = monomials_[i];
        lower[v] -= 1;
        // graded prefix: the index in the order-1 layout equals the index here
        derivative_[v].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(index_.at(lower)),
                                  static_cast<double>(monomials_[i][v])});
      }
    }
  }

  // Lexicographic within a degree, first variable's exponent descending.
  void enumerate(MultiIndex& alpha, int var, int remaining) {
    if (var == nvars_ - 1 || nvars_ == 0) {
      if (nvars_ == 0) {
        if (remaining == 0) monomials_.push_back(alpha);
        return;
      }
      alpha[var] = remaining;
      monomials_.push_back(alpha);
      alpha[var] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      alpha[var] = e;
      enumerate(alpha, var + 1, remaining - e);
    }
    alpha[var] = 0;
  }

  int nvars_;
  int order_;
  std::vector<MultiIndex> monomials_;
  std::vector<int> degrees_;
  std::map<MultiIndex, std::size_t> index_;
  std::vector<Product> products_;
  std::vector<std::size_t> row_start_;
  std::vector<std::vector<DerivativeTerm>> derivative_;
};

template <class T>
class Jet;

namespace detail {
template <class T>
struct is_jet : std::false_type {};
template <class T>
struct is_jet<Jet<T>> : std::true_type {};
}  // namespace detail

/// Innermost real value of a possibly nested scalar.
inline double scalar_value(double v) { return v; }

template <class T>
class Jet {
 public:
  using Scalar = T;

  /// The constant zero, shape-free.
  Jet() : coeffs_(1, T(0.0)) {}
  /// Shape-free constant.
  Jet(double value) : coeffs_(1, T(value)) {}  // NOLINT(google-explicit-constructor)
  template <class U = T, class = std::enable_if_t<detail::is_jet<U>::value>>
  Jet(const T& value) : coeffs_(1, value) {}  // NOLINT(google-explicit-constructor)

  static Jet constant(std::shared_ptr<const JetLayout> layout, const T& value) {
    Jet j(std::move(layout));
    j.coeffs_[0] = value;
    return j;
  }

  static Jet variable(std::shared_ptr<const JetLayout> layout, int var, const T& value) {
    if (var < 0 || var >= layout->nvars()) throw OrderError("seed variable out of range");
    Jet j = constant(layout, value);
    if (layout->order() >= 1) j.coeffs_[1 + var] = T(1.0);
    return j;
  }

  bool has_shape() const { return static_cast<bool>(layout_); }
  const std::shared_ptr<const JetLayout>& layout() const { return layout_; }
  int nvars() const { return layout_ ? layout_->nvars() : 0; }
  /// Truncation order; shape-free constants are exact at every order.
  int order() const { return layout_ ? layout_->order() : kExactOrder; }

  const T& value() const { return coeffs_[0]; }
  const std::vector<T>& coeffs() const { return coeffs_; }

  /// Raw Taylor coefficient.
  T coeff(const MultiIndex& alpha) const {
    if (!layout_) return degree(alpha) == 0 ? coeffs_[0] : T(0.0);
    return coeffs_[layout_->index_of(alpha)];
  }

  /// True partial derivative d^|alpha| f / dz^alpha.
  T partial(const MultiIndex& alpha) const {
    if (layout_ && degree(alpha) > layout_->order())
      throw OrderError("partial of degree " + std::to_string(degree(alpha)) + " exceeds jet order " +
                       std::to_string(layout_->order()));
    return coeff(alpha) * multi_factorial(alpha);
  }

  /// Gradient entry d f / dz_var at the base point.
  T gradient(int var) const {
    if (!layout_) return T(0.0);
    if (layout_->order() < 1) throw OrderError("gradient of an order-0 jet");
    return coeffs_[1 + var];
  }

  /// Exact partial derivative as a jet one order lower.
  Jet derivative(int var) const {
    if (!layout_) return Jet();
    if (var < 0 || var >= layout_->nvars()) throw OrderError("derivative variable out of range");
    if (layout_->order() == 0) throw OrderError("derivative of an order-0 jet exceeds truncation order");
    Jet out(JetLayout::get(layout_->nvars(), layout_->order() - 1));
    for (const auto& t : layout_->derivative_terms(var)) out.coeffs_[t.dst] += coeffs_[t.src] * t.factor;
    return out;
  }

  Jet truncate(int order) const {
    if (!layout_) return *this;
    if (order > layout_->order())
      throw OrderError("cannot raise jet order from " + std::to_string(layout_->order()) + " to " +
                       std::to_string(order));
    if (order == layout_->order()) return *this;
    Jet out(JetLayout::get(layout_->nvars(), order));
    std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
    return out;
  }

  Jet operator-() const {
    Jet out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
  }

  Jet& operator+=(const Jet& b) { return *this = *this + b; }
  Jet& operator-=(const Jet& b) { return *this = *this - b; }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }
  Jet& operator/=(const Jet& b) { return *this = *this / b; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    if (!b.layout_) return a.plus_constant(b.coeffs_[0]);
    if (!a.layout_) return b.plus_constant(a.coeffs_[0]);
    check_shape(a, b, "add");
    Jet out = a;
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += b.coeffs_[i];
    return out;
  }

  friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    if (!b.layout_) return a.scaled(b.coeffs_[0]);
    if (!a.layout_) return b.scaled(a.coeffs_[0]);
    check_shape(a, b, "mul");
    Jet out(a.layout_);
    const auto& layout = *a.layout_;
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (is_zero(a.coeffs_[i])) continue;
      for (const auto& p : layout.products_of(i)) out.coeffs_[p.out] += a.coeffs_[i] * b.coeffs_[p.rhs];
    }
    return out;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    if (!b.layout_) {
      if (scalar_value(b.coeffs_[0]) == 0.0) throw DomainError("div", 0.0);
      return a.scaled(T(1.0) / b.coeffs_[0]);
    }
    if (a.layout_) check_shape(a, b, "div");
    return a * reciprocal(b);
  }

  friend Jet operator+(const Jet& a, double s) { return a.plus_constant(T(s)); }
  friend Jet operator+(double s, const Jet& a) { return a.plus_constant(T(s)); }
  friend Jet operator-(const Jet& a, double s) { return a.plus_constant(T(-s)); }
  friend Jet operator-(double s, const Jet& a) { return (-a).plus_constant(T(s)); }
  friend Jet operator*(const Jet& a, double s) { return a.scaled(T(s)); }
  friend Jet operator*(double s, const Jet& a) { return a.scaled(T(s)); }
  friend Jet operator/(const Jet& a, double s) {
    if (s == 0.0) throw DomainError("div", 0.0);
    return a.scaled(T(1.0 / s));
  }
  friend Jet operator/(double s, const Jet& a) { return Jet(s) / a; }

  /// f(a) for a univariate f given its Taylor coefficients f^(k)(a0)/k! at
  /// the value a0 of this jet, k = 0..order.
  Jet compose(const std::vector<T>& series) const {
    if (!layout_) return Jet(series[0]);
    Jet h = *this;
    h.coeffs_[0] = T(0.0);
    const int K = layout_->order();
    Jet r = constant(layout_, series[K]);
    for (int k = K - 1; k >= 0; --k) r = (r * h).plus_constant(series[k]);
    return r;
  }

  friend Jet reciprocal(const Jet& a) {
    const double v = scalar_value(a.value());
    if (v == 0.0) throw DomainError("div", v);
    const int K = a.series_order();
    std::vector<T> s(K + 1);
    T inv = T(1.0) / a.value();
    T p = inv;
    for (int k = 0; k <= K; ++k) {
      s[k] = (k % 2 == 0) ? p : -p;
      p = p * inv;
    }
    return a.compose(s);
  }

  friend Jet exp(const Jet& a) {
    using std::exp;
    const int K = a.series_order();
    std::vector<T> s(K + 1);
    T e = exp(a.value());
    double fact = 1.0;
    for (int k = 0; k <= K; ++k) {
      if (k > 0) fact *= k;
      s[k] = e * (1.0 / fact);
    }
    return a.compose(s);
  }

  friend Jet log(const Jet& a) {
    using std::log;
    const double v = scalar_value(a.value());
    if (!(v > 0.0)) throw DomainError("log", v);
    const int K = a.series_order();
    std::vector<T> s(K + 1);
    s[0] = log(a.value());
    T inv = T(1.0) / a.value();
    T p = inv;
    for (int k = 1; k <= K; ++k) {
      s[k] = p * ((k % 2 == 1 ? 1.0 : -1.0) / k);
      p = p * inv;
    }
    return a.compose(s);
  }

  /// a^p for a real constant p. Non-integer p needs a positive base.
  friend Jet pow(const Jet& a, double p) {
    using std::pow;
    const double v = scalar_value(a.value());
    const bool integral = p == std::floor(p);
    if (!integral && !(v > 0.0)) throw DomainError("pow", v);
    if (integral && p < 0.0 && v == 0.0) throw DomainError("pow", v);
    if (integral && p >= 0.0) return integer_power(a, static_cast<int>(p));
    const int K = a.series_order();
    std::vector<T> s(K + 1);
    double binom = 1.0;
    for (int k = 0; k <= K; ++k) {
      if (k > 0) binom *= (p - (k - 1)) / k;
      s[k] = pow(a.value(), p - k) * binom;
    }
    return a.compose(s);
  }

  friend Jet sqrt(const Jet& a) {
    using std::sqrt;
    const double v = scalar_value(a.value());
    if (!(v > 0.0)) throw DomainError("sqrt", v);
    const int K = a.series_order();
    std::vector<T> s(K + 1);
    T root = sqrt(a.value());
    T inv = T(1.0) / a.value();
    T p = root;
    double binom = 1.0;
    for (int k = 0; k <= K; ++k) {
      if (k > 0) {
        binom *= (0.5 - (k - 1)) / k;
        p = p * inv;
      }
      s[k] = p * binom;
    }
    return a.compose(s);
  }

  friend Jet sin(const Jet& a) { return a.trig(false); }
  friend Jet cos(const Jet& a) { return a.trig(true); }

 private:
  static constexpr int kExactOrder = 1 << 20;

  explicit Jet(std::shared_ptr<const JetLayout> layout)
      : layout_(std::move(layout)), coeffs_(layout_->size(), T(0.0)) {}

  int series_order() const { return layout_ ? layout_->order() : 0; }

  static bool is_zero(const T& v) {
    if constexpr (std::is_same_v<T, double>) {
      return v == 0.0;
    } else {
      return false;
    }
  }

  static void check_shape(const Jet& a, const Jet& b, const char* op) {
    if (a.layout_ != b.layout_)
      throw OrderError(std::string("jet ") + op + ": mismatched shapes (nvars " + std::to_string(a.nvars()) +
                       "/" + std::to_string(b.nvars()) + ", order " + std::to_string(a.order()) + "/" +
                       std::to_string(b.order()) + ")");
  }

  Jet plus_constant(const T& s) const {
    Jet out = *this;
    out.coeffs_[0] += s;
    return out;
  }

  Jet scaled(const T& s) const {
    Jet out = *this;
    for (auto& c : out.coeffs_) c = c * s;
    return out;
  }

  static Jet integer_power(const Jet& a, int p) {
    Jet r = a.layout_ ? constant(a.layout_, T(1.0)) : Jet(1.0);
    Jet base = a;
    while (p > 0) {
      if (p & 1) r = r * base;
      p >>= 1;
      if (p) base = base * base;
    }
    return r;
  }

  Jet trig(bool cosine) const {
    using std::cos;
    using std::sin;
    const int K = series_order();
    std::vector<T> s(K + 1);
    const T sv = sin(value());
    const T cv = cos(value());
    // derivatives of sin cycle: sin, cos, -sin, -cos
    const T cycle_sin[4] = {sv, cv, -sv, -cv};
    const T cycle_cos[4] = {cv, -sv, -cv, sv};
    double fact = 1.0;
    for (int k = 0; k <= K; ++k) {
      if (k > 0) fact *= k;
      s[k] = (cosine ? cycle_cos[k % 4] : cycle_sin[k % 4]) * (1.0 / fact);
    }
    return compose(s);
  }

  std::shared_ptr<const JetLayout> layout_;
  std::vector<T> coeffs_;
};

template <class T>
double scalar_value(const Jet<T>& j) {
  return scalar_value(j.value());
}

using JetD = Jet<double>;

/// One jet per coordinate: value = point component, gradient = unit vector.
template <class T>
std::vector<Jet<T>> seed_variables(std::span<const T> point, int order) {
  if (order < 0) throw OrderError("negative jet order");
  auto layout = JetLayout::get(static_cast<int>(point.size()), order);
  std::vector<Jet<T>> out;
  out.reserve(point.size());
  for (std::size_t v = 0; v < point.size(); ++v) out.push_back(Jet<T>::variable(layout, static_cast<int>(v), point[v]));
  return out;
}

inline std::vector<JetD> seed_variables(std::span<const double> point, int order) {
  return seed_variables<double>(point, order);
}

}  // namespace indicatrix
