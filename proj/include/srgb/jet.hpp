#pragma once

// Truncated multivariate Taylor polynomials ("jets").
//
// A Jet<NV, K> stores the Taylor coefficients c_m of a smooth function of NV
// variables about a base point, for every multi-index m with |m| <= K:
//
//     f(p + d) = sum_m c_m d^m + O(|d|^{K+1}),   c_m = (d^m f)(p) / m!
//
// Arithmetic is exact up to the truncation order. Differentiating a jet
// lowers the number of valid orders by one; callers track how many orders
// of a derived quantity remain meaningful.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

#include <Eigen/Core>

namespace srgb {

constexpr int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

template <int NV, int K>
struct JetLayout {
  static constexpr int kSize = binomial(NV + K, K);
  using Exponent = std::array<int, NV>;

  std::array<Exponent, kSize> exps{};
  std::array<int, kSize> degree{};

  constexpr JetLayout() {
    int n = 0;
    for (int d = 0; d <= K; ++d) {
      Exponent e{};
      enumerate(d, 0, e, n);
    }
  }

  constexpr int index(const Exponent& e) const {
    for (int i = 0; i < kSize; ++i) {
      bool same = true;
      for (int v = 0; v < NV; ++v) same = same && exps[i][v] == e[v];
      if (same) return i;
    }
    return -1;
  }

 private:
  constexpr void enumerate(int remaining, int var, Exponent& e, int& n) {
    if (var == NV - 1) {
      e[var] = remaining;
      exps[n] = e;
      degree[n] = sumOf(e);
      ++n;
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[var] = k;
      enumerate(remaining - k, var + 1, e, n);
    }
  }
  static constexpr int sumOf(const Exponent& e) {
    int s = 0;
    for (int v : e) s += v;
    return s;
  }
};

namespace detail {

template <int NV, int K>
inline constexpr JetLayout<NV, K> kLayout{};

template <int NV, int K>
constexpr int productTermCount() {
  const auto& L = kLayout<NV, K>;
  int n = 0;
  for (int i = 0; i < L.kSize; ++i)
    for (int j = 0; j < L.kSize; ++j)
      if (L.degree[i] + L.degree[j] <= K) ++n;
  return n;
}

struct ProductTerm {
  std::uint8_t a, b, out;
};

template <int NV, int K>
constexpr auto makeProductTable() {
  const auto& L = kLayout<NV, K>;
  std::array<ProductTerm, productTermCount<NV, K>()> t{};
  int n = 0;
  for (int i = 0; i < L.kSize; ++i)
    for (int j = 0; j < L.kSize; ++j)
      if (L.degree[i] + L.degree[j] <= K) {
        typename JetLayout<NV, K>::Exponent e{};
        for (int v = 0; v < NV; ++v) e[v] = L.exps[i][v] + L.exps[j][v];
        t[n++] = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                  static_cast<std::uint8_t>(L.index(e))};
      }
  return t;
}

template <int NV, int K>
inline constexpr auto kProducts = makeProductTable<NV, K>();

// For each variable v and output monomial m (|m| < K): source index of
// m + e_v and the factor (m_v + 1).
template <int NV, int K>
struct DerivativeTable {
  std::array<std::array<int, JetLayout<NV, K>::kSize>, NV> source{};
  std::array<std::array<double, JetLayout<NV, K>::kSize>, NV> factor{};
  constexpr DerivativeTable() {
    const auto& L = kLayout<NV, K>;
    for (int v = 0; v < NV; ++v)
      for (int m = 0; m < L.kSize; ++m) {
        if (L.degree[m] >= K) {
          source[v][m] = -1;
          factor[v][m] = 0.0;
          continue;
        }
        auto e = L.exps[m];
        e[v] += 1;
        source[v][m] = L.index(e);
        factor[v][m] = static_cast<double>(e[v]);
      }
  }
};

template <int NV, int K>
inline constexpr DerivativeTable<NV, K> kDerivatives{};

}  // namespace detail

template <int NV, int K>
class Jet {
 public:
  static constexpr int kVars = NV;
  static constexpr int kOrder = K;
  static constexpr int kSize = JetLayout<NV, K>::kSize;
  using Exponent = typename JetLayout<NV, K>::Exponent;

  Jet() { c_.fill(0.0); }
  Jet(double value) {  // NOLINT: implicit constant embedding
    c_.fill(0.0);
    c_[0] = value;
  }

  /// The coordinate function x_var about base value `base`.
  static Jet variable(int var, double base) {
    Jet j(base);
    if constexpr (K >= 1) j.c_[1 + var] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }
  const std::array<double, kSize>& coeffs() const { return c_; }

  /// Value of the first partial derivative with respect to `var`.
  double firstPartial(int var) const {
    if constexpr (K >= 1) return c_[1 + var];
    return 0.0;
  }

  /// Value of the mixed partial d^m f at the base point.
  double partial(const Exponent& m) const {
    const int i = detail::kLayout<NV, K>.index(m);
    if (i < 0) return 0.0;
    double f = 1.0;
    for (int v = 0; v < NV; ++v)
      for (int k = 2; k <= m[v]; ++k) f *= k;
    return f * c_[i];
  }

  /// Derivative jet with respect to `var`; valid to one order less.
  Jet d(int var) const {
    Jet r;
    const auto& T = detail::kDerivatives<NV, K>;
    for (int m = 0; m < kSize; ++m) {
      const int s = T.source[var][m];
      if (s >= 0) r.c_[m] = T.factor[var][m] * c_[s];
    }
    return r;
  }

  /// The jet with its constant term removed (nilpotent part).
  Jet increment() const {
    Jet r = *this;
    r.c_[0] = 0.0;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }
  Jet& operator/=(double s) { return *this *= (1.0 / s); }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (double& x : a.c_) x = -x;
    return a;
  }
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, double s) {
    a.c_[0] -= s;
    return a;
  }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (const auto& t : detail::kProducts<NV, K>) r.c_[t.out] += a.c_[t.a] * b.c_[t.b];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

  /// g(f) for a univariate g given its scaled derivatives g^(n)(f0)/n!.
  static Jet composeUnivariate(const Jet& f, const std::array<double, K + 1>& scaled) {
    const Jet h = f.increment();
    Jet r(scaled[K]);
    for (int n = K - 1; n >= 0; --n) r = r * h + scaled[n];
    return r;
  }

  friend Jet reciprocal(const Jet& f) {
    const double x = f.value();
    std::array<double, K + 1> s{};
    double p = 1.0 / x;
    for (int n = 0; n <= K; ++n) {
      s[n] = (n % 2 ? -p : p);
      p /= x;
    }
    return composeUnivariate(f, s);
  }

  friend Jet pow(const Jet& f, double e) {
    const double x = f.value();
    std::array<double, K + 1> s{};
    double binom = 1.0;
    for (int n = 0; n <= K; ++n) {
      s[n] = binom * std::pow(x, e - n);
      binom *= (e - n) / (n + 1);
    }
    return composeUnivariate(f, s);
  }
  friend Jet sqrt(const Jet& f) { return pow(f, 0.5); }

  friend Jet exp(const Jet& f) {
    const double ex = std::exp(f.value());
    std::array<double, K + 1> s{};
    double fact = 1.0;
    for (int n = 0; n <= K; ++n) {
      if (n > 0) fact *= n;
      s[n] = ex / fact;
    }
    return composeUnivariate(f, s);
  }
  friend Jet log(const Jet& f) {
    const double x = f.value();
    std::array<double, K + 1> s{};
    s[0] = std::log(x);
    double p = 1.0;
    for (int n = 1; n <= K; ++n) {
      p /= x;
      s[n] = (n % 2 ? 1.0 : -1.0) * p / n;
    }
    return composeUnivariate(f, s);
  }
  friend Jet sin(const Jet& f) {
    const double sx = std::sin(f.value()), cx = std::cos(f.value());
    const std::array<double, 4> cyc{sx, cx, -sx, -cx};
    std::array<double, K + 1> s{};
    double fact = 1.0;
    for (int n = 0; n <= K; ++n) {
      if (n > 0) fact *= n;
      s[n] = cyc[n % 4] / fact;
    }
    return composeUnivariate(f, s);
  }
  friend Jet cos(const Jet& f) {
    const double sx = std::sin(f.value()), cx = std::cos(f.value());
    const std::array<double, 4> cyc{cx, -sx, -cx, sx};
    std::array<double, K + 1> s{};
    double fact = 1.0;
    for (int n = 0; n <= K; ++n) {
      if (n > 0) fact *= n;
      s[n] = cyc[n % 4] / fact;
    }
    return composeUnivariate(f, s);
  }
  friend Jet atan(const Jet& f) {
    // Univariate Taylor coefficients of atan come from integrating those of
    // 1/(1+x^2), computed with a one-variable jet.
    const double x = f.value();
    const Jet<1, K> t = Jet<1, K>::variable(0, x);
    const Jet<1, K> g = reciprocal(1.0 + t * t);
    std::array<double, K + 1> s{};
    s[0] = std::atan(x);
    for (int n = 1; n <= K; ++n) s[n] = g[n - 1] / n;
    return composeUnivariate(f, s);
  }

  friend Jet integerPow(const Jet& f, int n) {
    if (n < 0) return reciprocal(integerPow(f, -n));
    Jet r(1.0), b = f;
    while (n) {
      if (n & 1) r = r * b;
      n >>= 1;
      if (n) b = b * b;
    }
    return r;
  }

  friend std::ostream& operator<<(std::ostream& os, const Jet& j) {
    os << "Jet[" << j.c_[0];
    for (int i = 1; i < kSize; ++i) os << ", " << j.c_[i];
    return os << "]";
  }

 private:
  std::array<double, kSize> c_;
};

inline double valueOf(double x) { return x; }
template <int NV, int K>
double valueOf(const Jet<NV, K>& j) {
  return j.value();
}

inline double integerPow(double x, int n) {
  double r = 1.0, b = n < 0 ? 1.0 / x : x;
  for (unsigned k = static_cast<unsigned>(n < 0 ? -n : n); k; k >>= 1) {
    if (k & 1) r *= b;
    b *= b;
  }
  return r;
}

/// Re-expresses a jet at another order: truncates, or pads with zeros. The
/// graded layout makes lower-order coefficients a common prefix.
template <int K2, int NV, int K>
Jet<NV, K2> withOrder(const Jet<NV, K>& f) {
  Jet<NV, K2> r;
  constexpr int n = std::min(Jet<NV, K>::kSize, Jet<NV, K2>::kSize);
  for (int i = 0; i < n; ++i) r[i] = f[i];
  return r;
}

/// Evaluates the Taylor polynomial of `f` (expanded about p) at p + delta,
/// where each delta component is a jet in another set of variables with zero
/// constant term. This is the chain rule for jets.
template <int NV, int NW, int K, std::size_t N>
Jet<NW, K> compose(const Jet<NV, K>& f, const std::array<Jet<NW, K>, N>& delta) {
  static_assert(N == NV, "one increment per variable");
  std::array<std::array<Jet<NW, K>, K + 1>, NV> powers;
  for (int v = 0; v < NV; ++v) {
    powers[v][0] = Jet<NW, K>(1.0);
    for (int k = 1; k <= K; ++k) powers[v][k] = powers[v][k - 1] * delta[v];
  }
  const auto& L = detail::kLayout<NV, K>;
  Jet<NW, K> r(f[0]);
  for (int m = 1; m < L.kSize; ++m) {
    if (f[m] == 0.0) continue;
    Jet<NW, K> term(f[m]);
    for (int v = 0; v < NV; ++v)
      if (L.exps[m][v] > 0) term = term * powers[v][L.exps[m][v]];
    r += term;
  }
  return r;
}

}  // namespace srgb

namespace Eigen {

template <int NV, int K>
struct NumTraits<srgb::Jet<NV, K>> : GenericNumTraits<srgb::Jet<NV, K>> {
  using Real = srgb::Jet<NV, K>;
  using NonInteger = Real;
  using Nested = Real;
  using Literal = Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = srgb::Jet<NV, K>::kSize,
    AddCost = srgb::Jet<NV, K>::kSize,
    MulCost = 3 * srgb::Jet<NV, K>::kSize
  };
  static Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static Real dummy_precision() { return Real(1e-12); }
  static Real highest() { return Real(std::numeric_limits<double>::max()); }
  static Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
  static int digits10() { return 15; }
};

template <int NV, int K, typename Op>
struct ScalarBinaryOpTraits<srgb::Jet<NV, K>, double, Op> {
  using ReturnType = srgb::Jet<NV, K>;
};
template <int NV, int K, typename Op>
struct ScalarBinaryOpTraits<double, srgb::Jet<NV, K>, Op> {
  using ReturnType = srgb::Jet<NV, K>;
};

}  // namespace Eigen
