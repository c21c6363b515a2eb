#include "srgb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace srgb {

const std::pair<std::vector<double>, std::vector<double>>& gaussLegendre(int n) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

namespace {

double ruleOn(const std::function<double(double)>& f, double a, double b, int order, long& nodes) {
  const auto& [x, w] = gaussLegendre(order);
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < order; ++i) s += w[i] * f(m + h * x[i]);
  nodes += order;
  return s * h;
}

struct Cell {
  Eigen::Vector2d lo, hi;
};

double ruleOn(const SurfaceIntegrand& f, const Cell& c, int order, long& nodes) {
  const auto& [x, w] = gaussLegendre(order);
  const Eigen::Vector2d h = 0.5 * (c.hi - c.lo), m = 0.5 * (c.hi + c.lo);
  double s = 0.0;
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) s += w[i] * w[j] * f(Eigen::Vector2d(m(0) + h(0) * x[i], m(1) + h(1) * x[j]));
  nodes += static_cast<long>(order) * order;
  return s * h(0) * h(1);
}

std::array<Cell, 4> quarters(const Cell& c) {
  const Eigen::Vector2d m = 0.5 * (c.lo + c.hi);
  return {Cell{c.lo, m}, Cell{{m(0), c.lo(1)}, {c.hi(0), m(1)}}, Cell{{c.lo(0), m(1)}, {m(0), c.hi(1)}},
          Cell{m, c.hi}};
}

void checkConvergence(bool exhausted, double residual, double tol) {
  if (exhausted && residual > 100.0 * tol)
    throw NonConvergent("quadrature depth exhausted with residual " + std::to_string(residual));
}

}  // namespace

QuadratureResult integrate1D(const std::function<double(double)>& f, double a, double b,
                             const QuadratureOptions& opts) {
  QuadratureResult r;
  if (a == b) return r;
  const int n0 = std::max(1, opts.initialCells);
  const double len = (b - a) / n0;
  std::vector<double> whole(n0);
  double scale = 0.0;
  for (int i = 0; i < n0; ++i) {
    whole[i] = ruleOn(f, a + i * len, a + (i + 1) * len, opts.order, r.nodes);
    scale += std::abs(whole[i]);
  }
  const double tolTotal = std::max(opts.rtol * scale, opts.atol);
  bool exhausted = false;
  struct Item {
    double lo, hi, value;
    int depth;
  };
  for (int i = 0; i < n0; ++i) {
    std::vector<Item> stack{{a + i * len, a + (i + 1) * len, whole[i], 0}};
    while (!stack.empty()) {
      const Item it = stack.back();
      stack.pop_back();
      const double mid = 0.5 * (it.lo + it.hi);
      const double left = ruleOn(f, it.lo, mid, opts.order, r.nodes);
      const double right = ruleOn(f, mid, it.hi, opts.order, r.nodes);
      const double diff = std::abs(left + right - it.value);
      const double tol = tolTotal * (it.hi - it.lo) / (b - a);
      if (diff <= tol || it.depth + 1 >= opts.maxDepth) {
        if (diff > tol) exhausted = true;
        r.value += left + right;
        r.error += diff;
      } else {
        stack.push_back({mid, it.hi, right, it.depth + 1});
        stack.push_back({it.lo, mid, left, it.depth + 1});
      }
    }
  }
  checkConvergence(exhausted, r.error, tolTotal);
  return r;
}

QuadratureResult integrateRectangle(const SurfaceIntegrand& f, const Eigen::Vector2d& lo, const Eigen::Vector2d& hi,
                                    const QuadratureOptions& opts) {
  QuadratureResult r;
  const double area = (hi(0) - lo(0)) * (hi(1) - lo(1));
  if (area == 0.0) return r;
  const int n0 = std::max(1, opts.initialCells);
  const Eigen::Vector2d step = (hi - lo) / n0;
  std::vector<Cell> cells;
  std::vector<double> whole;
  // Tolerance scale: sum of |cell integrals|, so integrals that cancel to
  // zero (the torus) are not driven to the absolute floor.
  double scale = 0.0;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j) {
      Cell c{lo + Eigen::Vector2d(i * step(0), j * step(1)), lo + Eigen::Vector2d((i + 1) * step(0), (j + 1) * step(1))};
      cells.push_back(c);
      whole.push_back(ruleOn(f, c, opts.order, r.nodes));
      scale += std::abs(whole.back());
    }
  const double tolTotal = std::max(opts.rtol * scale, opts.atol);
  bool exhausted = false;
  struct Item {
    Cell cell;
    double value;
    int depth;
  };
  for (std::size_t k = 0; k < cells.size(); ++k) {
    std::vector<Item> stack{{cells[k], whole[k], 0}};
    while (!stack.empty()) {
      const Item it = stack.back();
      stack.pop_back();
      const auto q = quarters(it.cell);
      std::array<double, 4> v{};
      double sum = 0.0;
      for (int i = 0; i < 4; ++i) sum += v[i] = ruleOn(f, q[i], opts.order, r.nodes);
      const double diff = std::abs(sum - it.value);
      const Eigen::Vector2d d = it.cell.hi - it.cell.lo;
      const double tol = tolTotal * d(0) * d(1) / area;
      if (diff <= tol || it.depth + 1 >= opts.maxDepth) {
        if (diff > tol) exhausted = true;
        r.value += sum;
        r.error += diff;
      } else {
        for (int i = 3; i >= 0; --i) stack.push_back({q[i], v[i], it.depth + 1});
      }
    }
  }
  checkConvergence(exhausted, r.error, tolTotal);
  return r;
}

namespace {

struct CapLayout {
  int axis = 0;
  double lowRadius = 0.0;
  double highRadius = 0.0;
};

CapLayout capLayout(const SurfacePatch& patch) {
  CapLayout c;
  if (patch.caps.empty()) return c;
  c.axis = patch.caps.front().axis;
  for (const Cap& cap : patch.caps) {
    if (cap.axis != c.axis) throw std::invalid_argument("caps of one patch must lie on a single axis");
    (cap.low ? c.lowRadius : c.highRadius) = cap.radius;
  }
  return c;
}

/// Richardson extrapolation to zero cap radius from I(r), I(r/2), I(r/4),
/// assuming I(h) = I0 + c1 h + c2 h^2.
double extrapolateCaps(const std::array<double, 3>& i, double tol, bool check) {
  const double d1 = i[1] - i[0], d2 = i[2] - i[1];
  if (check && std::abs(d2) > 0.75 * std::abs(d1) && std::abs(d2) > tol)
    throw NonConvergent("cap extrapolation does not settle: integrand not integrable at the characteristic set");
  return (8.0 * i[2] - 6.0 * i[1] + i[0]) / 3.0;
}

Eigen::Vector2d axisPoint(int axis, double along, double other) {
  return axis == 0 ? Eigen::Vector2d(along, other) : Eigen::Vector2d(other, along);
}

}  // namespace

QuadratureResult integrateSurface(const SurfaceIntegrand& f, const SurfacePatch& patch,
                                  const QuadratureOptions& opts) {
  const CapLayout caps = capLayout(patch);
  const int ax = caps.axis;
  Eigen::Vector2d lo = patch.lo, hi = patch.hi;
  lo(ax) += caps.lowRadius;
  hi(ax) -= caps.highRadius;
  QuadratureResult main = integrateRectangle(f, lo, hi, opts);
  if (caps.lowRadius == 0.0 && caps.highRadius == 0.0) return main;
  // Strips between radii r/4, r/2 and r at each capped end.
  std::array<double, 3> totals{main.value, main.value, main.value};
  long nodes = main.nodes;
  double error = main.error;
  for (int side = 0; side < 2; ++side) {
    const double r = side == 0 ? caps.lowRadius : caps.highRadius;
    if (r == 0.0) continue;
    for (int level = 1; level <= 2; ++level) {
      const double outer = r / (1 << (level - 1)), inner = r / (1 << level);
      Eigen::Vector2d slo = patch.lo, shi = patch.hi;
      if (side == 0) {
        slo(ax) = patch.lo(ax) + inner;
        shi(ax) = patch.lo(ax) + outer;
      } else {
        slo(ax) = patch.hi(ax) - outer;
        shi(ax) = patch.hi(ax) - inner;
      }
      const QuadratureResult s = integrateRectangle(f, slo, shi, opts);
      nodes += s.nodes;
      error += s.error;
      for (int k = level; k < 3; ++k) totals[k] += s.value;
    }
  }
  QuadratureResult out;
  const double tol = std::max(opts.rtol * std::abs(totals[2]), 100.0 * opts.atol);
  out.value = extrapolateCaps(totals, tol, true);
  out.error = error + std::abs(out.value - totals[2]);
  out.nodes = nodes;
  return out;
}

QuadratureResult integrateSurface(const SurfaceIntegrand& f, const std::vector<SurfacePatch>& patches,
                                  const QuadratureOptions& opts) {
  QuadratureResult total;
  for (const SurfacePatch& p : patches) {
    const QuadratureResult r = integrateSurface(f, p, opts);
    total.value += r.value;
    total.error += r.error;
    total.nodes += r.nodes;
  }
  return total;
}

std::vector<double> geometricLadder(double c0, int halvings) {
  std::vector<double> c;
  for (int k = 0; k <= halvings; ++k) c.push_back(c0 * std::ldexp(1.0, -k));
  return c;
}

namespace {

/// Region integrals along one inner line: for every ladder value and cap
/// level (radius r, r/2, r/4), split by the sign of a.
struct LineSums {
  // [ladder][level][sign: 0 plus, 1 minus]
  std::vector<std::array<std::array<double, 2>, 3>> v;
  long nodes = 0;
};

LineSums lineSums(const ContactStructure& cs, const SurfacePatch& patch, const CapLayout& caps,
                  const std::vector<double>& ladder, const FrameIntegrand& integrand, double other,
                  const QuadratureOptions& opts) {
  const int ax = caps.axis;
  LineSums out;
  out.v.assign(ladder.size(), {});
  const double L = patch.lo(ax), H = patch.hi(ax);
  const double s0 = L + caps.lowRadius / 4.0, s1 = H - caps.highRadius / 4.0;
  auto absA = [&](double t) {
    ++out.nodes;
    return std::abs(horizontalParameter(cs, patch, axisPoint(ax, t, other)));
  };

  // Fixed breakpoints: strip boundaries.
  std::vector<double> breaks{s0, s1};
  if (caps.lowRadius > 0) {
    breaks.push_back(L + caps.lowRadius / 2.0);
    breaks.push_back(L + caps.lowRadius);
  }
  if (caps.highRadius > 0) {
    breaks.push_back(H - caps.highRadius / 2.0);
    breaks.push_back(H - caps.highRadius);
  }
  // Level-set crossings for every ladder value.
  const int n = std::max(8, opts.scanPoints);
  std::vector<double> ts(n + 1), as(n + 1);
  for (int i = 0; i <= n; ++i) {
    ts[i] = s0 + (s1 - s0) * i / n;
    as[i] = absA(ts[i]);
  }
  for (double c : ladder) {
    const double level = 1.0 - c;
    for (int i = 0; i < n; ++i) {
      if ((as[i] > level) == (as[i + 1] > level)) continue;
      double lo = ts[i], hi = ts[i + 1];
      const bool loInside = as[i] > level;
      for (int it = 0; it < 60 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        ((absA(mid) > level) == loInside ? lo : hi) = mid;
      }
      breaks.push_back(0.5 * (lo + hi));
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  QuadratureOptions inner = opts;
  inner.initialCells = 1;
  inner.rtol = std::min(opts.rtol, 1e-8);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    if (b <= a || a < s0 || b > s1) continue;
    const double mid = 0.5 * (a + b);
    const double aMid = horizontalParameter(cs, patch, axisPoint(ax, mid, other));
    ++out.nodes;
    bool any = false;
    for (double c : ladder) any = any || std::abs(aMid) > 1.0 - c;
    if (!any) continue;
    // Cap level of this segment: 0 = main region, 1 = (r/2, r), 2 = (r/4, r/2).
    int capLevel = 0;
    if (caps.lowRadius > 0 && b <= L + caps.lowRadius) capLevel = b <= L + caps.lowRadius / 2.0 ? 2 : 1;
    if (caps.highRadius > 0 && a >= H - caps.highRadius) capLevel = a >= H - caps.highRadius / 2.0 ? 2 : 1;
    const QuadratureResult seg = integrate1D(
        [&](double t) {
          const SurfacePointFrame f = adaptedFrame(cs, patch, axisPoint(ax, t, other), 1.0);
          return integrand(f) * f.areaDensity;
        },
        a, b, inner);
    out.nodes += seg.nodes;
    const int sign = aMid > 0 ? 0 : 1;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      if (std::abs(aMid) <= 1.0 - ladder[i]) continue;
      for (int lvl = capLevel; lvl < 3; ++lvl) out.v[i][lvl][sign] += seg.value;
    }
  }
  return out;
}

}  // namespace

CumulativeProfile regionProfile(const ContactStructure& cs, const SurfacePatch& patch,
                                const std::vector<double>& ladder, const FrameIntegrand& integrand,
                                const QuadratureOptions& opts) {
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0 && ladder[i] < 1.0)) throw std::invalid_argument("region parameter c must lie in (0, 1)");
    if (i > 0 && !(ladder[i] < ladder[i - 1])) throw std::invalid_argument("ladder must be strictly decreasing");
  }
  const CapLayout caps = capLayout(patch);
  const int ox = 1 - caps.axis;
  const double lo = patch.lo(ox), hi = patch.hi(ox);
  const auto& [x, w] = gaussLegendre(opts.order);
  using Sums = std::vector<std::array<std::array<double, 2>, 3>>;
  long nodes = 0;
  auto outer = [&](int panels) {
    Sums acc(ladder.size());
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p)
      for (int q = 0; q < opts.order; ++q) {
        const double t = lo + h * (p + 0.5 + 0.5 * x[q]);
        const LineSums ls = lineSums(cs, patch, caps, ladder, integrand, t, opts);
        nodes += ls.nodes;
        for (std::size_t i = 0; i < ladder.size(); ++i)
          for (int l = 0; l < 3; ++l)
            for (int s = 0; s < 2; ++s) acc[i][l][s] += 0.5 * h * w[q] * ls.v[i][l][s];
      }
    return acc;
  };
  auto distance = [&](const Sums& a, const Sums& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double va = a[i][2][0] + a[i][2][1], vb = b[i][2][0] + b[i][2][1];
      d = std::max(d, std::abs(va - vb) / std::max(std::abs(vb), opts.atol / opts.rtol));
    }
    return d;
  };
  int panels = 8;
  Sums prev = outer(panels);
  Sums cur;
  bool converged = false;
  for (int level = 0; level < opts.maxDepth && panels < 1024; ++level) {
    panels *= 2;
    cur = outer(panels);
    if (distance(prev, cur) <= opts.rtol) {
      converged = true;
      break;
    }
    prev = std::move(cur);
  }
  if (!converged) throw NonConvergent("outer quadrature of the region integral did not settle");

  CumulativeProfile out;
  out.c = ladder;
  out.nodes = nodes;
  const bool hasCaps = caps.lowRadius > 0.0 || caps.highRadius > 0.0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    std::array<double, 2> part{};
    for (int s = 0; s < 2; ++s) {
      const std::array<double, 3> levels{cur[i][0][s], cur[i][1][s], cur[i][2][s]};
      const double tol = std::max(100.0 * opts.rtol * std::abs(levels[2]), 1e-10);
      part[s] = hasCaps ? extrapolateCaps(levels, tol, true) : levels[0];
    }
    out.Aplus.push_back(part[0]);
    out.Aminus.push_back(part[1]);
    out.A.push_back(part[0] + part[1]);
  }
  return out;
}

double regionIntegralA(const ContactStructure& cs, const SurfacePatch& patch, double c,
                       const QuadratureOptions& opts) {
  return regionProfile(cs, patch, {c}, kSigmaE, opts).A.front();
}

void slopeAtZero(CumulativeProfile& profile) {
  const auto& c = profile.c;
  const auto& A = profile.A;
  const int n = static_cast<int>(c.size());
  if (n < 3 || A.size() != c.size()) throw std::invalid_argument("slope fit needs at least three samples");
  bool allZero = true;
  for (double v : A) allZero = allZero && v == 0.0;
  if (allZero) {
    profile.slope = 0.0;
    profile.residual = 0.0;
    profile.windowBegin = 0;
    profile.windowEnd = n;
    return;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int b = 0; b + 3 <= n; ++b)
    for (int e = b + 3; e <= n; ++e) {
      double s = 0.0, cbar = 0.0;
      for (int k = b; k < e; ++k) {
        s += A[k] / c[k];
        cbar += c[k];
      }
      s /= (e - b);
      cbar /= (e - b);
      double r2 = 0.0;
      for (int k = b; k < e; ++k) r2 += std::pow(A[k] - s * c[k], 2);
      const double res = std::sqrt(r2 / (e - b));
      const double rel = res / (std::max(std::abs(s), 1e-300) * cbar);
      // Prefer the smallest relative residual; on near ties, the wider window.
      if (rel < best * (1.0 - 1e-9) || (rel <= best && e - b > profile.windowEnd - profile.windowBegin)) {
        best = rel;
        profile.slope = s;
        profile.residual = res;
        profile.windowBegin = b;
        profile.windowEnd = e;
      }
    }
  double cbar = 0.0;
  for (int k = profile.windowBegin; k < profile.windowEnd; ++k) cbar += c[k];
  cbar /= (profile.windowEnd - profile.windowBegin);
  if (profile.residual > 0.1 * std::abs(profile.slope) * cbar)
    throw IllConditionedFit("cumulative profile is not linear near c = 0");
}

std::pair<double, double> I1I2(double eps, double rho) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("I1/I2 need 0 < eps < 1");
  if (!(rho >= 0.0 && rho <= 1.0)) throw std::domain_error("I1/I2 need 0 <= rho <= 1");
  const double k = std::sqrt(1.0 - eps);
  const double s = std::sqrt(1.0 - rho * rho);
  const double i1 = (std::asin(k) - std::asin(k * s)) / k;
  const double i2 = 1.0 / std::sqrt(eps) - s / std::sqrt(eps + rho * rho - eps * rho * rho);
  return {i1, i2};
}

double I2AsPrinted(double eps, double rho) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("I1/I2 need 0 < eps < 1");
  return (1.0 / std::sqrt(1.0 - eps)) *
         (1.0 / std::sqrt(eps) - std::sqrt((1.0 - eps) * (1.0 - rho) / (eps + rho - eps * rho)));
}

std::pair<double, double> I1I2Numeric(double eps, double rho) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("I1/I2 need 0 < eps < 1");
  const double upper = -std::sqrt(1.0 - rho * rho);
  QuadratureOptions o;
  o.order = 8;
  o.rtol = 1e-14;
  o.atol = 1e-15;
  o.maxDepth = 40;
  o.initialCells = 4;
  auto b = [eps](double a) { return 1.0 + (eps - 1.0) * a * a; };
  const double i1 = integrate1D([&](double a) { return 1.0 / std::sqrt(b(a)); }, -1.0, upper, o).value;
  const double i2 = integrate1D([&](double a) { return std::pow(b(a), -1.5); }, -1.0, upper, o).value;
  return {i1, i2};
}

QuadratureResult checkB1m1Identity(const ContactStructure& cs, const SurfacePatch& patch,
                                   const QuadratureOptions& opts) {
  return integrateSurface(
      [&](const Eigen::Vector2d& uv) {
        const SurfacePointFrame f = adaptedFrame(cs, patch, uv, 1.0);
        return b1m1(f) / f.b0 * f.areaDensity;
      },
      patch, opts);
}

}  // namespace srgb
