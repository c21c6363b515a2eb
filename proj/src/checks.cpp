#include "srgb/checks.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace srgb::checks {

namespace {

constexpr double kPi = std::numbers::pi;

std::string epsTag(double eps) {
  std::ostringstream s;
  s << "eps=" << eps;
  return s.str();
}

/// Max-accumulating residual row.
struct MaxRow {
  std::string name;
  double tol;
  double worst = 0.0;
  long count = 0;
  void add(double r) {
    worst = std::max(worst, std::isfinite(r) ? std::abs(r) : INFINITY);
    ++count;
  }
  Row row() const {
    Row r = makeRow(name, worst, 0.0, tol);
    r.nodes = count;
    return r;
  }
};

}  // namespace

std::vector<Eigen::Vector2d> samplePoints(const ContactStructure& cs, const SurfacePatch& patch, int count,
                                          std::uint64_t seed, double aMax) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::Vector2d> out;
  long attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 1000L * count) throw std::runtime_error("no sample points with |a| <= aMax on " + patch.name);
    const Eigen::Vector2d uv(patch.lo(0) + unit(rng) * (patch.hi(0) - patch.lo(0)),
                             patch.lo(1) + unit(rng) * (patch.hi(1) - patch.lo(1)));
    if (patch.inCap(uv)) continue;
    try {
      if (std::abs(horizontalParameter(cs, patch, uv)) <= aMax) out.push_back(uv);
    } catch (const RankDeficient&) {
    }
  }
  return out;
}

std::vector<Row> structureIdentities(const ContactStructure& cs, int points, std::uint64_t seed, double tol) {
  std::map<std::string, MaxRow> acc;
  std::uint64_t k = seed;
  for (const ChartPoint& p : cs.probePoints(points, seed))
    for (const auto& [name, v] : structureIdentityResiduals(cs, p, ++k)) {
      auto it = acc.try_emplace(name, MaxRow{name, tol}).first;
      it->second.add(v);
    }
  std::vector<Row> rows;
  for (const auto& [name, m] : acc) rows.push_back(m.row());
  return rows;
}

std::vector<Row> tauOracle(const ContactStructure& cs, int points, std::uint64_t seed, double tol) {
  MaxRow m{"tau vs flow oracle", tol};
  for (const ChartPoint& p : cs.probePoints(points, seed + 17))
    m.add((tauFlowOracle(cs, p) - cs.tauMatrix(p)).cwiseAbs().maxCoeff());
  return {m.row()};
}

std::vector<Row> curvatureExpansion(const ContactStructure& cs, int points, const std::vector<double>& eps,
                                    std::uint64_t seed, double tol) {
  std::vector<Row> rows;
  std::mt19937_64 rng(seed + 5);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  const auto pts = cs.probePoints(points, seed + 3);
  std::vector<double> phis;
  for (int i = 0; i < points; ++i) phis.push_back(angle(rng));
  for (double e : eps) {
    std::array<MaxRow, 4> m;
    for (int i = 0; i < 4; ++i) m[i] = MaxRow{"curvature expansion " + std::to_string(i + 1) + " " + epsTag(e), tol};
    for (int i = 0; i < points; ++i) {
      const CurvatureExpansion c = curvatureExpansionResiduals(cs, pts[i], phis[i], e);
      for (int j = 0; j < 4; ++j) m[j].add(c.residual[j]);
    }
    for (const MaxRow& r : m) rows.push_back(r.row());
  }
  return rows;
}

std::vector<Row> gaussVsBrioschi(const ContactStructure& cs, const SurfacePatch& patch,
                                 const std::vector<Eigen::Vector2d>& pts, const std::vector<double>& eps,
                                 double tol) {
  std::vector<Row> rows;
  for (double e : eps) {
    MaxRow m{"K gauss vs brioschi rel " + epsTag(e), tol};
    for (const auto& uv : pts) {
      const double kg = gaussCurvature(cs, patch, uv, e);
      const double kb = brioschiCurvature(cs, patch, uv, e);
      m.add(std::abs(kg - kb) / std::max(1.0, std::abs(kb)));
    }
    rows.push_back(m.row());
  }
  return rows;
}

std::vector<Row> secondFundamentalForm(const ContactStructure& cs, const SurfacePatch& patch,
                                       const std::vector<Eigen::Vector2d>& pts, const std::vector<double>& eps,
                                       double tolForms, double tolOracle) {
  std::vector<Row> rows;
  for (double e : eps) {
    MaxRow forms{"II12 closed forms " + epsTag(e), tolForms};
    MaxRow oracle{"II closed vs oracle " + epsTag(e), tolOracle};
    for (const auto& uv : pts) {
      const SecondFundamentalForm c = secondFundamentalForm(cs, patch, uv, e);
      const SecondFundamentalForm o = secondFundamentalFormOracle(cs, patch, uv, e);
      forms.add(c.ii12 - c.ii12Alt);
      oracle.add(std::max({std::abs(c.ii11 - o.ii11), std::abs(c.ii12 - o.ii12), std::abs(c.ii22 - o.ii22)}));
    }
    rows.push_back(forms.row());
    rows.push_back(oracle.row());
  }
  return rows;
}

Row xaIdentityGrid(const ContactStructure& cs, const SurfacePatch& patch, int n, double aMax, double tol) {
  MaxRow m{"Xa identity grid", tol};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d uv(patch.lo(0) + (i + 0.5) / n * (patch.hi(0) - patch.lo(0)),
                               patch.lo(1) + (j + 0.5) / n * (patch.hi(1) - patch.lo(1)));
      if (std::abs(horizontalParameter(cs, patch, uv)) > aMax) continue;
      m.add(xaIdentityResidual(cs, patch, uv));
    }
  return m.row();
}

std::vector<Row> recombination(const ContactStructure& cs, const SurfacePatch& patch,
                               const std::vector<Eigen::Vector2d>& pts, const std::vector<double>& eps,
                               double tol) {
  std::vector<Row> rows;
  for (double e : eps) {
    MaxRow m{"B-panel recombination rel " + epsTag(e), tol};
    for (const auto& uv : pts) m.add(bPanel(cs, patch, uv, e).recombinationResidual);
    rows.push_back(m.row());
  }
  return rows;
}

QuadratureResult integralK(const ContactStructure& cs, const SurfacePatch& patch, double eps,
                           const QuadratureOptions& opts) {
  return integrateSurface(
      [&](const Eigen::Vector2d& uv) {
        return gaussCurvatureRiemannian(cs, patch, uv, eps) *
               std::sqrt(inducedMetric(cs, patch, uv, eps).determinant());
      },
      patch, opts);
}

Row gaussBonnetClosed(const ContactStructure& cs, const SurfacePatch& patch, double eps, int euler,
                      const QuadratureOptions& opts) {
  const double ref = 2.0 * kPi * euler;
  Row r;
  try {
    const QuadratureResult q = integralK(cs, patch, eps, opts);
    r = makeRow("integral_K " + epsTag(eps), q.value, ref, 1e-3 * (1.0 + std::abs(ref)));
    r.nodes = q.nodes;
  } catch (const NonConvergent& e) {
    r = makeRow("integral_K " + epsTag(eps), NAN, ref, 1e-3 * (1.0 + std::abs(ref)));
    r.note = e.what();
  }
  return r;
}

namespace {

Row slopeRow(const std::string& name, const ContactStructure& cs, const SurfacePatch& patch,
             const std::vector<double>& ladder, const FrameIntegrand& f, double ref, bool asserted,
             const QuadratureOptions& opts) {
  Row r;
  double tol = ref == 0.0 ? 0.0 : 0.02;
  try {
    CumulativeProfile prof = regionProfile(cs, patch, ladder, f, opts);
    slopeAtZero(prof);
    r = asserted ? makeRow(name, prof.slope, ref, tol, ref != 0.0) : infoRow(name, prof.slope, ref);
    r.nodes = prof.nodes;
    std::ostringstream note;
    note << "window " << prof.windowBegin << ".." << prof.windowEnd << " residual " << prof.residual;
    r.note = note.str();
  } catch (const std::runtime_error& e) {
    r = asserted ? makeRow(name, NAN, ref, tol, ref != 0.0) : infoRow(name, NAN, ref);
    r.note = e.what();
  }
  return r;
}

}  // namespace

std::vector<Row> limitSlope(const ContactStructure& cs, const SurfaceFixture& surface,
                            const std::vector<double>& ladder, const QuadratureOptions& opts, bool diagnostics) {
  const double ref = 2.0 * kPi * surface.euler;
  const SurfacePatch& patch = surface.regionPatch();
  std::vector<Row> rows{slopeRow("slope K_SigmaE", cs, patch, ladder, kSigmaE, ref, true, opts)};
  if (diagnostics) {
    rows.push_back(slopeRow("slope K_SigmaE - B_1,-1 (diagnostic)", cs, patch, ladder, kSigmaECorrected, ref, false,
                            opts));
    rows.push_back(slopeRow("slope intro variant (diagnostic)", cs, patch, ladder, kSigmaEIntroVariant, ref, false,
                            opts));
  }
  return rows;
}

Row b1m1Identity(const ContactStructure& cs, const SurfacePatch& patch, double tol, const QuadratureOptions& opts) {
  Row r;
  try {
    const QuadratureResult q = checkB1m1Identity(cs, patch, opts);
    r = makeRow("integral B_1,-1/b0", q.value, 0.0, tol);
    r.nodes = q.nodes;
  } catch (const NonConvergent& e) {
    r = makeRow("integral B_1,-1/b0", NAN, 0.0, tol);
    r.note = e.what();
  }
  return r;
}

std::vector<Row> i1i2(int n, double tol, double limitTol) {
  MaxRow m1{"I1 closed vs quadrature", tol}, m2{"I2 closed vs quadrature", tol};
  double printedWorst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double eps = 0.05 + 0.9 * i / (n - 1);
      const double rho = 0.05 + 0.95 * j / (n - 1);
      const auto [c1, c2] = I1I2(eps, rho);
      const auto [q1, q2] = I1I2Numeric(eps, rho);
      m1.add(c1 - q1);
      m2.add(c2 - q2);
      printedWorst = std::max(printedWorst, std::abs(I2AsPrinted(eps, rho) - q2));
    }
  const double eps = 1e-6, rho = 0.5;
  const auto [i1, i2] = I1I2(eps, rho);
  return {m1.row(),
          m2.row(),
          infoRow("I2 as printed vs quadrature (diagnostic)", printedWorst),
          makeRow("sqrt(eps) I2 at eps=1e-6", std::sqrt(eps) * i2, 1.0, limitTol),
          makeRow("I1 at eps=1e-6", i1, kPi / 2.0 - std::acos(rho), limitTol)};
}

namespace {

/// Longest stretch inside one piece with |psi| >= 0.1 max|psi| and no
/// characteristic samples; its middle half.
std::optional<std::pair<double, double>> findL0(const BoundaryCurve& curve, const BoundaryClassification& cls) {
  double psiMax = 0.0;
  for (double p : cls.psi) psiMax = std::max(psiMax, std::abs(p));
  if (psiMax == 0.0) return std::nullopt;
  std::optional<std::pair<double, double>> best;
  std::size_t i = 0;
  while (i < cls.s.size()) {
    if (std::abs(cls.psi[i]) < 0.1 * psiMax || cls.tags[i] != SampleTag::T3) {
      ++i;
      continue;
    }
    std::size_t j = i;
    const int piece = curve.locate(cls.s[i]).first;
    while (j + 1 < cls.s.size() && std::abs(cls.psi[j + 1]) >= 0.1 * psiMax && cls.tags[j + 1] == SampleTag::T3 &&
           curve.locate(cls.s[j + 1]).first == piece)
      ++j;
    const double a = cls.s[i], b = cls.s[j];
    if (!best || b - a > best->second - best->first) best = {{a, b}};
    i = j + 1;
  }
  if (!best || best->second - best->first <= 0.0) return std::nullopt;
  const double q = 0.25 * (best->second - best->first);
  return std::make_pair(best->first + q, best->second - q);
}

}  // namespace

Row riemannianBoundaryGB(const ContactStructure& cs, const SurfaceFixture& surface, const BoundaryCurve& curve,
                         double eps, const QuadratureOptions& opts) {
  const double ref = 2.0 * kPi * surface.euler;
  const double tol = 1e-3 * (1.0 + std::abs(ref));
  Row r;
  try {
    const QuadratureResult k = integralK(cs, surface.patch, eps, opts);
    const BoundaryIntegral b = riemannianBoundaryTerms(curve, eps, opts);
    r = makeRow("riemannian GB with boundary " + epsTag(eps), k.value + b.curvature + b.angles, ref, tol);
    r.nodes = k.nodes;
    std::ostringstream note;
    note << "K " << k.value << " k_g " << b.curvature << " angles " << b.angles;
    r.note = note.str();
  } catch (const std::runtime_error& ex) {
    r = makeRow("riemannian GB with boundary " + epsTag(eps), NAN, ref, tol);
    r.note = ex.what();
  }
  return r;
}

Row riemannianBoundaryGB(const ContactStructure& cs, const SurfaceFixture& surface, double eps,
                         const QuadratureOptions& opts) {
  return riemannianBoundaryGB(cs, surface, BoundaryCurve::build(cs, surface.patch, surface.boundary, surface.params),
                              eps, opts);
}

std::vector<Row> boundary(const ContactStructure& cs, const SurfaceFixture& surface, const BoundaryOptions& opts) {
  if (surface.boundary.empty()) throw std::invalid_argument(surface.id + " has no boundary");
  const double ref = 2.0 * kPi * surface.euler;
  std::vector<Row> rows;
  const BoundaryCurve curve = BoundaryCurve::build(cs, surface.patch, surface.boundary, surface.params);
  const BoundaryClassification cls = classifyBoundary(curve);

  int nS[3] = {0, 0, 0};
  for (const CornerDatum& c : cls.corners) ++nS[static_cast<int>(c.cls)];
  rows.push_back(infoRow("boundary h-length", curve.length()));
  rows.push_back(infoRow("W+ points", static_cast<double>(cls.wPlus.size())));
  rows.push_back(infoRow("W- points", static_cast<double>(cls.wMinus.size())));
  rows.push_back(infoRow("S2 corners", nS[2]));
  rows.push_back(infoRow("S1 corners", nS[1]));
  rows.push_back(infoRow("S0 corners", nS[0]));
  {
    Row r = infoRow("star_ok", cls.starOk ? 1.0 : 0.0);
    for (const auto& w : cls.warnings) r.note += (r.note.empty() ? "" : "; ") + w;
    rows.push_back(r);
  }

  auto rhsRows = [&](const std::string& tag, const FrameIntegrand& f, bool asserted) {
    Row r;
    const double tol = 0.02;
    try {
      CumulativeProfile prof = regionProfile(cs, surface.regionPatch(), opts.ladder, f, opts.quad);
      slopeAtZero(prof);
      if (!cls.starOk) throw StarViolation("condition (*) fails; right-hand side not assembled");
      const BoundaryRhs rhs = gbBoundaryRhs(curve, cls, prof.slope);
      r = asserted ? makeRow("boundary RHS " + tag, rhs.total(), ref, tol, true)
                   : infoRow("boundary RHS " + tag, rhs.total(), ref);
      r.nodes = prof.nodes;
      std::ostringstream note;
      note << "slope " << rhs.slope << " S2 " << rhs.s2 << " S1 " << rhs.s1 << " S0 " << rhs.s0 << " W-signs "
           << rhs.wSigns << " W-curvature " << rhs.wCurvature;
      r.note = note.str();
    } catch (const std::runtime_error& e) {
      r = asserted ? makeRow("boundary RHS " + tag, NAN, ref, tol, true) : infoRow("boundary RHS " + tag, NAN, ref);
      r.note = e.what();
    }
    rows.push_back(r);
  };
  rhsRows("K_SigmaE", kSigmaE, true);
  if (opts.diagnostics) rhsRows("K_SigmaE - B_1,-1 (diagnostic)", kSigmaECorrected, false);
  {
    double s2 = 0.0;
    for (const CornerDatum& c : cls.corners)
      if (c.cls == CornerClass::S2) s2 += c.beta;
    if (nS[2] > 0) rows.push_back(infoRow("S2 corner sum", s2));
  }

  for (double e : opts.eps) rows.push_back(riemannianBoundaryGB(cs, surface, curve, e, opts.quad));

  // Two routes to k_g^eps at random non-corner, non-characteristic points.
  {
    std::mt19937_64 rng(opts.seed + 11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MaxRow m{"k_g definitional vs expansion", 1e-6};
    double printedGap = 0.0;
    int tries = 0;
    while (m.count < 15 && ++tries < 200) {
      const double s = unit(rng) * curve.length();
      if (curve.sample(s).characteristic) continue;
      bool nearCorner = false;
      for (double c : curve.corners()) nearCorner |= std::abs(s - c) < 1e-6 * curve.length();
      if (nearCorner) continue;
      for (double e : {1.0, 0.3, 0.05}) {
        const double def = geodesicCurvatureEps(curve, s, e);
        m.add((def - geodesicCurvatureEpsExpansion(curve, s, e)) / std::max(1.0, std::abs(def)));
        printedGap = std::max(printedGap, std::abs(def - geodesicCurvatureEpsExpansionAsPrinted(curve, s, e)));
      }
    }
    rows.push_back(m.row());
    if (opts.diagnostics) rows.push_back(infoRow("k_g expansion as printed, max gap (diagnostic)", printedGap));
  }

  // q+/- from sign <X2, gdot>_eps on the open side, at eps = 1 and 0.1.
  {
    int mismatches = 0, checked = 0;
    const double probe = 1e-4 * curve.length();
    auto qSign = [&](double s, int side, double e) {
      const BoundarySample b = curve.sample(s, side);
      const SurfacePointFrame f = adaptedFrame(cs, surface.patch, b.uv, 1.0);
      const double v = cs.metricEps(curve.patch()(b.uv), f.X2, b.gdot, e);
      return (v > 0.0) - (v < 0.0);
    };
    auto check = [&](double s, int side) {
      try {
        const double at = s + side * probe;
        if (qSign(at, side, 1.0) != qSign(at, side, 0.1)) ++mismatches;
        ++checked;
      } catch (const CharacteristicPoint&) {
      }
    };
    for (const WPoint& w : cls.wPlus) check(w.s, +1);
    for (const WPoint& w : cls.wMinus) check(w.s, -1);
    for (const CornerDatum& c : cls.corners) {
      check(c.s, +1);
      check(c.s, -1);
    }
    Row r = makeRow("q+- eps-independence mismatches", mismatches, 0.0, 0.0);
    r.nodes = checked;
    rows.push_back(r);
  }

  // Order-zero part of the T3 split on an L0 interval.
  if (const auto l0 = findL0(curve, cls)) {
    const double v4 = t3OrderZeroTerm(curve, l0->first, l0->second, 1e-4, opts.quad);
    const double v6 = t3OrderZeroTerm(curve, l0->first, l0->second, 1e-6, opts.quad);
    Row r = makeRow("T3 order-zero L0 ratio |I(1e-6)|/|I(1e-4)|", std::abs(v6) / std::max(std::abs(v4), 1e-300),
                    0.0, 1.0);
    std::ostringstream note;
    note << "L0 = [" << l0->first << ", " << l0->second << "], I(1e-4) = " << v4 << ", I(1e-6) = " << v6;
    r.note = note.str();
    rows.push_back(r);
  }
  return rows;
}

Row geodesicCurvatureSpread(const ContactStructure& cs, const SurfaceFixture& surface, double tol) {
  const BoundaryCurve curve = BoundaryCurve::build(cs, surface.patch, surface.boundary, surface.params);
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k < 8; ++k) {
    const double v = geodesicCurvatureEps(curve, (k + 0.5) / 8.0 * curve.length(), 1.0);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  Row r = makeRow("k_g^1 spread over 8 points", hi - lo, 0.0, tol);
  r.nodes = 8;
  return r;
}

std::vector<Row> cornerAngleTable(const ContactStructure& cs, double tol) {
  const SurfacePatch plane = SurfacePatch::parse("plane", {"u", "v", "0"});
  std::vector<Row> rows;
  auto add = [&](const std::string& name, const Eigen::Vector2d& uv, const Eigen::Vector2d& v,
                 const Eigen::Vector2d& w, double table) {
    const double limit = cornerAngleLimit(cs, plane, uv, v, w);
    const double beta = std::abs(cornerAngle(cs, plane, uv, v, w, 1e-8));
    Row r = makeRow("corner limit " + name, beta, limit, tol);
    std::ostringstream note;
    note << "table value " << table;
    r.note = note.str();
    rows.push_back(r);
    rows.push_back(makeRow("corner table " + name, limit, table, 1e-12));
  };
  // At the characteristic origin T Sigma = E: both tangents horizontal.
  add("both in E", Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(1.0, 1.0), kPi / 4.0);
  const Eigen::Vector2d uv(0.8, 0.5);
  const SurfacePointFrame f = adaptedFrame(cs, plane, uv, 1.0);
  const Eigen::Vector2d x = f.xParam, x2 = f.x2Param;
  add("one in E", uv, x, x2 + 0.4 * x, kPi / 2.0);
  add("neither, same sign", uv, x2 + 0.3 * x, x2 - 0.5 * x, 0.0);
  add("neither, opposite sign", uv, x2 + 0.3 * x, -x2 + 0.2 * x, kPi);
  return rows;
}

std::vector<Row> starExperiment(const std::string& psi, double t0, double t1, const std::vector<double>& eps) {
  std::vector<Row> rows;
  for (double e : eps) rows.push_back(infoRow("star experiment integral " + epsTag(e), starExperimentIntegral(psi, t0, t1, e)));
  return rows;
}

}  // namespace srgb::checks
