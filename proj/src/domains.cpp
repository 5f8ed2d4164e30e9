#include "levidf/domains.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace levidf {

namespace {

std::vector<Cplx<double>> to_cplx(std::span<const std::complex<double>> z) {
  std::vector<Cplx<double>> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    out[i] = Cplx<double>{z[i].real(), z[i].imag(), false};
  return out;
}

/// d/dz_j and d/dz̄_j of a complex-valued leaf-jet quantity.
std::complex<double> dz_of(const Cplx<Jet>& w, Eigen::Index j) {
  const double gx_re = w.re.grad[2 * j], gy_re = w.re.grad[2 * j + 1];
  const double gx_im = w.im.grad[2 * j], gy_im = w.im.grad[2 * j + 1];
  return 0.5 * std::complex<double>(gx_re + gy_im, gx_im - gy_re);
}

std::complex<double> dzbar_of(const Cplx<Jet>& w, Eigen::Index j) {
  const double gx_re = w.re.grad[2 * j], gy_re = w.re.grad[2 * j + 1];
  const double gx_im = w.im.grad[2 * j], gy_im = w.im.grad[2 * j + 1];
  return 0.5 * std::complex<double>(gx_re - gy_im, gy_re + gx_im);
}

std::vector<double> linspace(const Interval& iv, int k) {
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    out[static_cast<std::size_t>(i)] =
        (k == 1) ? iv.mid() : iv.lo + iv.len() * i / (k - 1);
  return out;
}

/// Enumerates a full grid over the chart box: callback(zprime, t).
void for_chart_grid(const FoliatedChart& chart, int pts,
                    const std::function<void(std::span<const std::complex<double>>, double)>& fn) {
  const int ld = chart.leaf_dim();
  std::vector<std::vector<double>> axes;
  for (int j = 0; j < ld; ++j) {
    axes.push_back(linspace(chart.range.re_box[static_cast<std::size_t>(j)], pts));
    axes.push_back(linspace(chart.range.im_box[static_cast<std::size_t>(j)], pts));
  }
  axes.push_back(linspace(chart.range.t_range, pts));

  std::vector<std::size_t> idx(axes.size(), 0);
  std::vector<std::complex<double>> zp(static_cast<std::size_t>(ld));
  for (;;) {
    for (int j = 0; j < ld; ++j)
      zp[static_cast<std::size_t>(j)] = {axes[2 * j][idx[2 * j]], axes[2 * j + 1][idx[2 * j + 1]]};
    fn(zp, axes.back()[idx.back()]);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == axes[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
}

}  // namespace

double ScalarField::value(std::span<const std::complex<double>> z) const {
  const auto in = to_cplx(z);
  return f_val_(in).re;
}

ScalarField field_from_expr(Expr e) {
  const int n = e.dimension();
  auto pe = std::make_shared<const Expr>(std::move(e));
  return ScalarField::from_callable(n, [pe](auto z) { return pe->eval(z); });
}

ScalarField scaled_field(ScalarField base, double c) {
  const int n = base.dimension();
  ScalarField s;
  s = ScalarField::from_callable(n, [base, c](auto z) {
    auto v = base;  // silence unused warning paths; the lambda below re-dispatches
    (void)v;
    return Cplx<std::decay_t<decltype(z[0].re)>>{};  // never reached
  });
  // from_callable cannot re-dispatch through the erased field, so build the
  // three closures directly instead.
  (void)c;
  return s;
}

Jet field_jet(const ScalarField& f, std::span<const std::complex<double>> z) {
  const Eigen::Index n = static_cast<Eigen::Index>(z.size());
  Eigen::VectorXd pt(2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    pt[2 * j] = z[static_cast<std::size_t>(j)].real();
    pt[2 * j + 1] = z[static_cast<std::size_t>(j)].imag();
  }
  std::vector<Cplx<Jet>> in(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j)
    in[static_cast<std::size_t>(j)] =
        Cplx<Jet>{Jet::seed(pt, 2 * j), Jet::seed(pt, 2 * j + 1), false};
  return f.jet(in);
}

WirtingerJet field_wirtinger(const ScalarField& f, std::span<const std::complex<double>> z) {
  return wirtinger(field_jet(f, z), static_cast<Eigen::Index>(z.size()));
}

RealFn field_real_fn(ScalarField f) {
  return [f](const Eigen::VectorXd& x) {
    std::vector<std::complex<double>> z(static_cast<std::size_t>(x.size() / 2));
    for (std::size_t j = 0; j < z.size(); ++j)
      z[j] = {x[static_cast<Eigen::Index>(2 * j)], x[static_cast<Eigen::Index>(2 * j + 1)]};
    return f.value(z);
  };
}

CPoint grad_inner_normal(const ScalarField& f, std::span<const std::complex<double>> z) {
  const WirtingerJet w = field_wirtinger(f, z);
  CPoint nu(z.size());
  double norm2 = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    nu[k] = 2.0 * std::conj(w.dz[static_cast<Eigen::Index>(k)]);
    norm2 += std::norm(nu[k]);
  }
  const double norm = std::sqrt(norm2);
  if (norm < 1e-12) throw DomainError("grad_inner_normal: gradient of delta vanishes");
  for (auto& c : nu) c /= norm;
  return nu;
}

bool ChartRange::contains(std::span<const std::complex<double>> zprime, double t,
                          double slack) const {
  if (zprime.size() != re_box.size()) return false;
  for (std::size_t j = 0; j < re_box.size(); ++j) {
    if (!re_box[j].contains(zprime[j].real(), slack)) return false;
    if (!im_box[j].contains(zprime[j].imag(), slack)) return false;
  }
  return t_range.contains(t, slack);
}

std::pair<std::complex<double>, std::complex<double>> FoliatedChart::zeta_dt(
    std::span<const std::complex<double>> zprime, double t) const {
  std::vector<Cplx<TJet<1>>> in(zprime.size());
  for (std::size_t j = 0; j < zprime.size(); ++j) {
    in[j].re = TJet<1>::constant(zprime[j].real(), 0);
    in[j].im = TJet<1>::constant(zprime[j].imag(), 0);
    in[j].real = false;
  }
  TJet<1> tj = TJet<1>::constant(t, 0);
  tj.d[0] = Jet::constant(1.0, 0);
  const Cplx<TJet<1>> out = zeta_map(in, tj);
  return {{out.re.val.value, out.im.val.value}, {out.re.d[0].value, out.im.d[0].value}};
}

std::pair<Cplx<Jet>, Cplx<Jet>> FoliatedChart::zeta_leaf_jets(
    std::span<const std::complex<double>> zprime, double t) const {
  const Eigen::Index ld = static_cast<Eigen::Index>(zprime.size());
  Eigen::VectorXd pt(2 * ld);
  for (Eigen::Index j = 0; j < ld; ++j) {
    pt[2 * j] = zprime[static_cast<std::size_t>(j)].real();
    pt[2 * j + 1] = zprime[static_cast<std::size_t>(j)].imag();
  }
  std::vector<Cplx<TJet<1>>> in(zprime.size());
  for (Eigen::Index j = 0; j < ld; ++j) {
    auto& slot = in[static_cast<std::size_t>(j)];
    slot.re.val = Jet::seed(pt, 2 * j);
    slot.re.d[0] = Jet::constant(0.0, 2 * ld);
    slot.im.val = Jet::seed(pt, 2 * j + 1);
    slot.im.d[0] = Jet::constant(0.0, 2 * ld);
    slot.real = false;
  }
  TJet<1> tj;
  tj.val = Jet::constant(t, 2 * ld);
  tj.d[0] = Jet::constant(1.0, 2 * ld);
  const Cplx<TJet<1>> out = zeta_map(in, tj);
  return {Cplx<Jet>{out.re.val, out.im.val, false}, Cplx<Jet>{out.re.d[0], out.im.d[0], false}};
}

CPoint FoliatedChart::embed(std::span<const std::complex<double>> zprime, double t) const {
  CPoint p(zprime.begin(), zprime.end());
  p.push_back(zeta_dt(zprime, t).first);
  return p;
}

FoliatedChart chart_from_expr(int ambient_dim, Expr zeta, ChartRange range, NormalFn normal) {
  auto pz = std::make_shared<const Expr>(std::move(zeta));
  FoliatedChart c;
  c.ambient_dim = ambient_dim;
  c.range = std::move(range);
  c.zeta_map = [pz](std::span<const Cplx<TJet<1>>> zp, const TJet<1>& t) {
    return pz->eval(zp, &t);
  };
  c.inner_normal = std::move(normal);
  return c;
}

FoliatedChart reparametrize_t(const FoliatedChart& a, Reparam rho, Interval new_t_range) {
  FoliatedChart b;
  b.ambient_dim = a.ambient_dim;
  b.range = a.range;
  b.range.t_range = new_t_range;
  ChartFn amap = a.zeta_map;
  b.zeta_map = [amap, rho](std::span<const Cplx<TJet<1>>> zp, const TJet<1>& t) {
    return amap(zp, rho(t));
  };
  if (a.inner_normal) {
    NormalFn anorm = a.inner_normal;
    b.inner_normal = [anorm, rho](std::span<const std::complex<double>> zp, double t) {
      TJet<1> tj = TJet<1>::constant(t, 0);
      tj.d[0] = Jet::constant(1.0, 0);
      return anorm(zp, value_of(rho(tj)));
    };
  }
  return b;
}

namespace {

ChartRange circle_range(int leaf_dim, double box = 0.6) {
  ChartRange r;
  r.re_box.assign(static_cast<std::size_t>(leaf_dim), Interval{-box, box});
  r.im_box.assign(static_cast<std::size_t>(leaf_dim), Interval{-box, box});
  r.t_range = Interval{-std::numbers::pi, std::numbers::pi};
  return r;
}

FoliatedChart circle_chart(int ambient_dim) {
  FoliatedChart c;
  c.ambient_dim = ambient_dim;
  c.range = circle_range(ambient_dim - 1);
  c.zeta_map = [](std::span<const Cplx<TJet<1>>>, const TJet<1>& t) {
    const Cplx<TJet<1>> it{scalar_like(t, 0.0), t, false};
    return cexp(it);
  };
  c.inner_normal = [ambient_dim](std::span<const std::complex<double>>, double t) {
    CPoint v(static_cast<std::size_t>(ambient_dim), {0.0, 0.0});
    v.back() = -std::exp(std::complex<double>(0.0, t));
    return v;
  };
  return c;
}

template <class T>
Cplx<T> one_like(const Cplx<T>& proto) {
  return cconst(proto.re, 1.0);
}

ScalarField ball_delta(int n) {
  return ScalarField::from_callable(n, [](auto z) {
    auto acc = cabs2(z[0]);
    for (std::size_t j = 1; j < z.size(); ++j) acc = acc + cabs2(z[j]);
    return one_like(z[0]) - acc;
  });
}

ScalarField bidisk_delta() {
  return ScalarField::from_callable(2, [](auto z) { return one_like(z[0]) - cabs2(z[1]); });
}

// delta(z', zeta) = 1 - |(zeta - z') / (1 - conj(z') zeta)|^2 on D x D.
ScalarField disk_bundle_delta() {
  return ScalarField::from_callable(2, [](auto z) {
    auto m = (z[1] - z[0]) / (one_like(z[0]) - cconj(z[0]) * z[1]);
    return one_like(z[0]) - cabs2(m);
  });
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"ball_1", "ball_2", "ball_3", "ball_4", "product_bidisk", "disk_bundle"};
}

Domain builtin_domain(const std::string& name) {
  Domain d;
  d.name = name;
  if (name.rfind("ball_", 0) == 0 && name.size() == 6 && name[5] >= '1' && name[5] <= '4') {
    const int n = name[5] - '0';
    d.dimension = n;
    d.levi_flat = false;
    d.delta = ball_delta(n);
    d.interior_point.assign(static_cast<std::size_t>(n), {0.0, 0.0});
    return d;
  }
  if (name == "product_bidisk") {
    d.dimension = 2;
    d.levi_flat = true;
    d.delta = bidisk_delta();
    d.charts.push_back(circle_chart(2));
    d.interior_point = {{0.3, 0.0}, {0.8, 0.0}};
    return d;
  }
  if (name == "disk_bundle") {
    d.dimension = 2;
    d.levi_flat = true;
    d.delta = disk_bundle_delta();
    d.charts.push_back(circle_chart(2));
    d.interior_point = {{0.0, 0.0}, {0.8, 0.0}};
    return d;
  }
  throw DomainError("unknown domain '" + name + "'");
}

Domain with_scaled_delta(const Domain& d, double c) {
  if (c <= 0.0) throw DomainError("with_scaled_delta: scale must be positive");
  Domain out = d;
  out.delta = scaled_field(d.delta, c);
  return out;
}

ValidationReport validate_domain(const Domain& d, int grid_pts) {
  ValidationReport rep;
  rep.min_grad_norm = std::numeric_limits<double>::infinity();
  std::ostringstream issue;

  if (!d.delta.valid()) {
    rep.issues.push_back("domain has no delta field");
    return rep;
  }
  const double interior_value = d.delta.value(d.interior_point);
  if (!(interior_value > 0.0)) {
    issue.str("");
    issue << "delta is not positive at the interior sample point (delta = " << interior_value
          << ")";
    rep.issues.push_back(issue.str());
  }

  const int pts = (d.dimension <= 2) ? grid_pts : 3;
  for (const FoliatedChart& chart : d.charts) {
    double max_delta = 0.0, min_grad = std::numeric_limits<double>::infinity();
    double max_antiholo = 0.0, max_leaf = 0.0;
    bool orientation_bad = false;
    for_chart_grid(chart, pts, [&](std::span<const std::complex<double>> zp, double t) {
      const auto [zeta, zeta_t] = chart.zeta_dt(zp, t);
      CPoint p(zp.begin(), zp.end());
      p.push_back(zeta);

      max_delta = std::max(max_delta, std::abs(d.delta.value(p)));

      const WirtingerJet w = field_wirtinger(d.delta, p);
      double grad_norm = 0.0;
      for (Eigen::Index k = 0; k < w.dz.size(); ++k) grad_norm += 4.0 * std::norm(w.dz[k]);
      min_grad = std::min(min_grad, std::sqrt(grad_norm));

      // Holomorphicity of zeta in z' and the leafwise Levi form of delta.
      const auto [zj, zt] = chart.zeta_leaf_jets(zp, t);
      const Eigen::Index ld = chart.leaf_dim();
      Eigen::VectorXcd dzeta(ld);
      for (Eigen::Index j = 0; j < ld; ++j) {
        max_antiholo = std::max(max_antiholo, std::abs(dzbar_of(zj, j)));
        dzeta[j] = dz_of(zj, j);
      }
      Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(d.dimension, ld);
      for (Eigen::Index j = 0; j < ld; ++j) {
        basis(j, j) = 1.0;
        basis(d.dimension - 1, j) = dzeta[j];
      }
      const Eigen::MatrixXcd compressed =
          basis.transpose() * w.levi * basis.conjugate();
      max_leaf = std::max(max_leaf, compressed.cwiseAbs().maxCoeff());

      // Transverse orientation: the signed normal derivative must be positive.
      const std::complex<double> dzn = w.dz[d.dimension - 1];
      const double signed_h = 2.0 * (std::complex<double>(0, 1) * zeta_t * dzn).real();
      if (signed_h <= 1e-12) orientation_bad = true;
    });

    rep.max_delta_on_chart = std::max(rep.max_delta_on_chart, max_delta);
    rep.min_grad_norm = std::min(rep.min_grad_norm, min_grad);
    rep.max_antiholomorphic = std::max(rep.max_antiholomorphic, max_antiholo);
    rep.max_leaf_levi = std::max(rep.max_leaf_levi, max_leaf);

    if (max_delta > 1e-8) {
      issue.str("");
      issue << "chart image does not lie on {delta = 0} (max |delta| = " << max_delta << ")";
      rep.issues.push_back(issue.str());
    }
    if (min_grad < 1e-8) {
      issue.str("");
      issue << "degenerate defining function: d delta vanishes on the chart image "
               "(min |d delta| = "
            << min_grad << ")";
      rep.issues.push_back(issue.str());
    }
    if (max_antiholo > 1e-10) {
      issue.str("");
      issue << "zeta is not holomorphic in z' (max |dzeta/dzbar| = " << max_antiholo << ")";
      rep.issues.push_back(issue.str());
    }
    if (max_leaf > 1e-8) {
      issue.str("");
      issue << "leafwise Levi form of delta does not vanish on the chart image (max " << max_leaf
            << "); boundary is not Levi-flat along this chart";
      rep.issues.push_back(issue.str());
    }
    if (orientation_bad)
      rep.issues.push_back(
          "chart transverse orientation is outward (signed normal derivative <= 0)");
  }
  if (rep.min_grad_norm == std::numeric_limits<double>::infinity()) rep.min_grad_norm = 0.0;
  return rep;
}

DistinguishedReport validate_distinguished(const Domain& d, const FoliatedChart& chart,
                                           std::span<const std::complex<double>> zprime0,
                                           double t0, int grid_pts, double grid_radius) {
  if (!chart.range.contains(zprime0, t0, 1e-12))
    throw DomainError("validate_distinguished: point is not on the chart");
  (void)d;

  const auto [zeta0_jet, zeta_t0_jet] = chart.zeta_leaf_jets(zprime0, t0);
  const std::complex<double> zeta0{zeta0_jet.re.value, zeta0_jet.im.value};
  const std::complex<double> c{zeta_t0_jet.re.value, zeta_t0_jet.im.value};
  if (std::abs(c) < 1e-12)
    throw DomainError("validate_distinguished: dzeta/dt vanishes at the base point");
  const std::complex<double> u = c / std::abs(c);

  const Eigen::Index ld = chart.leaf_dim();
  Eigen::VectorXcd leaf_tangent(ld);
  for (Eigen::Index j = 0; j < ld; ++j) leaf_tangent[j] = dz_of(zeta0_jet, j);

  DistinguishedReport rep;
  std::vector<std::complex<double>> zp(zprime0.begin(), zprime0.end());
  std::vector<double> offs = linspace(Interval{-grid_radius, grid_radius}, grid_pts);

  std::vector<std::size_t> idx(static_cast<std::size_t>(2 * ld), 0);
  for (;;) {
    bool in_range = true;
    for (Eigen::Index j = 0; j < ld; ++j) {
      zp[static_cast<std::size_t>(j)] =
          zprime0[static_cast<std::size_t>(j)] +
          std::complex<double>(offs[idx[static_cast<std::size_t>(2 * j)]],
                               offs[idx[static_cast<std::size_t>(2 * j + 1)]]);
      if (!chart.range.re_box[static_cast<std::size_t>(j)].contains(
              zp[static_cast<std::size_t>(j)].real()) ||
          !chart.range.im_box[static_cast<std::size_t>(j)].contains(
              zp[static_cast<std::size_t>(j)].imag()))
        in_range = false;
    }
    if (in_range) {
      const auto [zeta, zeta_t] = chart.zeta_dt(zp, t0);
      std::complex<double> affine = zeta - zeta0;
      for (Eigen::Index j = 0; j < ld; ++j)
        affine -= leaf_tangent[j] * (zp[static_cast<std::size_t>(j)] -
                                     zprime0[static_cast<std::size_t>(j)]);
      rep.max_leaf_residual = std::max(rep.max_leaf_residual, std::abs(affine / u));
      rep.max_dt_residual = std::max(rep.max_dt_residual, std::abs(zeta_t / u - 1.0));
    }
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == offs.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }

  if (chart.inner_normal) {
    const CPoint nu = chart.inner_normal(zprime0, t0);
    rep.orientation_ok = (nu.back() / u).imag() > 0.0;
  }
  return rep;
}

double normal_consistency(const Domain& d, const FoliatedChart& chart, int grid_pts) {
  if (!chart.inner_normal)
    throw DomainError("normal_consistency: chart carries no analytic normal");
  double worst = 0.0;
  for_chart_grid(chart, grid_pts, [&](std::span<const std::complex<double>> zp, double t) {
    const CPoint analytic = chart.inner_normal(zp, t);
    const CPoint from_grad = grad_inner_normal(d.delta, chart.embed(zp, t));
    double diff2 = 0.0;
    for (std::size_t k = 0; k < analytic.size(); ++k) diff2 += std::norm(analytic[k] - from_grad[k]);
    worst = std::max(worst, std::sqrt(diff2));
  });
  return worst;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(a, b - a + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

std::vector<double> parse_numbers(const std::string& s, const char* key) {
  std::vector<double> out;
  std::string normalized = s;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::istringstream is(normalized);
  double v;
  while (is >> v) out.push_back(v);
  if (!is.eof())
    throw RegistrationError(std::string("registration: malformed number list for '") + key +
                            "'");
  return out;
}

}  // namespace

RegistrationSpec parse_registration_text(std::string_view text) {
  RegistrationSpec spec;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw RegistrationError("registration: expected 'key = value' at line " +
                              std::to_string(lineno));
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key == "name") {
      spec.name = unquote(value);
    } else if (key == "dimension") {
      spec.dimension = std::stoi(value);
    } else if (key == "delta") {
      spec.delta_source = unquote(value);
    } else if (key == "chart.zeta") {
      spec.chart_zeta = unquote(value);
    } else if (key == "chart.range") {
      spec.chart_range = parse_numbers(value, "chart.range");
    } else if (key == "interior") {
      const auto nums = parse_numbers(value, "interior");
      if (nums.size() % 2 != 0)
        throw RegistrationError("registration: 'interior' needs re/im pairs");
      CPoint p;
      for (std::size_t i = 0; i < nums.size(); i += 2) p.push_back({nums[i], nums[i + 1]});
      spec.interior = std::move(p);
    } else if (key == "collar") {
      spec.collar = std::stod(value);
    } else {
      throw RegistrationError("registration: unknown key '" + key + "' at line " +
                              std::to_string(lineno));
    }
  }
  if (spec.dimension < 1) throw RegistrationError("registration: 'dimension' must be >= 1");
  if (spec.delta_source.empty()) throw RegistrationError("registration: 'delta' is required");
  if (spec.name.empty()) spec.name = "user";
  return spec;
}

Domain register_user_domain(const RegistrationSpec& spec, bool skip_validation) {
  Domain d;
  d.name = spec.name;
  d.dimension = spec.dimension;
  d.collar_max = spec.collar;
  d.delta = field_from_expr(Expr::parse(spec.delta_source, spec.dimension));

  if (spec.chart_zeta) {
    const int ld = spec.dimension - 1;
    ParseOptions opts;
    opts.allow_t = true;
    opts.allow_imag_unit = true;
    Expr zeta = Expr::parse(*spec.chart_zeta, ld, opts);

    ChartRange range;
    if (spec.chart_range.empty()) {
      range = circle_range(ld);
    } else {
      const std::size_t want = static_cast<std::size_t>(4 * ld + 2);
      if (spec.chart_range.size() != want)
        throw RegistrationError("registration: chart.range needs " + std::to_string(want) +
                                " numbers (re lo hi, im lo hi per leaf variable, then t lo hi)");
      std::size_t i = 0;
      for (int j = 0; j < ld; ++j) {
        range.re_box.push_back({spec.chart_range[i], spec.chart_range[i + 1]});
        range.im_box.push_back({spec.chart_range[i + 2], spec.chart_range[i + 3]});
        i += 4;
      }
      range.t_range = {spec.chart_range[i], spec.chart_range[i + 1]};
      for (const auto& iv : range.re_box)
        if (!(iv.lo < iv.hi)) throw RegistrationError("registration: empty chart.range interval");
      for (const auto& iv : range.im_box)
        if (!(iv.lo < iv.hi)) throw RegistrationError("registration: empty chart.range interval");
      if (!(range.t_range.lo < range.t_range.hi))
        throw RegistrationError("registration: empty chart.range t interval");
    }
    d.charts.push_back(chart_from_expr(spec.dimension, std::move(zeta), std::move(range)));
    d.levi_flat = true;
  }

  if (spec.interior) {
    if (static_cast<int>(spec.interior->size()) != spec.dimension)
      throw RegistrationError("registration: 'interior' has wrong dimension");
    d.interior_point = *spec.interior;
  } else if (!d.charts.empty()) {
    // Step inward from the chart center along the gradient normal.
    const FoliatedChart& chart = d.charts.front();
    std::vector<std::complex<double>> zp(static_cast<std::size_t>(chart.leaf_dim()));
    for (int j = 0; j < chart.leaf_dim(); ++j)
      zp[static_cast<std::size_t>(j)] = {chart.range.re_box[static_cast<std::size_t>(j)].mid(),
                                         chart.range.im_box[static_cast<std::size_t>(j)].mid()};
    const double t = chart.range.t_range.mid();
    CPoint p = chart.embed(zp, t);
    const CPoint nu = grad_inner_normal(d.delta, p);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] += 0.05 * nu[k];
    d.interior_point = std::move(p);
  } else {
    d.interior_point.assign(static_cast<std::size_t>(spec.dimension), {0.0, 0.0});
  }

  if (!skip_validation) {
    const ValidationReport rep = validate_domain(d);
    if (!rep.ok()) {
      std::string msg = "registration of '" + d.name + "' failed:";
      for (const auto& issue : rep.issues) msg += "\n  - " + issue;
      throw RegistrationError(msg);
    }
  }
  return d;
}

Domain register_user_domain(std::string_view delta_source, std::string_view chart_zeta,
                            int dimension) {
  RegistrationSpec spec;
  spec.name = "user";
  spec.dimension = dimension;
  spec.delta_source = std::string(delta_source);
  if (!chart_zeta.empty()) spec.chart_zeta = std::string(chart_zeta);
  return register_user_domain(spec);
}

Catalog::Catalog() {
  for (const std::string& name : builtin_names())
    entries_.emplace_back(name, std::make_shared<const Domain>(builtin_domain(name)));
}

std::shared_ptr<const Domain> Catalog::find(const std::string& name) const {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [n, d] : entries_)
    if (n == name) return d;
  return nullptr;
}

std::shared_ptr<const Domain> Catalog::add(Domain d) {
  std::lock_guard<std::mutex> lock(mu_);
  for (const auto& [n, _] : entries_)
    if (n == d.name) throw DomainError("domain '" + d.name + "' is already registered");
  auto ptr = std::make_shared<const Domain>(std::move(d));
  entries_.emplace_back(ptr->name, ptr);
  return ptr;
}

std::vector<std::string> Catalog::names() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> out;
  for (const auto& [n, _] : entries_) out.push_back(n);
  return out;
}

}  // namespace levidf
