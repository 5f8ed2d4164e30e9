#pragma once

#include "levidf/complexdiff.hpp"
#include "levidf/cplx.hpp"
#include "levidf/expr.hpp"
#include "levidf/finite_diff.hpp"
#include "levidf/jet.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace levidf {

using CPoint = std::vector<std::complex<double>>;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RegistrationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A real-valued function of n complex variables evaluable at plain points,
/// under second-order jets, and under jets with two extra first-order tangent
/// slots (used to differentiate the field's normal derivative along leaves).
/// Value-semantic: copies share the underlying callable.
class ScalarField {
 public:
  ScalarField() = default;

  int dimension() const { return n_; }
  bool valid() const { return static_cast<bool>(f_jet_); }

  double value(std::span<const std::complex<double>> z) const;
  Jet jet(std::span<const Cplx<Jet>> z) const { return f_jet_(z).re; }
  TJet<2> tjet2(std::span<const Cplx<TJet<2>>> z) const { return f_tjet_(z).re; }

  template <class F>
  static ScalarField from_callable(int n, F f) {
    ScalarField s;
    s.n_ = n;
    s.f_val_ = [f](std::span<const Cplx<double>> z) { return f(z); };
    s.f_jet_ = [f](std::span<const Cplx<Jet>> z) { return f(z); };
    s.f_tjet_ = [f](std::span<const Cplx<TJet<2>>> z) { return f(z); };
    return s;
  }

 private:
  int n_ = 0;
  std::function<Cplx<double>(std::span<const Cplx<double>>)> f_val_;
  std::function<Cplx<Jet>(std::span<const Cplx<Jet>>)> f_jet_;
  std::function<Cplx<TJet<2>>(std::span<const Cplx<TJet<2>>>)> f_tjet_;
};

ScalarField field_from_expr(Expr e);
ScalarField scaled_field(ScalarField base, double c);

/// Full ambient jet of a field at a plain point (all 2n real coordinates
/// seeded, in the order x1, y1, ..., xn, yn).
Jet field_jet(const ScalarField& f, std::span<const std::complex<double>> z);
WirtingerJet field_wirtinger(const ScalarField& f, std::span<const std::complex<double>> z);

/// Value-only evaluation over stacked real coordinates, for the
/// finite-difference oracle.
RealFn field_real_fn(ScalarField f);

/// Unit inner normal direction derived from the gradient of delta (complex
/// representation of the real vector grad delta, normalized).
CPoint grad_inner_normal(const ScalarField& f, std::span<const std::complex<double>> z);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
  double len() const { return hi - lo; }
  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
};

struct ChartRange {
  std::vector<Interval> re_box;  // one per leaf coordinate
  std::vector<Interval> im_box;
  Interval t_range;

  bool contains(std::span<const std::complex<double>> zprime, double t,
                double slack = 0.0) const;
};

using ChartFn =
    std::function<Cplx<TJet<1>>(std::span<const Cplx<TJet<1>>>, const TJet<1>&)>;
using NormalFn = std::function<CPoint(std::span<const std::complex<double>>, double)>;

/// Reparametrization of the transverse parameter, evaluated with a tangent
/// slot so its derivative rides along.
using Reparam = std::function<TJet<1>(const TJet<1>&)>;

/// Foliated-chart parametrization phi(z', t) = (z', zeta(z', t)) of a piece of
/// a Levi-flat boundary: zeta holomorphic in z', t the transverse parameter.
class FoliatedChart {
 public:
  int ambient_dim = 0;
  ChartRange range;
  ChartFn zeta_map;
  NormalFn inner_normal;  // analytic inner normal; may be empty

  int leaf_dim() const { return ambient_dim - 1; }

  /// zeta and dzeta/dt at a plain point.
  std::pair<std::complex<double>, std::complex<double>> zeta_dt(
      std::span<const std::complex<double>> zprime, double t) const;

  /// zeta and dzeta/dt carrying second-order jets in the 2(n-1) leaf reals.
  std::pair<Cplx<Jet>, Cplx<Jet>> zeta_leaf_jets(
      std::span<const std::complex<double>> zprime, double t) const;

  /// phi(z', t) as an ambient point.
  CPoint embed(std::span<const std::complex<double>> zprime, double t) const;
};

FoliatedChart chart_from_expr(int ambient_dim, Expr zeta, ChartRange range,
                              NormalFn normal = {});

/// Chart with transverse parameter substituted: zeta_B(z', t) = zeta_A(z', rho(t)).
FoliatedChart reparametrize_t(const FoliatedChart& a, Reparam rho, Interval new_t_range);

struct Domain {
  std::string name;
  int dimension = 0;
  bool levi_flat = false;
  ScalarField delta;
  std::vector<FoliatedChart> charts;
  CPoint interior_point;
  double collar_max = 0.5;  // sweep samples stay inside 0 < delta < collar_max
};

/// Built-in catalog: ball_1..ball_4, product_bidisk, disk_bundle.
Domain builtin_domain(const std::string& name);
std::vector<std::string> builtin_names();

Domain with_scaled_delta(const Domain& d, double c);

struct ValidationReport {
  std::vector<std::string> issues;
  double max_delta_on_chart = 0.0;
  double min_grad_norm = 0.0;
  double max_antiholomorphic = 0.0;
  double max_leaf_levi = 0.0;
  bool ok() const { return issues.empty(); }
};

ValidationReport validate_domain(const Domain& d, int grid_pts = 5);

struct DistinguishedReport {
  double max_leaf_residual = 0.0;  // |zeta(z', t0)| after affine recentering
  double max_dt_residual = 0.0;    // |dzeta/dt(z', t0) - 1| after recentering
  bool orientation_ok = true;
  bool pass() const { return max_leaf_residual < 1e-6 && max_dt_residual < 1e-6; }
};

/// Checks the distinguished-parametrization normalization at p = phi(z'0, t0):
/// recenters affinely (p to the origin, the leaf tangent through p to
/// {z_n = 0}, transverse tangent rotated onto the positive real axis) and
/// reports the residuals |zeta(z', t0)| and |dzeta/dt(z', t0) - 1| on a z'
/// grid around z'0.
DistinguishedReport validate_distinguished(const Domain& d, const FoliatedChart& chart,
                                           std::span<const std::complex<double>> zprime0,
                                           double t0, int grid_pts = 5,
                                           double grid_radius = 0.02);

/// Max deviation between the chart's analytic inner normal and the
/// gradient-derived one over a chart grid (both unit vectors).
double normal_consistency(const Domain& d, const FoliatedChart& chart, int grid_pts = 5);

struct RegistrationSpec {
  std::string name;
  int dimension = 0;
  std::string delta_source;
  std::optional<std::string> chart_zeta;
  std::vector<double> chart_range;  // re lo hi, im lo hi per leaf var, then t lo hi
  std::optional<CPoint> interior;
  double collar = 0.5;
};

/// Parses the plain-text registration format (see the CLI manual).
RegistrationSpec parse_registration_text(std::string_view text);

Domain register_user_domain(const RegistrationSpec& spec, bool skip_validation = false);
Domain register_user_domain(std::string_view delta_source, std::string_view chart_zeta,
                            int dimension);

/// Session catalog: built-ins preloaded, user registrations appended behind a
/// lock. Lookups return shared immutable domains; evaluation is lock-free.
class Catalog {
 public:
  Catalog();

  std::shared_ptr<const Domain> find(const std::string& name) const;
  std::shared_ptr<const Domain> add(Domain d);
  std::vector<std::string> names() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::pair<std::string, std::shared_ptr<const Domain>>> entries_;
};

}  // namespace levidf
