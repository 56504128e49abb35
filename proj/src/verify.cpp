#include "pinst/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pinst/errors.hpp"
#include "pinst/numdiff.hpp"

namespace pinst {

Thresholds Thresholds::relaxed() {
  Thresholds t;
  t.schlesinger = 1e-5;
  t.drift = 1e-5;
  t.tr_inf = 1e-6;
  t.params = 1e-5;
  t.pvi = 1e-5;
  t.step = 1e-5;
  return t;
}

Thresholds Thresholds::with_override(double tol) const {
  Thresholds t = *this;
  t.schlesinger = t.drift = t.tr_inf = t.params = t.pvi = t.step = t.boundary = tol;
  return t;
}

ProfileTriple instanton_profile(int n) {
  const int m = std::abs(n);
  if (m % 2 == 0) throw Error(ErrorKind::InvalidArgument, "n must be odd");
  if (m == 1) return ProfileTriple::closed_form(ProfileKind::ClosedFormTrivial);
  if (m == 3) return ProfileTriple::closed_form(ProfileKind::ClosedFormEminus3).with_global_negation();
  BvpConfig cfg;
  cfg.n = n;
  return solve_bvp(cfg).profile;
}

PviJet y_jet_at(const ProfileTriple& p, double t, Branch branch, double h) {
  PviSample s;
  s.coordinate = StencilCoordinate::LogXMinusOne;
  const double step = h * t * (1.0 - t);
  for (int j = -2; j <= 2; ++j) {
    double tj = t + j * step;
    FuchsianData f = fuchsian_data(p, tj);
    s.points.push_back({tj, f.x, extract_y(f, branch)});
  }
  return pvi_jet(s, 2);
}

namespace {

double variant_delta(int m, DeltaVariant v) { return params_from_n(m, v, Branch::Plus).delta.real(); }

DeltaVariant other(DeltaVariant v) { return v == DeltaVariant::Intro ? DeltaVariant::Theorem : DeltaVariant::Intro; }

void add_upper(VerifyReport& r, std::string name, double value, double threshold) {
  r.checks.push_back({std::move(name), value, threshold, false, std::isfinite(value) && value < threshold});
}

void add_lower(VerifyReport& r, std::string name, double value, double threshold) {
  r.checks.push_back({std::move(name), value, threshold, true, std::isfinite(value) && value > threshold});
}

double lerp(double a, double b, double s) { return a + (b - a) * s; }

}  // namespace

VerifyReport run_verification(const VerifyConfig& cfg) {
  if (!(cfg.t_min > 0.0 && cfg.t_min < cfg.t_max && cfg.t_max < 1.0))
    throw Error(ErrorKind::InvalidArgument, "need 0 < t_min < t_max < 1");
  if (cfg.samples < 5) throw Error(ErrorKind::InvalidArgument, "need at least 5 samples");
  const int m = std::abs(cfg.n);
  const double n2 = double(m) * m;

  VerifyReport r;
  r.n = cfg.n;
  ProfileTriple profile = instanton_profile(cfg.n);
  const bool numeric = profile.kind() == ProfileKind::NumericGrid;
  Thresholds th = cfg.thresholds ? *cfg.thresholds : (numeric ? Thresholds::relaxed() : Thresholds::strict());
  r.source = to_string(profile.kind());
  if (profile.globally_negated()) r.source += " (globally negated)";
  r.raw_a2_at_one = profile.raw_a2_at_one();

  r.ts = logit_nodes(cfg.t_min, cfg.t_max, static_cast<std::size_t>(cfg.samples));
  FuchsianFamily fam = build_family(profile, r.ts, r.source);
  const std::size_t len = fam.samples.size();
  for (const auto& f : fam.samples) r.xs.push_back(f.x);

  for (std::size_t k = 2; k + 2 < len; ++k) {
    SchlesingerCheck c = schlesinger_check(fam, k);
    r.schlesinger_max_residual = std::max(r.schlesinger_max_residual, c.relative);
    r.schlesinger_max_absolute = std::max(r.schlesinger_max_absolute, c.absolute);
  }
  r.drift = isospectral_drift(fam);
  {
    double acc = 0.0;
    for (const auto& f : fam.samples) acc += trace_sq(f.Ainf()).real();
    r.tr_inf = acc / double(len);
  }

  // parameters along the family
  double beta = 0.0, gamma = 0.0, delta = 0.0, beta_dev = 0.0, gamma_dev = 0.0;
  std::vector<double> deltas;
  for (const auto& f : fam.samples) {
    PviParams p = jimbo_miwa_params(f, Branch::Plus);
    beta += p.beta.real();
    gamma += p.gamma.real();
    delta += p.delta.real();
    beta_dev = std::max(beta_dev, std::abs(p.beta + n2 / 8.0));
    gamma_dev = std::max(gamma_dev, std::abs(p.gamma - n2 / 8.0));
    deltas.push_back(p.delta.real());
  }
  r.beta = beta / double(len);
  r.gamma = gamma / double(len);
  r.delta = delta / double(len);
  const double d_intro = variant_delta(m, DeltaVariant::Intro), d_theorem = variant_delta(m, DeltaVariant::Theorem);
  r.delta_measured = std::abs(r.delta - d_intro) <= std::abs(r.delta - d_theorem) ? DeltaVariant::Intro : DeltaVariant::Theorem;
  const double d_sel = variant_delta(m, r.delta_measured), d_rej = variant_delta(m, other(r.delta_measured));
  for (double d : deltas) r.delta_spread = std::max(r.delta_spread, std::abs(d - d_sel));
  r.delta_used = cfg.delta == DeltaChoice::Auto      ? r.delta_measured
                 : cfg.delta == DeltaChoice::Intro   ? DeltaVariant::Intro
                                                     : DeltaVariant::Theorem;
  const double delta_used = cfg.delta == DeltaChoice::Auto ? r.delta : variant_delta(m, r.delta_used);
  const double delta_rejected = variant_delta(m, other(r.delta_used));

  const double alpha_p = (m + 2.0) * (m + 2.0) / 8.0, alpha_m = (m - 2.0) * (m - 2.0) / 8.0;
  const double ta = lerp(cfg.t_min, cfg.t_max, 0.35 / 0.9), tb = lerp(cfg.t_min, cfg.t_max, 0.45 / 0.9);
  double alpha_dev = 0.0;
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    BranchReport br;
    br.branch = b;
    br.lambda = branch_eigenvalue(fam.samples[len / 2], b);
    double acc = 0.0;
    std::vector<double> alphas;
    for (const auto& f : fam.samples) {
      double a = jimbo_miwa_params(f, b).alpha.real();
      alphas.push_back(a);
      acc += a;
    }
    br.alpha = acc / double(len);
    br.pairs_with_plus = std::abs(br.alpha - alpha_p) < std::abs(br.alpha - alpha_m);
    br.alpha_target = br.pairs_with_plus ? alpha_p : alpha_m;
    for (double a : alphas) alpha_dev = std::max(alpha_dev, std::abs(a - br.alpha_target));
    (br.pairs_with_plus ? r.alpha_plus : r.alpha_minus) = br.alpha;

    PviSample s;
    s.coordinate = StencilCoordinate::LogXMinusOne;
    for (const auto& f : fam.samples) s.points.push_back({f.t, f.x, extract_y(f, b)});
    br.y = s.points;
    PviParams ok{br.alpha, r.beta, r.gamma, delta_used};
    PviParams bad = ok;
    bad.delta = delta_rejected;
    br.pvi_rejected_max = 0.0;
    for (std::size_t k = 2; k + 2 < len; ++k) {
      br.pvi_max = std::max(br.pvi_max, pvi_scaled_residual(s, ok, k));
      br.pvi_rejected_max = std::max(br.pvi_rejected_max, pvi_scaled_residual(s, bad, k));
      PviJet j = pvi_jet(s, k);
      PviSample step = pvi_integrate(ok, s.points[k].x, j.y, j.yp, s.points[k + 1].x);
      br.step_max = std::max(br.step_max, std::abs(step.points.back().y - s.points[k + 1].y));
    }
    PviJet seed = y_jet_at(profile, ta, b);
    FuchsianData fb = fuchsian_data(profile, tb);
    Complex yb = extract_y(fb, b);
    Complex x0 = fuchsian_data(profile, ta).x;
    br.long_accepted = std::abs(pvi_integrate(ok, x0, seed.y, seed.yp, fb.x).points.back().y - yb);
    try {
      br.long_rejected = std::abs(pvi_integrate(bad, x0, seed.y, seed.yp, fb.x).points.back().y - yb);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularityEncountered) throw;
      br.long_rejected = std::numeric_limits<double>::infinity();
    }
    r.branches.push_back(std::move(br));
  }

  if (numeric) {
    Real3 a0 = profile.value(0.0), a1 = profile.value(1.0);
    const double n_signed = cfg.n;
    r.boundary_defect = std::max({std::abs(a0[0] - 1.0), std::abs(a1[0]), std::abs(a1[1] + n_signed), std::abs(a1[2])});
  }

  add_upper(r, "schlesinger_residual", r.schlesinger_max_residual, th.schlesinger);
  add_upper(r, "isospectral_drift", *std::max_element(r.drift.begin(), r.drift.end()), th.drift);
  add_upper(r, "tr_inf_squared", std::abs(r.tr_inf - n2 / 8.0), th.tr_inf);
  const bool paired = r.branches[0].pairs_with_plus != r.branches[1].pairs_with_plus;
  add_upper(r, "alpha_branch_pair", paired ? alpha_dev : std::numeric_limits<double>::infinity(), th.params);
  add_upper(r, "beta", beta_dev, th.params);
  add_upper(r, "gamma", gamma_dev, th.params);
  const bool separated = std::abs(r.delta - d_rej) > th.params;
  add_upper(r, "delta_selection", separated ? r.delta_spread : std::numeric_limits<double>::infinity(), th.params);
  double pvi = 0.0, pvi_rej = std::numeric_limits<double>::infinity(), step = 0.0, lacc = 0.0,
         lrej = std::numeric_limits<double>::infinity();
  for (const auto& b : r.branches) {
    pvi = std::max(pvi, b.pvi_max);
    pvi_rej = std::min(pvi_rej, b.pvi_rejected_max);
    step = std::max(step, b.step_max);
    lacc = std::max(lacc, b.long_accepted);
    lrej = std::min(lrej, b.long_rejected);
  }
  add_upper(r, "pvi_residual", pvi, th.pvi);
  add_lower(r, "pvi_residual_rejected_delta", pvi_rej, th.discriminate);
  add_upper(r, "pvi_step_agreement", step, th.step);
  add_upper(r, "pvi_long_agreement", lacc, th.step);
  add_lower(r, "pvi_long_rejected_delta", lrej, th.discriminate);
  if (r.boundary_defect) add_upper(r, "boundary_data", *r.boundary_defect, th.boundary);
  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
  return r;
}

}  // namespace pinst
