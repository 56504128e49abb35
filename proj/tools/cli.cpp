// painleve-instanton: batch front-end for profiles, twistor/PVI traces and verification runs.
//
//   painleve-instanton profile --n 5 --samples 201 --out prof.csv
//   painleve-instanton trace --n 3 --format json
//   painleve-instanton verify --n 3 --out report.json
//   painleve-instanton pvi-integrate --n 3 --t-min 0.4 --t-max 0.5
//
// Exit codes: 0 ok, 1 bad configuration, 2 solver did not converge, 3 I/O failure,
// 4 verification failed, 5 any other numerical error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "pinst/errors.hpp"
#include "pinst/numdiff.hpp"
#include "pinst/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace pinst;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNoConvergence = 2, kIo = 3, kVerifyFailed = 4, kModule = 5 };

enum class Level { Error = 0, Info = 1, Debug = 2 };
Level g_level = Level::Error;

void log(Level l, const std::string& msg) {
  if (l > g_level) return;
  static const char* names[] = {"error", "info", "debug"};
  std::cerr << "[" << names[static_cast<int>(l)] << "] " << msg << "\n";
}

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n = 3;
  double t_min = 0.05, t_max = 0.95;
  int samples = 101;
  std::optional<double> tol;
  std::string out;
  std::string format = "csv";
  std::string delta_variant = "auto";
  std::string branch = "plus";
};

std::string num(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes next to the target and renames, so a failed run never leaves a partial file.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoFailure("cannot open " + tmp.string());
    f << content;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoFailure("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoFailure("cannot move output into place at " + target.string());
  }
  log(Level::Info, "wrote " + target.string());
}

std::string with_suffix(const std::string& path, const std::string& tag) {
  fs::path p(path);
  fs::path out = p.parent_path() / (p.stem().string() + "." + tag + p.extension().string());
  return out.string();
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const TracelessMat2& a) {
  return json::array({json::array({complex_json(a(0, 0)), complex_json(a(0, 1))}),
                      json::array({complex_json(a(1, 0)), complex_json(a(1, 1))})});
}

DeltaChoice delta_choice(const std::string& s) {
  if (s == "intro") return DeltaChoice::Intro;
  if (s == "theorem") return DeltaChoice::Theorem;
  return DeltaChoice::Auto;
}

std::string sign_convention(const ProfileTriple& p) {
  switch (p.kind()) {
    case ProfileKind::ClosedFormTrivial: return "fixed point of both duality signs";
    case ProfileKind::ClosedFormEminus3: return "anti-self-dual; closed form with all three signs reversed";
    case ProfileKind::ClosedFormHopfSD: return "self-dual";
    case ProfileKind::NumericGrid: return "anti-self-dual; a1(0)=1, a2(1)=-n, a1(1)=a3(1)=0";
  }
  return "";
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = a + (b - a) * double(k) / double(n - 1);
  return t;
}

// ------------------------------------------------------------------ commands

int cmd_profile(const RunConfig& cfg) {
  ProfileTriple p = instanton_profile(cfg.n);
  std::vector<double> ts = linspace(cfg.t_min, cfg.t_max, cfg.samples);
  std::string body;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "t,a1,a2,a3\n";
    for (double t : ts) {
      Real3 a = p.value(t);
      os << num(t) << ',' << num(a[0]) << ',' << num(a[1]) << ',' << num(a[2]) << '\n';
    }
    body = os.str();
  } else {
    json pts = json::array();
    for (double t : ts) {
      Real3 a = p.value(t);
      pts.push_back({{"t", t}, {"a1", a[0]}, {"a2", a[1]}, {"a3", a[2]}});
    }
    json doc = {{"n", cfg.n},
                {"kind", to_string(p.kind())},
                {"sign_convention", sign_convention(p)},
                {"raw_a2_at_one", p.raw_a2_at_one()},
                {"points", pts}};
    body = doc.dump(2) + "\n";
  }
  write_output(cfg.out, body);
  return kOk;
}

struct PviTrace {
  PviParams params;
  DeltaVariant variant;
  PviSample sample;
  std::vector<std::optional<double>> residual;
};

PviParams family_params(const FuchsianData& f, Branch b, int n, DeltaChoice choice, DeltaVariant& variant) {
  PviParams p = jimbo_miwa_params(f, b);
  const int m = std::abs(n);
  double di = params_from_n(m, DeltaVariant::Intro, b).delta.real();
  double dt = params_from_n(m, DeltaVariant::Theorem, b).delta.real();
  if (choice == DeltaChoice::Auto) {
    variant = std::abs(p.delta.real() - di) <= std::abs(p.delta.real() - dt) ? DeltaVariant::Intro : DeltaVariant::Theorem;
  } else {
    variant = choice == DeltaChoice::Intro ? DeltaVariant::Intro : DeltaVariant::Theorem;
    p.delta = variant == DeltaVariant::Intro ? di : dt;
  }
  return p;
}

PviTrace pvi_trace(const FuchsianFamily& fam, Branch b, const RunConfig& cfg) {
  PviTrace tr;
  tr.params = family_params(fam.samples[fam.samples.size() / 2], b, cfg.n, delta_choice(cfg.delta_variant), tr.variant);
  tr.sample.coordinate = StencilCoordinate::LogXMinusOne;
  for (const auto& f : fam.samples) tr.sample.points.push_back({f.t, f.x, extract_y(f, b)});
  const std::size_t len = tr.sample.points.size();
  for (std::size_t k = 0; k < len; ++k)
    tr.residual.push_back(k >= 2 && k + 2 < len ? std::optional<double>(std::abs(pvi_residual(tr.sample, tr.params, k)))
                                                : std::nullopt);
  return tr;
}

std::string pvi_csv(const PviTrace& tr) {
  std::ostringstream os;
  os << "t,x_re,x_im,y_re,y_im,residual_abs\n";
  for (std::size_t k = 0; k < tr.sample.points.size(); ++k) {
    const auto& q = tr.sample.points[k];
    os << num(q.t) << ',' << num(q.x.real()) << ',' << num(q.x.imag()) << ',' << num(q.y.real()) << ','
       << num(q.y.imag()) << ',' << (tr.residual[k] ? num(*tr.residual[k]) : "") << '\n';
  }
  return os.str();
}

json params_json(const PviParams& p) {
  return {{"alpha", p.alpha.real()}, {"beta", p.beta.real()}, {"gamma", p.gamma.real()}, {"delta", p.delta.real()}};
}

json pvi_json(const PviTrace& tr, Branch b) {
  json pts = json::array();
  for (std::size_t k = 0; k < tr.sample.points.size(); ++k) {
    const auto& q = tr.sample.points[k];
    pts.push_back({{"t", q.t},
                   {"x_re", q.x.real()},
                   {"x_im", q.x.imag()},
                   {"y_re", q.y.real()},
                   {"y_im", q.y.imag()},
                   {"residual_abs", tr.residual[k] ? json(*tr.residual[k]) : json(nullptr)}});
  }
  return {{"branch", to_string(b)}, {"params", params_json(tr.params)}, {"delta_variant", to_string(tr.variant)},
          {"points", pts}};
}

int cmd_trace(const RunConfig& cfg) {
  ProfileTriple p = instanton_profile(cfg.n);
  std::vector<double> ts = logit_nodes(cfg.t_min, cfg.t_max, static_cast<std::size_t>(cfg.samples));
  FuchsianFamily fam = build_family(p, ts, to_string(p.kind()));
  std::vector<LineGeometry> geo;
  for (double t : ts) geo.push_back(poles(t));
  PviTrace plus = pvi_trace(fam, Branch::Plus, cfg), minus = pvi_trace(fam, Branch::Minus, cfg);

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "t,x_re,x_im,mu_plus,mu_minus,mu_product,trA0sq,trA1sq,trAxsq,trAinfsq\n";
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const auto& f = fam.samples[k];
      os << num(f.t) << ',' << num(f.x.real()) << ',' << num(f.x.imag()) << ',' << num(geo[k].mu_plus) << ','
         << num(geo[k].mu_minus) << ',' << num(geo[k].mu_plus * geo[k].mu_minus);
      for (int q = 0; q < 4; ++q) os << ',' << num(trace_sq(f.A[q]).real());
      os << '\n';
    }
    write_output(cfg.out, os.str());
    if (!cfg.out.empty()) {
      write_output(with_suffix(cfg.out, "pvi-plus"), pvi_csv(plus));
      write_output(with_suffix(cfg.out, "pvi-minus"), pvi_csv(minus));
    }
    return kOk;
  }
  json rows = json::array();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto& f = fam.samples[k];
    rows.push_back({{"t", f.t},
                    {"x", {{"re", f.x.real()}, {"im", f.x.imag()}}},
                    {"mu_plus", geo[k].mu_plus},
                    {"mu_minus", geo[k].mu_minus},
                    {"mu_product", geo[k].mu_plus * geo[k].mu_minus},
                    {"trA0sq", trace_sq(f.A0()).real()},
                    {"trA1sq", trace_sq(f.A1()).real()},
                    {"trAxsq", trace_sq(f.Ax()).real()},
                    {"trAinfsq", trace_sq(f.Ainf()).real()},
                    {"residues",
                     {{"p0", matrix_json(f.A0())},
                      {"p1", matrix_json(f.A1())},
                      {"px", matrix_json(f.Ax())},
                      {"pinf", matrix_json(f.Ainf())}}}});
  }
  json doc = {{"n", cfg.n},
              {"source", to_string(p.kind())},
              {"twistor", rows},
              {"pvi", {{"plus", pvi_json(plus, Branch::Plus)}, {"minus", pvi_json(minus, Branch::Minus)}}}};
  write_output(cfg.out, doc.dump(2) + "\n");
  return kOk;
}

json report_json(const VerifyReport& r, const RunConfig& cfg) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"bound", c.lower_bound ? "lower" : "upper"},
                      {"pass", c.pass}});
  json branches = json::array();
  for (const auto& b : r.branches)
    branches.push_back({{"branch", to_string(b.branch)},
                        {"lambda", complex_json(b.lambda)},
                        {"alpha", b.alpha},
                        {"pairs_with", b.pairs_with_plus ? "alpha_plus" : "alpha_minus"},
                        {"pvi_max_residual", b.pvi_max},
                        {"pvi_max_residual_rejected_delta", b.pvi_rejected_max},
                        {"pvi_step_max", b.step_max},
                        {"pvi_long_agreement", b.long_accepted},
                        {"pvi_long_rejected_delta", b.long_rejected}});
  auto ys = [](const BranchReport& b) {
    json out = json::array();
    for (const auto& q : b.y)
      out.push_back({{"x_re", q.x.real()}, {"x_im", q.x.imag()}, {"y_re", q.y.real()}, {"y_im", q.y.imag()}});
    return out;
  };
  json doc = {{"n", r.n},
              {"pass", r.pass},
              {"source", r.source},
              {"raw_a2_at_one", r.raw_a2_at_one},
              {"t_min", cfg.t_min},
              {"t_max", cfg.t_max},
              {"samples", cfg.samples},
              {"schlesinger_max_residual", r.schlesinger_max_residual},
              {"schlesinger_max_absolute", r.schlesinger_max_absolute},
              {"isospectral_drift", r.drift},
              {"tr_inf_squared", r.tr_inf},
              {"params",
               {{"alpha_plus", r.alpha_plus},
                {"alpha_minus", r.alpha_minus},
                {"beta", r.beta},
                {"gamma", r.gamma},
                {"delta", r.delta}}},
              {"delta_variant",
               {{"measured", to_string(r.delta_measured)},
                {"used", to_string(r.delta_used)},
                {"spread", r.delta_spread}}},
              {"branches", branches},
              {"y_samples", ys(r.branches[0])},
              {"y_samples_minus", ys(r.branches[1])}};
  if (r.boundary_defect) doc["boundary_defect"] = *r.boundary_defect;
  doc["checks"] = checks;
  return doc;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyConfig vc;
  vc.n = cfg.n;
  vc.t_min = cfg.t_min;
  vc.t_max = cfg.t_max;
  vc.samples = cfg.samples;
  vc.delta = delta_choice(cfg.delta_variant);
  if (cfg.tol) {
    bool numeric = std::abs(cfg.n) != 1 && std::abs(cfg.n) != 3;
    vc.thresholds = (numeric ? Thresholds::relaxed() : Thresholds::strict()).with_override(*cfg.tol);
  }
  VerifyReport r = run_verification(vc);
  for (const auto& c : r.checks)
    log(c.pass ? Level::Debug : Level::Error,
        c.name + " = " + num(c.value) + (c.lower_bound ? " > " : " < ") + num(c.threshold) + (c.pass ? "" : "  FAILED"));
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "name,value,threshold,bound,pass\n";
    for (const auto& c : r.checks)
      os << c.name << ',' << num(c.value) << ',' << num(c.threshold) << ',' << (c.lower_bound ? "lower" : "upper") << ','
         << (c.pass ? "true" : "false") << '\n';
    write_output(cfg.out, os.str());
  } else {
    write_output(cfg.out, report_json(r, cfg).dump(2) + "\n");
  }
  log(Level::Info, std::string("verification ") + (r.pass ? "passed" : "failed"));
  return r.pass ? kOk : kVerifyFailed;
}

// Reseeds at every sample from the family (y and a fine-stencil y') and integrates to the
// next sample's x; the gate is the largest disagreement with the extracted transcendent.
int cmd_pvi_integrate(const RunConfig& cfg) {
  ProfileTriple p = instanton_profile(cfg.n);
  const Branch b = cfg.branch == "minus" ? Branch::Minus : Branch::Plus;
  std::vector<double> ts = logit_nodes(cfg.t_min, cfg.t_max, static_cast<std::size_t>(cfg.samples));
  FuchsianFamily fam = build_family(p, ts, to_string(p.kind()));
  PviTrace tr;
  tr.params = family_params(fam.samples[fam.samples.size() / 2], b, cfg.n, delta_choice(cfg.delta_variant), tr.variant);
  tr.sample.coordinate = StencilCoordinate::LogXMinusOne;
  std::vector<double> mismatch{0.0};
  tr.sample.points.push_back({ts[0], fam.samples[0].x, extract_y(fam.samples[0], b)});
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    PviJet seed = y_jet_at(p, ts[k], b);
    const FuchsianData& next = fam.samples[k + 1];
    Complex y = pvi_integrate(tr.params, fam.samples[k].x, seed.y, seed.yp, next.x).points.back().y;
    tr.sample.points.push_back({ts[k + 1], next.x, y});
    mismatch.push_back(std::abs(y - extract_y(next, b)));
  }
  const std::size_t len = tr.sample.points.size();
  for (std::size_t k = 0; k < len; ++k)
    tr.residual.push_back(k >= 2 && k + 2 < len
                              ? std::optional<double>(std::abs(pvi_residual(tr.sample, tr.params, k)))
                              : std::nullopt);
  const double worst = *std::max_element(mismatch.begin(), mismatch.end());
  const double tol = cfg.tol.value_or(1e-6);
  log(Level::Info, "largest step mismatch against the extracted transcendent: " + num(worst));

  if (cfg.format == "csv") {
    std::string body = pvi_csv(tr);
    std::ostringstream os;
    std::istringstream in(body);
    std::string line;
    std::getline(in, line);
    os << line << ",mismatch\n";
    for (std::size_t k = 0; std::getline(in, line); ++k) os << line << ',' << num(mismatch[k]) << '\n';
    write_output(cfg.out, os.str());
  } else {
    json doc = pvi_json(tr, b);
    for (std::size_t k = 0; k < len; ++k) doc["points"][k]["mismatch"] = mismatch[k];
    doc["n"] = cfg.n;
    doc["max_step_mismatch"] = worst;
    doc["step_tolerance"] = tol;
    write_output(cfg.out, doc.dump(2) + "\n");
  }
  return worst < tol ? kOk : kVerifyFailed;
}

int diagnose(const std::string& kind, const std::string& msg, int code) {
  json d = {{"error", kind}, {"message", msg}, {"exit_code", code}};
  std::cerr << d.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* lv = std::getenv("PAINLEVE_INSTANTON_LOG")) {
    std::string s(lv);
    if (s == "error") g_level = Level::Error;
    else if (s == "info") g_level = Level::Info;
    else if (s == "debug") g_level = Level::Debug;
    else return diagnose("InvalidArgument", "PAINLEVE_INSTANTON_LOG must be error, info or debug", kConfig);
  }

  CLI::App app{"SU(2)-invariant instantons on S^4, their twistor Fuchsian families and Painleve VI"};
  app.require_subcommand(1);
  RunConfig cfg;
  double tol = 0.0;
  std::string verify_format = "json";
  auto add_common = [&](CLI::App* sub, bool with_tol, std::string& format) {
    sub->add_option("--n", cfg.n, "odd instanton number")->default_val(cfg.n);
    sub->add_option("--t-min", cfg.t_min, "first line parameter")->default_val(cfg.t_min);
    sub->add_option("--t-max", cfg.t_max, "last line parameter")->default_val(cfg.t_max);
    sub->add_option("--samples", cfg.samples, "number of samples (>= 5)")->default_val(cfg.samples);
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->default_val(format);
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_option("--delta-variant", cfg.delta_variant, "auto, intro or theorem")
        ->check(CLI::IsMember({"auto", "intro", "theorem"}))
        ->default_val(cfg.delta_variant);
    if (with_tol) sub->add_option("--tol", tol, "replace every pass threshold");
  };
  auto* profile = app.add_subcommand("profile", "profile functions a1, a2, a3 on [t-min, t-max]");
  auto* trace = app.add_subcommand("trace", "cross ratio, pole data, residue traces and y(x)");
  auto* verify = app.add_subcommand("verify", "run the verification suite and emit a report");
  auto* integ = app.add_subcommand("pvi-integrate", "integrate Painleve VI between consecutive samples, reseeded from the family");
  add_common(profile, false, cfg.format);
  add_common(trace, false, cfg.format);
  add_common(verify, true, verify_format);
  add_common(integ, true, cfg.format);
  integ->add_option("--branch", cfg.branch, "eigenvalue branch of A_inf")
      ->check(CLI::IsMember({"plus", "minus"}))
      ->default_val(cfg.branch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  if (verify->parsed()) cfg.format = verify_format;
  for (auto* sub : {verify, integ})
    if (sub->parsed() && sub->count("--tol") > 0) cfg.tol = tol;

  if (!(cfg.t_min > 0.0 && cfg.t_min < cfg.t_max && cfg.t_max < 1.0))
    return diagnose("InvalidArgument", "need 0 < t-min < t-max < 1", kConfig);
  if (cfg.samples < 5) return diagnose("InvalidArgument", "samples must be at least 5", kConfig);
  if (cfg.n % 2 == 0) return diagnose("InvalidArgument", "n must be odd", kConfig);
  if (cfg.tol && !(*cfg.tol > 0.0)) return diagnose("InvalidArgument", "tol must be positive", kConfig);

  try {
    if (profile->parsed()) return cmd_profile(cfg);
    if (trace->parsed()) return cmd_trace(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    return cmd_pvi_integrate(cfg);
  } catch (const IoFailure& e) {
    return diagnose("Io", e.what(), kIo);
  } catch (const Error& e) {
    int code = e.kind() == ErrorKind::NoConvergence ? kNoConvergence
               : e.kind() == ErrorKind::InvalidArgument ? kConfig
                                                        : kModule;
    return diagnose(to_string(e.kind()), e.what(), code);
  } catch (const std::exception& e) {
    return diagnose("Internal", e.what(), kModule);
  }
}
