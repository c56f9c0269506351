#include "lax/runner.hpp"

#include <cstdio>
#include <filesystem>

#include "lax/spectral.hpp"

namespace lax {

namespace {

Family family_from_string(const std::string& s, const std::string& path) {
  if (s == "A" || s == "gl") return Family::A;
  if (s == "B") return Family::B;
  if (s == "C") return Family::C;
  if (s == "D") return Family::D;
  throw ConfigError(path, "family must be one of A, B, C, D");
}

InvariantKind kind_from_string(const std::string& s, const std::string& path) {
  if (s == "trace_power") return InvariantKind::TracePower;
  if (s == "char_coeff") return InvariantKind::CharCoeff;
  if (s == "det") return InvariantKind::Det;
  if (s == "pfaffian") return InvariantKind::Pfaffian;
  throw ConfigError(path, "unknown invariant kind '" + s + "'");
}

std::string kind_name(InvariantKind k) {
  switch (k) {
    case InvariantKind::TracePower: return "trace_power";
    case InvariantKind::CharCoeff: return "char_coeff";
    case InvariantKind::Det: return "det";
    case InvariantKind::Pfaffian: return "pfaffian";
  }
  return "?";
}

}  // namespace

AlgebraSpec ExperimentConfig::algebra() const { return make_algebra(family, n); }

ConfigPtr ExperimentConfig::lax_config() const {
  AlgebraSpec alg = algebra();
  int d = alg.dim_rep;
  std::vector<std::pair<Complex, IntVector>> ty;
  std::vector<Matrix> conj;
  for (const auto& t : tyurin) {
    IntVector h;
    if (t.h.size() == d) {
      h = t.h;
    } else if (static_cast<int>(t.h.size()) == n) {
      h = IntVector::Zero(d);
      for (int i = 0; i < n; ++i) {
        h(i) = t.h(i);
        h(d - 1 - i) = -t.h(i);
      }
    } else {
      throw ConfigError("tyurin.h", "length must be n or the representation dimension");
    }
    ty.emplace_back(t.z, h);
    if (t.conjugator_seed == 0) {
      conj.push_back(Matrix::Identity(d, d));
    } else {
      Rng rng(t.conjugator_seed);
      conj.push_back(random_group_element(alg, rng, 0.2));
    }
  }
  return make_config(alg, punctures, ty, conj);
}

ExperimentConfig parse_experiment(const Json& j) {
  if (!j.is_object()) throw ConfigError("$", "top level must be an object");
  ExperimentConfig cfg;
  if (!j.contains("algebra") || !j["algebra"].is_object())
    throw ConfigError("algebra", "missing algebra object");
  cfg.family = family_from_string(j["algebra"].value("family", std::string()), "algebra.family");
  if (!j["algebra"].contains("n") || !j["algebra"]["n"].is_number_integer())
    throw ConfigError("algebra.n", "missing integer rank");
  cfg.n = j["algebra"]["n"].get<int>();
  if (cfg.n < 1 || cfg.n > 6) throw ConfigError("algebra.n", "rank out of range [1, 6]");

  for (size_t i = 0; i < j.value("punctures", Json::array()).size(); ++i) {
    const Json& e = j["punctures"][i];
    std::string path = "punctures[" + std::to_string(i) + "]";
    Puncture p;
    p.z = complex_from_json(e, path);
    p.mult = e.value("mult", 1);
    if (p.mult < 1) throw ConfigError(path + ".mult", "multiplicity must be >= 1");
    cfg.punctures.push_back(p);
  }
  for (size_t i = 0; i < j.value("tyurin", Json::array()).size(); ++i) {
    const Json& e = j["tyurin"][i];
    std::string path = "tyurin[" + std::to_string(i) + "]";
    TyurinSpec t;
    t.z = complex_from_json(e, path);
    if (!e.contains("h") || !e["h"].is_array())
      throw ConfigError(path + ".h", "missing integer diagonal");
    t.h = IntVector(e["h"].size());
    for (size_t k = 0; k < e["h"].size(); ++k) {
      if (!e["h"][k].is_number_integer())
        throw ConfigError(path + ".h[" + std::to_string(k) + "]", "entries must be integers");
      t.h(static_cast<int>(k)) = e["h"][k].get<int>();
    }
    t.conjugator_seed = e.value("conjugator_seed", 0ull);
    cfg.tyurin.push_back(t);
  }
  for (size_t i = 0; i < j.value("flows", Json::array()).size(); ++i) {
    const Json& e = j["flows"][i];
    std::string path = "flows[" + std::to_string(i) + "]";
    FlowSpec f;
    if (!e.contains("invariant") || !e["invariant"].is_object())
      throw ConfigError(path + ".invariant", "missing invariant object");
    f.chi.kind = kind_from_string(e["invariant"].value("kind", std::string()),
                                  path + ".invariant.kind");
    f.chi.index = e["invariant"].value("index", 1);
    f.puncture_index = e.value("puncture", 0);
    if (f.puncture_index < 0 || f.puncture_index >= static_cast<int>(cfg.punctures.size()))
      throw ConfigError(path + ".puncture", "puncture index out of range");
    f.m = e.value("m", 0);
    f.t_end = e.value("t_end", 0.5);
    f.dt = e.value("dt", 0.01);
    f.tol = e.value("tol", 1e-8);
    cfg.flows.push_back(f);
  }
  cfg.samples = j.value("samples", 24);
  cfg.seed = j.value("seed", 1ull);
  cfg.out = j.value("out", std::string("."));
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(path, std::string("JSON parse failure: ") + e.what());
  }
  return parse_experiment(j);
}

namespace {

struct Reporter {
  bool quiet = false;
  int status = kExitOk;

  void info(const std::string& s) const {
    if (!quiet) std::printf("%s\n", s.c_str());
  }
  void check(const std::string& name, double measured, double tol) {
    if (measured > tol) {
      std::printf("FAIL %s: measured %.3e tolerance %.3e\n", name.c_str(), measured, tol);
      status = kExitTolerance;
    } else if (!quiet) {
      std::printf("ok   %s: measured %.3e tolerance %.3e\n", name.c_str(), measured, tol);
    }
  }
};

struct Ctx {
  const ExperimentConfig& cfg;
  uint64_t seed;
  double tol;  // 0: defaults
  std::string out;
  Reporter rep;

  double tol_or(double dflt) const { return tol > 0 ? tol : dflt; }
  std::string path(const std::string& name) const { return out + "/" + name; }
};

std::vector<InvariantId> family_invariants(const AlgebraSpec& alg) {
  std::vector<InvariantId> ids;
  ids.push_back({InvariantKind::TracePower, 2});
  ids.push_back({InvariantKind::TracePower, 4});
  for (int i = 1; i <= char_coeff_count(alg); ++i)
    ids.push_back({InvariantKind::CharCoeff, i});
  if (alg.family != Family::B) ids.push_back({InvariantKind::Det, 0});
  if (alg.family == Family::D) ids.push_back({InvariantKind::Pfaffian, 0});
  return ids;
}

int cmd_space(Ctx& c) {
  auto cfg = c.cfg.lax_config();
  LaxBasis basis = build_constraint_system(cfg);
  LaxBasis alt = build_constraint_system_normal_form(cfg);
  c.rep.info("dimension " + std::to_string(basis.dimension()) + " (normal-form route " +
             std::to_string(alt.dimension()) + "), sv_gap " +
             CsvWriter::num(basis.sv_gap));
  CsvWriter csv(c.path("space.csv"), {"index", "singular_value"});
  for (int i = 0; i < basis.singular_values.size(); ++i)
    csv.row({std::to_string(i), CsvWriter::num(basis.singular_values(i))});
  c.rep.check("laxspace.dual_route_dimension",
              std::abs(basis.dimension() - alt.dimension()), 0.5);
  return c.rep.status;
}

int cmd_curve(Ctx& c) {
  auto cfg = c.cfg.lax_config();
  LaxBasis basis = build_constraint_system(cfg);
  LaxElement l = sample_lax(basis, c.seed);
  SpectralCurveData curve = spectral_curve(l, c.cfg.samples, c.seed, c.tol_or(1e-8));
  int d = cfg->alg.dim_rep;
  std::vector<std::string> cols{"q_re", "q_im"};
  for (int j = 1; j <= d; ++j) {
    cols.push_back("r" + std::to_string(j) + "_re");
    cols.push_back("r" + std::to_string(j) + "_im");
  }
  CsvWriter csv(c.path("curve.csv"), cols);
  for (size_t s = 0; s < curve.sample_points.size(); ++s) {
    std::vector<std::string> cells{CsvWriter::num(curve.sample_points[s].real()),
                                   CsvWriter::num(curve.sample_points[s].imag())};
    for (int j = 0; j < d; ++j) {
      cells.push_back(CsvWriter::num(curve.sample_values[s][j].real()));
      cells.push_back(CsvWriter::num(curve.sample_values[s][j].imag()));
    }
    csv.row(cells);
  }
  double worst_fit = 0;
  for (double r : curve.fit_residuals) worst_fit = std::max(worst_fit, r);
  c.rep.check("curve.fit_residual", worst_fit, c.tol_or(1e-8));
  if (cfg->alg.family != Family::A) {
    c.rep.check("curve.involution_defect", involution_defect(l, curve.sample_points),
                c.tol_or(1e-10));
  }
  if (cfg->alg.family == Family::B) {
    double det_sheet = 0, scale = 1e-300;
    for (const auto& vals : curve.sample_values) {
      for (const auto& v : vals) scale = std::max(scale, std::abs(v));
      det_sheet = std::max(det_sheet, std::abs(vals.back()));
    }
    c.rep.check("curve.zero_determinant_sheet", det_sheet / scale, c.tol_or(1e-10));
  }
  for (size_t g = 0; g < cfg->tyurin.size(); ++g)
    c.rep.check("curve.holomorphy_at_tyurin[" + std::to_string(g) + "]",
                holomorphy_at_tyurin(l, static_cast<int>(g)), c.tol_or(1e-9));
  return c.rep.status;
}

int cmd_gradcheck(Ctx& c) {
  AlgebraSpec alg = c.cfg.algebra();
  Rng rng(c.seed);
  CsvWriter csv(c.path("gradcheck.csv"), {"kind", "index", "max_rel_error"});
  for (const auto& id : family_invariants(alg)) {
    double worst = 0;
    for (int t = 0; t < 20; ++t) {
      Matrix l = random_member(alg, rng);
      Matrix cf = grad_invariant(id, l, alg);
      Matrix fd = fd_gradient(id, l, alg, 1e-5);
      worst = std::max(worst, inf_norm(cf - fd) / std::max(1.0, inf_norm(cf)));
    }
    csv.row({kind_name(id.kind), std::to_string(id.index), CsvWriter::num(worst)});
    c.rep.check("gradcheck." + kind_name(id.kind) + "[" + std::to_string(id.index) + "]",
                worst, c.tol_or(1e-6));
  }
  return c.rep.status;
}

FlowSpec default_flow(const ExperimentConfig& cfg, int which) {
  FlowSpec f;
  f.chi = which == 0 ? InvariantId{InvariantKind::TracePower, 2}
                     : InvariantId{InvariantKind::CharCoeff, 1};
  return f;
}

int cmd_mop(Ctx& c) {
  auto cfg = c.cfg.lax_config();
  if (cfg->punctures.empty()) throw ConfigError("punctures", "mop needs a puncture");
  LaxBasis basis = build_constraint_system(cfg);
  LaxElement l = sample_lax(basis, c.seed);
  std::vector<FlowSpec> flows = c.cfg.flows;
  if (flows.empty()) flows.push_back(default_flow(c.cfg, 0));
  Json report = Json::array();
  for (size_t i = 0; i < flows.size(); ++i) {
    MOperator m = build_m_operator(l, {flows[i].chi, flows[i].puncture_index, flows[i].m});
    report.push_back(m_operator_to_json(m));
    std::string tag = "mop[" + std::to_string(i) + "]";
    c.rep.check(tag + ".matching_residual", m.matching_residual, c.tol_or(1e-9));
    c.rep.check(tag + ".tangency_residual", m.tangency_residual, c.tol_or(1e-8));
    for (size_t g = 0; g < m.nu.size(); ++g) {
      auto [nu, m0] = read_tyurin_data(m, static_cast<int>(g));
      c.rep.check(tag + ".nu_consistency[" + std::to_string(g) + "]",
                  std::abs(nu - m.nu[g]) / std::max(1.0, std::abs(nu)), 1e-9);
    }
  }
  std::ofstream(c.path("mop.json")) << report.dump(2) << "\n";
  return c.rep.status;
}

int cmd_flow(Ctx& c) {
  auto cfg = c.cfg.lax_config();
  LaxBasis basis = build_constraint_system(cfg);
  LaxElement l = sample_lax(basis, c.seed);
  std::vector<FlowSpec> flows = c.cfg.flows;
  if (flows.empty()) flows.push_back(default_flow(c.cfg, 0));
  const FlowSpec& f = flows.front();
  FlowDiagnostics diag;
  FlowState s = integrate(initial_state(l), {f.chi, f.puncture_index, f.m}, f.t_end, f.dt,
                          f.tol, &diag);
  CsvWriter csv(c.path("flow.csv"),
                {"t", "r_drift", "membership", "tyurin_form", "h_spectrum_drift", "steps"});
  double worst_drift = 0, worst_form = 0, worst_h = 0;
  for (const auto& cp : diag.checkpoints) {
    csv.row({CsvWriter::num(cp.t), CsvWriter::num(cp.r_drift), CsvWriter::num(cp.membership),
             CsvWriter::num(cp.tyurin_form), CsvWriter::num(cp.h_spectrum_drift),
             std::to_string(cp.steps)});
    worst_drift = std::max(worst_drift, cp.r_drift);
    worst_form = std::max(worst_form, cp.tyurin_form);
    worst_h = std::max(worst_h, cp.h_spectrum_drift);
  }
  std::ofstream(c.path("flow_final.json")) << flow_state_to_json(s).dump(2) << "\n";
  c.rep.check("flow.r_drift", worst_drift, c.tol_or(1e-6));
  if (!cfg->tyurin.empty()) {
    c.rep.check("flow.tyurin_form", worst_form, c.tol_or(1e-7));
    c.rep.check("flow.h_spectrum_drift", worst_h, c.tol_or(1e-9));
  }
  return c.rep.status;
}

int cmd_commute(Ctx& c) {
  auto cfg = c.cfg.lax_config();
  LaxBasis basis = build_constraint_system(cfg);
  LaxElement l = sample_lax(basis, c.seed);
  std::vector<FlowSpec> flows = c.cfg.flows;
  while (flows.size() < 2) flows.push_back(default_flow(c.cfg, static_cast<int>(flows.size())));
  FlowTriple a1{flows[0].chi, flows[0].puncture_index, flows[0].m};
  FlowTriple a2{flows[1].chi, flows[1].puncture_index, flows[1].m};
  double t = std::min(flows[0].t_end, 0.2);
  double dt = flows[0].dt;
  CsvWriter csv(c.path("commute.csv"), {"dt", "discrepancy"});
  std::vector<double> disc;
  for (int level = 0; level < 3; ++level) {
    disc.push_back(commutation_check(initial_state(l), a1, a2, t, dt / (1 << level)));
    csv.row({CsvWriter::num(dt / (1 << level)), CsvWriter::num(disc.back())});
  }
  c.rep.info("discrepancies " + CsvWriter::num(disc[0]) + " " + CsvWriter::num(disc[1]) +
             " " + CsvWriter::num(disc[2]));
  for (int level = 0; level + 1 < 3; ++level) {
    double ratio = disc[level] / std::max(disc[level + 1], 1e-300);
    c.rep.check("commute.refinement_ratio_above_8[" + std::to_string(level) + "]",
                8.0 / ratio, 1.0);
  }
  return c.rep.status;
}

int cmd_baker(Ctx& c) {
  auto cfg = c.cfg.lax_config();
  const AlgebraSpec& alg = cfg->alg;
  LaxBasis basis = build_constraint_system(cfg);
  LaxElement l = sample_lax(basis, c.seed);
  auto pts = curve_sample_points(*cfg, 4 * c.cfg.samples, c.seed + 17);
  CsvWriter csv(c.path("baker.csv"),
                {"q_re", "q_im", "orth_residual", "reconstruction", "membership"});
  double worst_orth = 0, worst_rec = 0, worst_mem = 0;
  int used = 0;
  for (Complex q : pts) {
    if (used >= c.cfg.samples) break;
    Matrix lq = l.evaluate(q);
    EigenFrame frame;
    Matrix psi;
    try {
      frame = eigen_frame(lq, alg);
      psi = orthonormalize(frame.psi, frame.lambda, alg);
    } catch (const NumericalError&) {
      continue;  // branch point or isotropic pivot: move the sample
    }
    ++used;
    double orth = inf_norm(psi.transpose() * alg.sigma * psi - alg.sigma);
    Matrix rec = psi * frame.lambda.asDiagonal() * psi.inverse();
    double recres = inf_norm(rec - lq) / std::max(1.0, inf_norm(lq));
    double mem = membership_residual(rec, alg);
    worst_orth = std::max(worst_orth, orth);
    worst_rec = std::max(worst_rec, recres);
    worst_mem = std::max(worst_mem, mem);
    csv.row({CsvWriter::num(q.real()), CsvWriter::num(q.imag()), CsvWriter::num(orth),
             CsvWriter::num(recres), CsvWriter::num(mem)});
  }
  if (used < c.cfg.samples)
    throw NumericalError("baker: too many irregular sample points");
  c.rep.check("baker.orthonormality", worst_orth, c.tol_or(1e-9));
  c.rep.check("baker.reconstruction", worst_rec, c.tol_or(1e-8));
  c.rep.check("baker.membership", worst_mem, c.tol_or(1e-8));
  return c.rep.status;
}

int cmd_theta(Ctx& c) {
  Rng rng(c.seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  CsvWriter csv(c.path("theta.csv"), {"genus", "evenness", "periodicity", "quasi_periodicity"});
  for (int g = 1; g <= 3; ++g) {
    double even = 0, period = 0, quasi = 0;
    for (int trial = 0; trial < 20; ++trial) {
      ThetaParams p;
      p.genus = g;
      Matrix om(g, g);
      for (int i = 0; i < g; ++i)
        for (int j = 0; j <= i; ++j) {
          Complex v = Complex(u(rng), 0.2 * u(rng));
          om(i, j) = v;
          om(j, i) = v;
        }
      for (int i = 0; i < g; ++i) om(i, i) += Complex(0, 1.2);  // diagonally dominant Im
      p.omega = om;
      Vector z(g);
      for (int i = 0; i < g; ++i) z(i) = Complex(u(rng), 0.5 * u(rng));
      Complex tz = theta(z, p);
      even = std::max(even, std::abs(tz - theta(-z, p)));
      for (int k = 0; k < g; ++k) {
        Vector ek = Vector::Zero(g);
        ek(k) = 1.0;
        period = std::max(period, std::abs(theta(z + ek, p) - tz));
        Vector zs = z + om.col(k);
        Complex factor = std::exp(Complex(0, -M_PI) * om(k, k) + Complex(0, -2.0 * M_PI) * z(k));
        quasi = std::max(quasi, std::abs(theta(zs, p) - factor * tz));
      }
    }
    csv.row({std::to_string(g), CsvWriter::num(even), CsvWriter::num(period),
             CsvWriter::num(quasi)});
    std::string tag = "theta.g" + std::to_string(g);
    c.rep.check(tag + ".evenness", even, c.tol_or(1e-10));
    c.rep.check(tag + ".periodicity", period, c.tol_or(1e-10));
    c.rep.check(tag + ".quasi_periodicity", quasi, c.tol_or(1e-10));
  }
  ThetaParams p1;
  p1.genus = 1;
  p1.omega = Matrix::Constant(1, 1, Complex(0, 1));
  Vector half(1);
  half(0) = Complex(0.5, 0.5);
  c.rep.check("theta.odd_half_period_zero", std::abs(theta(half, p1)), c.tol_or(1e-10));
  return c.rep.status;
}

}  // namespace

int run(const std::string& subcommand, const ExperimentConfig& cfg, const RunOptions& opt) {
  Ctx c{cfg, opt.has_seed ? opt.seed : cfg.seed, opt.tol,
        opt.out.empty() ? cfg.out : opt.out, Reporter{opt.quiet, kExitOk}};
  std::filesystem::create_directories(c.out);
  try {
    if (subcommand == "space") return cmd_space(c);
    if (subcommand == "curve") return cmd_curve(c);
    if (subcommand == "gradcheck") return cmd_gradcheck(c);
    if (subcommand == "mop") return cmd_mop(c);
    if (subcommand == "flow") return cmd_flow(c);
    if (subcommand == "commute") return cmd_commute(c);
    if (subcommand == "baker") return cmd_baker(c);
    if (subcommand == "theta") return cmd_theta(c);
    if (subcommand == "all") {
      int worst = kExitOk;
      for (const char* sub : {"space", "curve", "gradcheck", "mop", "flow", "commute",
                              "baker", "theta"})
        worst = std::max(worst, run(sub, cfg, opt));
      return worst;
    }
    throw ConfigError("subcommand", "unknown subcommand '" + subcommand + "'");
  } catch (const ConfigError& e) {
    std::printf("error: %s\n", e.what());
    return kExitSchema;
  } catch (const LaxError& e) {
    std::printf("numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
}

}  // namespace lax
