#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liewe/almost_abelian.hpp"
#include "liewe/catalog3d.hpp"
#include "liewe/error.hpp"
#include "liewe/liealg.hpp"
#include "liewe/mla.hpp"
#include "liewe/report.hpp"
#include "liewe/riemann.hpp"
#include "liewe/weyl.hpp"

namespace liewe::cli {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string idx(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

inline void add_structure_records(Records& r, const LieAlgebra& L, const ValidityReport& rep) {
  r["algebra.dim"] = static_cast<long long>(L.dim());
  r["algebra.valid"] = rep.ok();
  r["algebra.violation_count"] = static_cast<long long>(rep.violations.size());
  for (std::size_t v = 0; v < rep.violations.size(); ++v) {
    const auto& x = rep.violations[v];
    std::string s = x.kind == Violation::Kind::jacobi ? "jacobi" : "antisymmetry";
    s += " e" + std::to_string(x.i + 1) + " e" + std::to_string(x.j + 1);
    if (x.k >= 0) s += " e" + std::to_string(x.k + 1);
    s += " residual " + format_number(x.magnitude);
    r[idx("algebra.violations", v)] = s;
  }
  if (!rep.ok()) return;
  const auto f = structure_flags(L);
  r["flags.abelian"] = f.abelian;
  r["flags.nilpotent"] = f.nilpotent;
  r["flags.solvable"] = f.solvable;
  r["flags.unimodular"] = f.unimodular;
  r["flags.derived_dim"] = static_cast<long long>(f.derived_dim);
  r["flags.center_dim"] = static_cast<long long>(f.center_dim);
}

inline void add_curvature_records(Records& r, const MetricLieAlgebra& M) {
  const auto lc = levi_civita(M);
  for (int i = 0; i < M.dim(); ++i)
    r["connection.nabla[e" + std::to_string(i + 1) + "]"] = lc.nabla_e(i);
  r["connection.torsion_residual"] = torsion_residual(M, lc);
  r["connection.metric_residual"] = metric_compatibility_residual(M, lc);
  const auto cd = ricci(M);
  const MatrixXd besse = besse_ricci(M);
  r["ricci.trace_route"] = cd.ricci;
  r["ricci.besse_route"] = besse;
  r["ricci.route_difference"] = M.form_norm(cd.ricci - besse);
  r["ricci.scalar"] = cd.scalar;
  r["ricci.spectrum"] = ricci_spectrum(M, cd.ricci);
  const double defect = einstein_defect(M, cd);
  r["einstein.defect"] = defect;
  r["einstein.is_einstein"] = defect <= M.tau_num();
}

inline void add_weyl_records(Records& r, const MetricLieAlgebra& M, const SolveOptions& opt) {
  const auto sol = we_solve(M, opt);
  r["weyl.starts"] = static_cast<long long>(opt.starts);
  r["weyl.seed"] = static_cast<long long>(opt.seed);
  r["weyl.root_threshold"] = sol.root_threshold;
  r["weyl.infimum_residual"] = sol.infimum_residual;
  r["weyl.root_count"] = static_cast<long long>(sol.roots.size());
  for (std::size_t i = 0; i < sol.roots.size(); ++i) {
    const auto F = faraday(M, sol.roots[i]);
    r[idx("weyl.roots", i)] = sol.roots[i].theta;
    r[idx("weyl.residuals", i)] = sol.root_residuals[i];
    r[idx("weyl.closed", i)] = F.closed;
    r[idx("weyl.exact", i)] = F.exact_in_algebra;
  }
}

inline void add_aa_records(Records& r, const MetricLieAlgebra& M, const std::optional<MatrixXd>& hint) {
  const auto D = aa_decompose(M, hint);
  r["aa.b"] = D.b;
  r["aa.h_basis"] = D.h_basis;
  r["aa.A"] = D.A;
  r["aa.S"] = D.S;
  r["aa.unique_ideal"] = D.unique_ideal;
  const auto C = classify_we_aa(D, M);
  r["aa.case"] = std::string(to_string(C.which));
  r["aa.k_or_mu"] = C.k_or_mu;
  r["aa.lee_form_count"] = static_cast<long long>(C.lee_forms.size());
  for (std::size_t i = 0; i < C.lee_forms.size(); ++i) {
    const auto& lee = C.lee_forms[i];
    r[idx("aa.lee_forms", i)] = lee.theta;
    if (lee.theta.norm() <= M.tau_num()) continue;
    const auto verdict = rff_classify(D, M, lee);
    const auto numeric = conformal_flatness_check(M, lee);
    r[idx("aa.rff.ricci_flat", i)] = verdict.ricci_flat;
    r[idx("aa.rff.flat", i)] = verdict.flat;
    r[idx("aa.rff.kn_residual", i)] = numeric.kn_residual;
    if (verdict.flat != numeric.flat || verdict.ricci_flat != numeric.ricci_flat)
      throw Error(Errc::consistency, "eigenvalue criterion and curvature test disagree on flatness");
  }
}

/// "v1,v2,..." with vector components separated by spaces or ':'.
inline MatrixXd parse_ideal(const std::string& spec, int n) {
  std::vector<std::vector<double>> vecs;
  std::stringstream outer(spec);
  std::string item;
  while (std::getline(outer, item, ',')) {
    for (char& ch : item)
      if (ch == ':') ch = ' ';
    std::vector<double> v;
    for (const auto tok : detail::split_ws(item)) {
      try {
        v.push_back(detail::parse_double(tok, 0));
      } catch (const Error&) {
        throw Error(Errc::hint, "bad number '" + std::string(tok) + "' in --ideal");
      }
    }
    vecs.push_back(std::move(v));
  }
  if (static_cast<int>(vecs.size()) != n - 1)
    throw Error(Errc::hint, "--ideal needs " + std::to_string(n - 1) + " vectors");
  MatrixXd h(n, n - 1);
  for (int c = 0; c < n - 1; ++c) {
    if (static_cast<int>(vecs[c].size()) != n)
      throw Error(Errc::hint, "--ideal vectors need " + std::to_string(n) + " components");
    for (int k = 0; k < n; ++k) h(k, c) = vecs[c][k];
  }
  return h;
}

inline Family parse_family(const std::string& s, double& t, bool t_given) {
  if (s == "abelian") return Family::Abelian;
  if (s == "sol") return Family::Sol;
  if (s == "so2r2") return Family::SO2R2;
  if (s == "ridr2") return Family::RIdR2;
  if (s == "g0") {
    if (t_given && t != 0.0) throw Error(Errc::usage, "--family g0 fixes t = 0");
    t = 0.0;
    return Family::Gt;
  }
  if (s == "gt") {
    if (!t_given) throw Error(Errc::usage, "--family gt needs --t");
    return Family::Gt;
  }
  throw Error(Errc::usage, "unknown family '" + s + "'");
}

inline MetricShape parse_shape(const std::string& s) {
  if (s == "std") return MetricShape::Std;
  if (s == "gnu") return MetricShape::Gnu;
  if (s == "gmunu") return MetricShape::Gmunu;
  if (s == "hmunu") return MetricShape::Hmunu;
  if (s == "m" || s == "mnu") return MetricShape::Mnu;
  throw Error(Errc::usage, "unknown metric shape '" + s + "'");
}

inline void report_error(std::ostream& err, const Error& e) {
  err << "error " << errc_id(e.code());
  if (e.line() > 0) err << " line " << e.line();
  err << ": " << e.what() << "\n";
}

inline ReportFormat parse_format(const std::string& s) {
  return s == "records" ? ReportFormat::records : ReportFormat::text;
}

/// Runs one command; returns 0 on success, 1 on domain errors, 2 on input errors.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Left-invariant Riemannian and Weyl geometry on metric Lie algebras", "liewe"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --format follow the subcommand
  std::string format = "text";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();
  std::string file;
  SolveOptions solve;
  std::string ideal;

  auto* validate = app.add_subcommand("validate", "Check antisymmetry, Jacobi and metric; structure flags");
  validate->add_option("file", file, "MLA document")->required();

  auto* curv = app.add_subcommand("curvature", "Levi-Civita connection, Ricci (both routes), scalar, Einstein defect");
  curv->add_option("file", file, "MLA document")->required();

  auto* ws = app.add_subcommand("weyl-solve", "All left-invariant Weyl-Einstein Lee forms found by multistart");
  ws->add_option("file", file, "MLA document")->required();
  ws->add_option("--starts", solve.starts, "Number of solver starts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  ws->add_option("--seed", solve.seed, "Seed for start directions")->capture_default_str();
  ws->add_option("--tol", solve.tol_root, "Root tolerance, relative to 1 + |Ric|")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto* aa = app.add_subcommand("aa-classify", "Almost abelian decomposition and Weyl-Einstein classification");
  aa->add_option("file", file, "MLA document")->required();
  aa->add_option("--ideal", ideal, "Ideal basis: vectors separated by ',', components by ':' or space");

  std::string family, shape;
  double t = 0.0, mu = 1.0, nu = 1.0;
  auto* cat = app.add_subcommand("catalog3d", "Build a 3-dimensional catalog algebra and decide the Weyl-Einstein question");
  cat->add_option("--family", family, "abelian|sol|so2r2|ridr2|gt|g0")->required();
  auto* t_opt = cat->add_option("--t", t, "Parameter of g_t");
  cat->add_option("--metric", shape, "std|gnu|gmunu|hmunu|m")->required();
  cat->add_option("--mu", mu, "Metric parameter mu")->capture_default_str();
  cat->add_option("--nu", nu, "Metric parameter nu")->capture_default_str();

  auto* rep = app.add_subcommand("report", "Everything: validation, curvature, Weyl solve, almost abelian data");
  rep->add_option("file", file, "MLA document")->required();

  std::vector<const char*> argv{"liewe"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  const ReportFormat fmt = parse_format(format);

  try {
    Records r;
    if (*validate) {
      const auto doc = parse_mla(read_file(file), ParseOptions{false});
      const LieAlgebra L = to_algebra(doc);
      const auto vr = validate_algebra(L);
      add_structure_records(r, L, vr);
      r["metric.eigenvalues"] = linalg::sym_eigenvalues(doc.metric);
      out << emit_report(r, fmt);
      if (!vr.ok()) parse_mla(read_file(file));  // raises the Jacobi error with its line
      return 0;
    }
    if (*cat) {
      Family3D f;
      f.family = parse_family(family, t, t_opt->count() > 0);
      f.t = t;
      f.metric = parse_shape(shape);
      f.mu = mu;
      f.nu = nu;
      const MetricLieAlgebra M = make_3d(f);
      const auto v = cl3_admits_we(f);
      r["cl3.family"] = std::string(to_string(f.family));
      r["cl3.metric"] = std::string(to_string(f.metric));
      r["cl3.admits"] = v.admits;
      r["cl3.by_table"] = v.by_table;
      r["cl3.by_solver"] = v.by_solver;
      r["cl3.lee_form_count"] = static_cast<long long>(v.lee_forms.size());
      for (std::size_t i = 0; i < v.lee_forms.size(); ++i) r[idx("cl3.lee_forms", i)] = v.lee_forms[i].theta;
      if (v.admits && f.family != Family::Abelian) {
        const auto nf = buv_normal_form(M);
        r["buv.case"] = std::string(to_string(nf.which));
        r["buv.basis_change"] = nf.basis_change;
        if (nf.which == BuvCase::AdbForm) {
          r["buv.k"] = nf.k;
          r["buv.l"] = nf.l;
        } else {
          r["buv.alpha"] = nf.alpha;
        }
      }
      // The report follows the document as comments, so the output is itself a valid MLA file.
      out << emit_mla(to_document(M));
      std::istringstream body(emit_report(r, fmt));
      for (std::string line; std::getline(body, line);) out << "# " << line << "\n";
      return 0;
    }

    const MetricLieAlgebra M = to_metric_algebra(parse_mla(read_file(file)));
    if (*curv) {
      add_curvature_records(r, M);
    } else if (*ws) {
      add_weyl_records(r, M, solve);
    } else if (*aa) {
      std::optional<MatrixXd> hint;
      if (aa->count("--ideal") > 0) hint = parse_ideal(ideal, M.dim());
      add_aa_records(r, M, hint);
    } else if (*rep) {
      add_structure_records(r, M.algebra(), validate_algebra(M.algebra()));
      add_curvature_records(r, M);
      if (M.dim() >= 3) {
        add_weyl_records(r, M, solve);
        try {
          add_aa_records(r, M, std::nullopt);
        } catch (const Error& e) {
          if (e.code() != Errc::not_almost_abelian) throw;
          r["aa.case"] = std::string("NotAlmostAbelian");
        }
      }
    }
    out << emit_report(r, fmt);
    return 0;
  } catch (const Error& e) {
    report_error(err, e);
    return is_domain_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error E_INTERNAL: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace liewe::cli
