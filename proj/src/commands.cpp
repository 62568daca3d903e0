#include "corelab/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "corelab/dilation.hpp"
#include "corelab/jsonio.hpp"
#include "corelab/structure.hpp"

namespace corelab {
namespace {

const std::vector<double> kPopescuGrid = {0.25, 0.5, 0.75, 0.9, 0.99};

void add_meta(Report& r, const LoadedRep& lr, const CommandOptions& opt,
              bool with_seed) {
  r.meta("input", lr.path);
  r.meta("digest", lr.digest);
  r.meta("tolerance.eq", format_double(opt.tol.eq_tol));
  r.meta("tolerance.psd", format_double(opt.tol.psd_tol));
  r.meta("tolerance.rank_rel", format_double(opt.tol.rank_rel_tol));
  if (with_seed) r.meta("seed", std::to_string(opt.seed));
}

void input_section(Report& r, const LoadedRep& lr) {
  r.begin_section("input");
  if (lr.kind == RepKind::Graph) {
    r.item("kind", "graph");
    r.item("dim", lr.graph_rep.dim);
    r.item("vertices", lr.graph_rep.graph.vertex_count());
    r.item("edges", lr.graph_rep.graph.edge_count());
  } else {
    r.item("kind", "single_vertex_kgraph");
    r.item("dim", lr.kgraph_rep.dim);
    r.item("colors", lr.kgraph_rep.kgraph.k());
    r.item_ints("m", lr.kgraph_rep.kgraph.m());
  }
}

std::string subset_label(const std::vector<int>& colors) {
  std::string s = "{";
  for (size_t i = 0; i < colors.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(colors[i] + 1);
  }
  return s + "}";
}

// Runs every predicate and records the values both in the report and in a
// flat map consumed by the expect comparison.
Json validate_section(Report& r, const LoadedRep& lr, const Tolerance& tol) {
  Json computed = Json::object();
  auto put_b = [&](const std::string& k, bool v) {
    r.item(k, v);
    computed[k] = v;
  };
  auto put_d = [&](const std::string& k, double v) {
    r.item(k, v);
    computed[k] = v == 0.0 ? 0.0 : v;
  };
  r.begin_section("validate");
  if (lr.kind == RepKind::Graph) {
    const GraphRep& rep = lr.graph_rep;
    GraphRepResiduals res = check_graph_rep(rep);
    put_d("sigma_projection_residual", res.sigma_projection);
    put_d("sigma_orthogonality_residual", res.sigma_orthogonality);
    put_d("sigma_sum_residual", res.sigma_sum);
    put_d("covariance_residual", res.covariance);
    put_b("valid", res.worst() <= tol.eq_tol);
    put_b("completely_contractive", is_completely_contractive(rep, tol));
    put_b("isometric", is_isometric(rep, tol));
    put_d("coisometry_residual", coisometry_residual(rep));
    put_b("fully_coisometric", is_fully_coisometric(rep, tol));
  } else {
    const KGraphRep& rep = lr.kgraph_rep;
    KGraphRepResiduals res = check_kgraph_rep(rep);
    put_d("commutation_residual", res.commutation);
    put_b("valid", res.worst() <= tol.eq_tol);
    put_b("completely_contractive", is_completely_contractive(rep, tol));
    put_b("isometric", is_isometric(rep, tol));
    put_d("coisometry_residual", coisometry_residual(rep));
    put_b("fully_coisometric", is_fully_coisometric(rep, tol));
    put_d("doubly_commuting_residual", doubly_commuting_residual(rep));
    put_b("doubly_commuting", is_doubly_commuting(rep, tol));
    PopescuReport pr = satisfies_popescu(rep, kPopescuGrid, tol);
    for (size_t i = 0; i < pr.grid.size(); ++i)
      put_b("popescu[s=" + format_double(pr.grid[i]) + "]", pr.psd[i]);
    put_b("popescu", pr.verdict);
    RegularDilationReport rd = regular_dilation_condition(rep, tol);
    double min_eig = 0;
    for (size_t i = 0; i < rd.subsets.size(); ++i) {
      put_b("regular[" + subset_label(rd.subsets[i]) + "]", rd.psd[i]);
      min_eig = i == 0 ? rd.min_eigenvalue[i]
                       : std::min(min_eig, rd.min_eigenvalue[i]);
    }
    put_d("regular_min_eigenvalue", min_eig);
    put_b("regular_dilation", rd.all_hold);
  }
  return computed;
}

bool expect_matches(const Json& got, const Json& want) {
  if (got.is_boolean() || want.is_boolean()) return got == want;
  if (got.is_number() && want.is_number())
    return std::abs(got.get<double>() - want.get<double>()) <= 1e-9;
  return got == want;
}

int expect_section(Report& r, const Json& expect, const Json& computed) {
  if (expect.empty()) return 0;
  r.begin_section("expect");
  int failures = 0;
  for (auto it = expect.begin(); it != expect.end(); ++it) {
    if (!computed.contains(it.key()))
      throw ParseError("unknown expect key \"" + it.key() + "\"");
    const Json& got = computed[it.key()];
    bool ok = expect_matches(got, it.value());
    if (ok) {
      r.item(it.key(), "PASS (computed " + got.dump() + ")");
    } else {
      r.item(it.key(), "FAIL (computed " + got.dump() + ", expected " +
                           it.value().dump() + ")");
      ++failures;
    }
  }
  r.item("failures", failures);
  return failures;
}

bool rep_fully_coisometric(const LoadedRep& lr, const Tolerance& tol) {
  return lr.kind == RepKind::Graph
             ? is_fully_coisometric(lr.graph_rep, tol)
             : is_fully_coisometric(lr.kgraph_rep, tol);
}

void structure_sections(Report& r, const LoadedRep& lr,
                        const CommandOptions& opt) {
  const Tolerance& tol = opt.tol;
  Eigen::Index d =
      lr.kind == RepKind::Graph ? lr.graph_rep.dim : lr.kgraph_rep.dim;
  std::vector<ComplexMatrix> gens = lr.kind == RepKind::Graph
                                        ? generators(lr.graph_rep)
                                        : generators(lr.kgraph_rep);
  OperatorAlgebra alg = generate_algebra(gens, d, tol);

  r.begin_section("algebra");
  r.item("generator_count", gens.size());
  r.item("algebra_dim", alg.basis.size());
  r.item("star_residual", star_residual(alg));
  r.item("star_closed", is_star_closed(alg, tol));
  r.item("commutant_dim", commutant(alg, tol).basis.size());

  MinimalFamily fam = minimal_coinvariant_family(alg, opt.seed, tol);
  bool fully_co = rep_fully_coisometric(lr, tol);
  r.begin_section("vhat");
  std::vector<Eigen::Index> summand_dims;
  for (const Subspace& s : fam.summands) summand_dims.push_back(s.dim());
  r.item_ints("family_summands", summand_dims);
  r.item("vhat_dim", fam.vhat.dim());
  r.item("cyclic", fam.cyclic);
  if (!fam.cyclic)
    r.note("cyclicity check failed: the family spans dimension " +
           std::to_string(fam.cyclic_dim) + " of " + std::to_string(d) +
           " under the algebra");
  if (!fully_co)
    r.note("representation is not fully coisometric; the minimal cyclic "
           "coinvariant subspace need not be unique");
  r.matrix("vhat_frame", fam.vhat.frame());

  OperatorAlgebra alg_hat = compress(alg, fam.vhat, tol);
  r.begin_section("blocks");
  r.item("compressed_algebra_dim", alg_hat.basis.size());
  r.item("compressed_star_closed", is_star_closed(alg_hat, tol));
  try {
    BlockDecomposition bd = block_decomposition(alg_hat, opt.seed, tol);
    r.item("block_count", bd.blocks.size());
    Eigen::Index sum = 0;
    for (size_t h = 0; h < bd.blocks.size(); ++h) {
      const BlockClass& bc = bd.blocks[h];
      r.item("block[" + std::to_string(h + 1) + "]",
             "d=" + std::to_string(bc.block_dim) +
                 ", m=" + std::to_string(bc.multiplicity));
      sum += bc.block_dim * bc.multiplicity;
    }
    r.item("dimension_sum_matches", sum == fam.vhat.dim());
  } catch (const AnalysisError& e) {
    r.note(std::string("block decomposition unavailable: ") + e.what());
  }

  if (fully_co) {
    r.begin_section("phi");
    size_t fixed = lr.kind == RepKind::Graph
                       ? phi_fixed_points(compress(lr.graph_rep, fam.vhat), tol)
                             .size()
                       : phi_fixed_points(compress(lr.kgraph_rep, fam.vhat),
                                          tol)
                             .size();
    size_t comm = commutant(alg_hat, tol).basis.size();
    r.item("fixed_point_dim", fixed);
    r.item("commutant_dim_on_vhat", comm);
    r.item("fixed_equals_commutant", fixed == comm);
  }

  if (!opt.m.empty()) {
    if (lr.kind != RepKind::SingleVertexKGraph)
      throw ParseError("--m applies to single_vertex_kgraph inputs");
    WmReport wm = wm_equals_vhat(lr.kgraph_rep, opt.m, opt.seed, tol);
    r.begin_section("wm");
    r.item_ints("m", wm.m);
    r.item("wm_dim", wm.wm.dim());
    r.item("vhat_dim", wm.vhat.dim());
    r.item("all_entries_positive", wm.all_positive);
    r.item("equal", wm.equal);
    r.item("contained_in_vhat", wm.contained);
    r.item("projection_distance", wm.distance);
    r.matrix("wm_frame", wm.wm.frame());
  }
}

void dilation_sections(Report& r, const GraphRep& rep,
                       const CommandOptions& opt) {
  TruncatedDilation dil = build_dilation(rep, opt.depth, opt.tol);
  r.begin_section("dilation");
  r.item("depth", dil.depth);
  r.item("base_dim", rep.dim);
  r.item("total_dim", dil.total_dim);
  r.item("interior_dim", dil.interior_dim);
  r.item("alpha", dil.alpha());
  r.item_ints("w0_dims", dil.w0_dims);
  std::vector<Eigen::Index> level_dims;
  for (int n = 0; n < dil.depth; ++n) level_dims.push_back(dil.level_dim(n));
  r.item_ints("level_dims", level_dims);

  r.begin_section("wandering");
  try {
    WanderingReport w = wandering_dimension(rep, opt.seed, opt.tol);
    r.item("alpha", w.alpha);
    r.item("vhat_dim", w.vhat_dim);
    r.item_ints("block_dims", w.block_dims);
    r.item_ints("multiplicities", w.multiplicities);
    r.item_ints("alpha_by_block", w.alpha_by_block);
    r.item("alpha_from_blocks", w.alpha_from_blocks);
    r.item("consistent", w.consistent);
  } catch (const AnalysisError& e) {
    r.note(std::string("block analysis unavailable: ") + e.what());
  }

  if (opt.check) {
    DilationChecks c = verify_dilation(dil, opt.tol);
    r.begin_section("check");
    r.item("compression_residual", c.compression_residual);
    r.item("vperp_residual", c.vperp_residual);
    r.item("reducing_residual", c.reducing_residual);
    r.item("isometry_residual", c.isometry_residual);
    r.item("coisometry_residual", c.coisometry_residual);
    for (size_t i = 0; i < c.coisometry_by_level.size(); ++i) {
      std::string slot = i == 0 ? "V" : "level" + std::to_string(i - 1);
      r.item("coisometry_residual[" + slot + "]", c.coisometry_by_level[i]);
    }
    r.item("base_fully_coisometric", c.base_fully_coisometric);
    r.item("coisometric_on_interior", c.coisometric_on_interior);
    r.item("coisometry_matches_base", c.coisometry_matches_base);
    r.item_ints("word_span_dims", c.span_dims);
    r.item("minimal", c.minimal);
    r.item("alpha_matches_level0", c.alpha_matches_level0);
  }
}

}  // namespace

CommandResult cmd_validate(const std::string& file,
                           const CommandOptions& opt) {
  LoadedRep lr = load_rep_file(file);
  CommandResult out;
  add_meta(out.report, lr, opt, false);
  input_section(out.report, lr);
  Json computed = validate_section(out.report, lr, opt.tol);
  int failures = expect_section(out.report, lr.expect, computed);
  out.exit_code = failures > 0 ? 2 : 0;
  return out;
}

CommandResult cmd_structure(const std::string& file,
                            const CommandOptions& opt) {
  LoadedRep lr = load_rep_file(file);
  CommandResult out;
  add_meta(out.report, lr, opt, true);
  input_section(out.report, lr);
  structure_sections(out.report, lr, opt);
  return out;
}

CommandResult cmd_equiv(const std::string& file_a, const std::string& file_b,
                        const CommandOptions& opt) {
  LoadedRep la = load_rep_file(file_a);
  LoadedRep lb = load_rep_file(file_b);
  CommandResult out;
  Report& r = out.report;
  r.meta("input_a", la.path);
  r.meta("digest_a", la.digest);
  r.meta("input_b", lb.path);
  r.meta("digest_b", lb.digest);
  r.meta("tolerance.eq", format_double(opt.tol.eq_tol));
  r.meta("seed", std::to_string(opt.seed));

  if (la.kind != lb.kind)
    throw AnalysisError("inputs have different kinds");
  if (la.kind == RepKind::Graph) {
    if (la.graph_rep.graph.vertex_count() != lb.graph_rep.graph.vertex_count() ||
        la.graph_rep.graph.adjacency_counts() !=
            lb.graph_rep.graph.adjacency_counts())
      throw AnalysisError("underlying graphs differ");
  } else {
    const ThetaKGraph& ga = la.kgraph_rep.kgraph;
    const ThetaKGraph& gb = lb.kgraph_rep.kgraph;
    bool same = ga.k() == gb.k() && ga.m() == gb.m();
    for (int i = 0; same && i < ga.k(); ++i)
      for (int j = i + 1; same && j < ga.k(); ++j)
        same = ga.theta(i, j) == gb.theta(i, j);
    if (!same) throw AnalysisError("underlying k-graphs differ");
  }

  auto minimal_piece = [&](const LoadedRep& lr, const char* tag)
      -> std::pair<Subspace, std::vector<ComplexMatrix>> {
    Eigen::Index d =
        lr.kind == RepKind::Graph ? lr.graph_rep.dim : lr.kgraph_rep.dim;
    std::vector<ComplexMatrix> gens = lr.kind == RepKind::Graph
                                          ? generators(lr.graph_rep)
                                          : generators(lr.kgraph_rep);
    OperatorAlgebra alg = generate_algebra(gens, d, opt.tol);
    MinimalFamily fam = minimal_coinvariant_family(alg, opt.seed, opt.tol);
    if (!fam.cyclic)
      r.note(std::string("cyclicity check failed for ") + tag);
    std::vector<ComplexMatrix> gens_hat;
    for (const ComplexMatrix& g : gens)
      gens_hat.push_back(compress(g, fam.vhat));
    return {fam.vhat, std::move(gens_hat)};
  };

  r.begin_section("equiv");
  auto [vhat_a, gens_a] = minimal_piece(la, "input_a");
  auto [vhat_b, gens_b] = minimal_piece(lb, "input_b");
  r.item("vhat_dim_a", vhat_a.dim());
  r.item("vhat_dim_b", vhat_b.dim());
  if (vhat_a.dim() != vhat_b.dim()) {
    r.item("verdict", "not equivalent");
    r.note("minimal pieces have different dimensions");
    return out;
  }
  EquivalenceResult eq = unitary_equivalence(gens_a, gens_b, opt.seed, opt.tol);
  r.item("intertwiner_dim", eq.intertwiner_dim);
  r.item("max_residual", eq.max_residual);
  switch (eq.verdict) {
    case EquivalenceResult::Verdict::Equivalent:
      r.item("verdict", "equivalent");
      r.matrix("unitary", eq.unitary);
      break;
    case EquivalenceResult::Verdict::SimilarOnly:
      r.item("verdict", "similar, unitary not certified");
      break;
    case EquivalenceResult::Verdict::NotEquivalent:
      r.item("verdict", "not equivalent");
      break;
  }
  return out;
}

CommandResult cmd_dilate(const std::string& file, const CommandOptions& opt) {
  LoadedRep lr = load_rep_file(file);
  CommandResult out;
  add_meta(out.report, lr, opt, true);
  out.report.meta("depth", std::to_string(opt.depth));
  input_section(out.report, lr);
  if (lr.kind != RepKind::Graph)
    throw AnalysisError("dilation requires a 1-graph (kind \"graph\") input");
  dilation_sections(out.report, lr.graph_rep, opt);
  return out;
}

CommandResult cmd_report(const std::string& file, const CommandOptions& opt) {
  LoadedRep lr = load_rep_file(file);
  CommandResult out;
  add_meta(out.report, lr, opt, true);
  out.report.meta("depth", std::to_string(opt.depth));
  input_section(out.report, lr);
  Json computed = validate_section(out.report, lr, opt.tol);
  structure_sections(out.report, lr, opt);
  if (lr.kind == RepKind::Graph) {
    try {
      dilation_sections(out.report, lr.graph_rep, opt);
    } catch (const AnalysisError& e) {
      out.report.note(std::string("dilation unavailable: ") + e.what());
    }
  }
  int failures = expect_section(out.report, lr.expect, computed);
  out.exit_code = failures > 0 ? 2 : 0;
  return out;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"analysis toolkit for graph correspondence representations"};
  app.name("corelab");
  app.set_version_flag("--version", "corelab 0.1.0");
  app.require_subcommand(1);

  std::string file_a;
  std::string file_b;
  CommandOptions opt;
  double tol_value = 0;
  std::vector<CLI::Option*> tol_opts;

  auto common = [&](CLI::App* sub) {
    tol_opts.push_back(
        sub->add_option("--tol", tol_value, "equality tolerance"));
    sub->add_option("--seed", opt.seed, "search seed");
    sub->add_flag("--json", opt.json, "emit the JSON report");
  };

  CLI::App* v = app.add_subcommand("validate", "run representation predicates");
  v->add_option("file", file_a, "rep-spec JSON file")->required();
  common(v);

  CLI::App* s = app.add_subcommand(
      "structure", "minimal cyclic coinvariant subspace and block structure");
  s->add_option("file", file_a, "rep-spec JSON file")->required();
  s->add_option("--m", opt.m, "degree vector for the word-algebra comparison")
      ->delimiter(',');
  common(s);

  CLI::App* e =
      app.add_subcommand("equiv", "unitary equivalence of minimal pieces");
  e->add_option("file_a", file_a, "first rep-spec JSON file")->required();
  e->add_option("file_b", file_b, "second rep-spec JSON file")->required();
  common(e);

  CLI::App* d = app.add_subcommand("dilate", "truncated isometric dilation");
  d->add_option("file", file_a, "rep-spec JSON file")->required();
  d->add_option("--depth", opt.depth, "number of truncation levels");
  d->add_flag("--check", opt.check, "verify the dilation axioms");
  common(d);

  CLI::App* rp =
      app.add_subcommand("report", "combined validate/structure/dilation report");
  rp->add_option("file", file_a, "rep-spec JSON file")->required();
  rp->add_option("--depth", opt.depth, "number of truncation levels");
  common(rp);

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  }

  try {
    bool tol_given = false;
    for (CLI::Option* o : tol_opts) tol_given |= o->count() > 0;
    if (tol_given) {
      opt.tol.eq_tol = tol_value;
    } else if (const char* env = std::getenv("CORELAB_TOL")) {
      char* end = nullptr;
      double parsed = std::strtod(env, &end);
      if (end == env || *end != '\0')
        throw ParseError(std::string("CORELAB_TOL is not a number: ") + env);
      opt.tol.eq_tol = parsed;
    }
    opt.tol.validate();

    CommandResult res;
    if (v->parsed())
      res = cmd_validate(file_a, opt);
    else if (s->parsed())
      res = cmd_structure(file_a, opt);
    else if (e->parsed())
      res = cmd_equiv(file_a, file_b, opt);
    else if (d->parsed())
      res = cmd_dilate(file_a, opt);
    else
      res = cmd_report(file_a, opt);
    if (opt.json)
      std::cout << res.report.json().dump(2) << "\n";
    else
      std::cout << res.report.text();
    return res.exit_code;
  } catch (const ParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const AnalysisError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}

}  // namespace corelab
