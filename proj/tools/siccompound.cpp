// Command-line front end: verifications, searches, certification and key-rate scans.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 data required.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "siccompound/siccompound.hpp"

namespace sc = siccompound;

namespace {

enum Exit { kOk = 0, kCheckFailure = 1, kUsageError = 2, kDataRequired = 3 };

struct Options {
  double tolerance = sc::kDerivedTolerance;
  std::string out;
  std::uint64_t seed = 0;
  std::string format;
};

struct Output {
  sc::Report report;
  std::optional<std::string> text;  // overrides the JSON document when set
  int exit_override = -1;
};

std::string fmt(double x) { return sc::format_number(x); }

int emit(const Output& o, const Options& opt) {
  std::string body = o.text ? *o.text : o.report.to_json().dump(2) + "\n";
  if (opt.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(opt.out);
    if (!f) {
      std::cerr << "cannot write " << opt.out << "\n";
      return kUsageError;
    }
    f << body;
  }
  if (o.exit_override >= 0) return o.exit_override;
  if (!o.report.ok()) {
    for (const auto& c : o.report.checks())
      if (!c.pass) std::cerr << "check failed: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    return kCheckFailure;
  }
  return kOk;
}

// ---------------------------------------------------------------------------

Output compound_verify(const Options& opt) {
  Output o{sc::Report("compound verify")};
  o.report.tolerance("overlap", opt.tolerance);
  const auto c = sc::build_compound();
  const auto r = sc::verify_compound(c, opt.tolerance);
  o.report.check("sic_count == 8", r.sic_count == 8, std::to_string(r.sic_count));
  o.report.check("basis_count == 32", r.basis_count == 32, std::to_string(r.basis_count));
  bool partners = true, two_bases = true, two_sics = true;
  for (std::size_t i = 0; i < r.state_count; ++i) {
    partners = partners && r.per_state_sic_partner_count[i] == 27;
    two_bases = two_bases && r.per_state_basis_membership[i] == 2;
    two_sics = two_sics && r.per_state_sic_membership[i] == 2;
  }
  o.report.check("every state has 27 SIC partners", partners);
  o.report.check("every state lies in 2 bases", two_bases);
  o.report.check("every state lies in 2 SICs", two_sics);
  const bool shared_four = r.sic_intersections.size() == 1 && r.sic_intersections.count(4) == 1;
  o.report.check("overlapping SICs share 4 states", shared_four);
  o.report.check("negativities equal the closed form", r.negativity_max_deviation <= opt.tolerance,
                 fmt(r.negativity_max_deviation));
  o.report.check("Latin square matches the reference array",
                 r.latin && r.latin->labels == sc::reference_latin_square(), r.latin_error);
  o.report.result() = sc::compound_report_json(r);
  return o;
}

Output compound_latin(const Options& opt) {
  Output o{sc::Report("compound latin")};
  o.report.tolerance("overlap", opt.tolerance);
  const auto l = sc::latin_square(sc::build_compound(), opt.tolerance);
  o.report.check("Latin square matches the reference array", l.labels == sc::reference_latin_square());
  o.report.result() = sc::latin_json(l);
  if (opt.format == "text") {
    std::ostringstream s;
    for (int r = 3; r >= 0; --r) {
      s << sc::kCosetNames[l.row_cosets[r]] << "\t";
      for (int k = 0; k < 4; ++k) s << l.labels[r][k] << (k < 3 ? " " : "\n");
    }
    o.text = s.str();
  }
  return o;
}

Output compound_export(const Options& opt) {
  Output o{sc::Report("compound export")};
  o.report.tolerance("overlap", opt.tolerance);
  const auto c = sc::build_compound();
  sc::check_compound_properties(c, opt.tolerance);
  o.report.check("properties I and II", true);
  o.report.result() = sc::compound_export_json(c, sc::verify_compound(c, opt.tolerance));
  return o;
}

Output mubs_extract(const Options& opt) {
  Output o{sc::Report("mubs extract")};
  o.report.tolerance("unbiasedness", opt.tolerance);
  o.report.tolerance("optimality_eigenvalue", sc::kOptimalityEigenTolerance);
  const auto c = sc::build_compound();
  const auto family = sc::extract_mubs(c, opt.tolerance);
  o.report.check("five mutually unbiased bases", family.bases.size() == 5 &&
                                                     family.worst_deviation() <= opt.tolerance,
                 fmt(family.worst_deviation()));

  sc::Json pgm = sc::Json::array();
  const std::vector<double> priors(4, 0.25);
  bool all_optimal = true;
  double worst_neg = 0.0;
  for (int j2 = 0; j2 < 4; ++j2)
    for (int k = 0; k < 4; ++k) {
      const auto block = sc::latin_block(c, j2, k);
      const auto basis = sc::pretty_good_basis(c, j2, k);
      const auto rhos = sc::as_density_matrices(block);
      const double p = sc::success_probability(rhos, priors, basis);
      const bool optimal = sc::verify_min_error_optimality(std::span<const sc::Matrix>(rhos), priors, basis);
      all_optimal = all_optimal && optimal;
      for (const auto& v : basis.vectors)
        worst_neg = std::max(worst_neg, std::abs(sc::negativity(v, {2, 2}) - 1.0 / std::sqrt(8.0)));
      pgm.push_back({{"j2", j2}, {"k", k}, {"success_probability", sc::num(p)}, {"optimal", optimal}});
    }
  o.report.check("every PGM is minimum-error optimal", all_optimal);
  o.report.check("PGM elements have negativity 1/sqrt 8", worst_neg <= opt.tolerance, fmt(worst_neg));

  const auto rows = sc::row_ensemble(c, 0);
  const auto comp = sc::OrthonormalBasis::computational(4);
  const auto assigned = sc::best_assignment(rows, priors, comp);
  const bool row_optimal = sc::verify_min_error_optimality(std::span<const sc::Matrix>(rows), priors, assigned);
  o.report.check("computational basis is optimal for row discrimination", row_optimal);

  sc::Json bases = sc::Json::array();
  for (const auto& b : family.bases) bases.push_back(sc::basis_json(b));
  o.report.result() = {{"bases", bases},
                       {"worst_deviation", sc::num(family.worst_deviation())},
                       {"cross_pairs", family.cross_pair_count()},
                       {"pgm", pgm},
                       {"row_discrimination_success", sc::num(sc::success_probability(rows, priors, assigned))}};
  return o;
}

Output search_qutrit(const Options& opt) {
  Output o{sc::Report("search qutrit")};
  o.report.tolerance("orthogonality", 1e-8);
  o.report.tolerance("fiducial", opt.tolerance);
  const auto r = sc::qutrit_no_compound();
  const auto roots = sc::qutrit_orthogonality_solutions();
  const double third = 2.0 * std::numbers::pi / 3.0;
  auto has_root = [&](double t1, double t2) {
    for (const auto& x : roots)
      if (std::abs(x.theta1 - t1) <= 1e-6 && std::abs(x.theta2 - t2) <= 1e-6) return true;
    return false;
  };
  o.report.check("angle system has exactly the two roots (2pi/3, pi/3), (5pi/3, 4pi/3)",
                 roots.size() == 2 && has_root(third, third / 2) && has_root(2.5 * third, 2 * third),
                 std::to_string(roots.size()));
  o.report.check("max orthogonal SICs: 2", r.max_orthogonal_family == 2,
                 std::to_string(r.max_orthogonal_family));
  o.report.check("witness pair are orthogonal fiducials",
                 r.witness_inner_product <= opt.tolerance &&
                     r.witness_fiducial_deviation[0] <= opt.tolerance &&
                     r.witness_fiducial_deviation[1] <= opt.tolerance);
  o.report.result() = sc::qutrit_json(r);
  sc::Json angle_roots = sc::Json::array();
  for (const auto& x : roots)
    angle_roots.push_back({{"theta1", sc::num(x.theta1)}, {"theta2", sc::num(x.theta2)}, {"residual", sc::num(x.residual)}});
  o.report.result()["angle_system_roots"] = angle_roots;
  o.report.result()["summary"] = "max orthogonal SICs: " + std::to_string(r.max_orthogonal_family);
  return o;
}

Output search_clique(const Options& opt, const std::string& path, int expect) {
  Output o{sc::Report("search clique")};
  o.report.tolerance("ingestion", std::max(opt.tolerance, sc::kIngestionTolerance));
  o.report.tolerance("orthogonality", sc::kOrthogonalityTolerance);
  if (path.empty()) {
    o.report.check("fiducial catalogue supplied", false,
                   "pass --fiducials <file>; catalogues for d = 5..8 are not bundled");
    o.exit_override = kDataRequired;
    return o;
  }
  const auto set = sc::ingest_fiducials(path, std::max(opt.tolerance, sc::kIngestionTolerance));
  const auto clique = sc::max_orthogonal_sics(set);
  double worst_dev = 0.0;
  for (double d : set.deviations) worst_dev = std::max(worst_dev, d);
  if (expect >= 0) {
    o.report.check("max orthogonal SICs == " + std::to_string(expect),
                   static_cast<int>(clique.size) == expect, std::to_string(clique.size));
  }
  o.report.result() = {{"dim", set.dim},
                       {"label", set.source_label},
                       {"fiducials", set.vectors.size()},
                       {"worst_fiducial_deviation", sc::num(worst_dev)},
                       {"max_orthogonal_sics", clique.size},
                       {"witness", clique.witness}};
  return o;
}

Output certify_bound(int dim) {
  Output o{sc::Report("certify bound")};
  o.report.result() = {{"dim", dim}, {"bound", sc::num(sc::analytic_bound(dim))}};
  if (dim == 2) o.report.result()["sdp_three_sic_reference"] = sc::num(sc::kQubitThreeSicSdpBound);
  if (dim == 2 || dim == 4) {
    const auto c = dim == 2 ? sc::build_qubit_compound() : sc::build_compound();
    const double h = sc::eval_H(sc::compound_game_model(c));
    o.report.tolerance("saturation", 1e-6);
    o.report.check("compound model saturates the bound", std::abs(h - sc::analytic_bound(dim)) <= 1e-6,
                   fmt(h));
    o.report.result()["compound_value"] = sc::num(h);
  }
  return o;
}

Output certify_seesaw(const Options& opt, int dim, int seeds, int iters) {
  Output o{sc::Report("certify seesaw")};
  o.report.tolerance("convergence", 1e-10);
  o.report.tolerance("bound_slack", 1e-6);
  const double bound = sc::analytic_bound(dim);
  sc::SeesawOptions so;
  so.iterations = iters;
  sc::Json runs = sc::Json::array();
  std::optional<sc::SeesawResult> best;
  bool below = true, monotone = true;
  for (int s = 0; s < seeds; ++s) {
    auto r = sc::seesaw_maximize_H(dim, opt.seed + static_cast<std::uint64_t>(s), so);
    below = below && r.value <= bound + 1e-6;
    for (std::size_t i = 1; i < r.trajectory.size(); ++i)
      monotone = monotone && r.trajectory[i] >= r.trajectory[i - 1] - 1e-12;
    runs.push_back({{"seed", r.seed}, {"value", sc::num(r.value)}, {"sweeps", r.sweeps}});
    if (!best || r.value > best->value) best = std::move(r);
  }
  o.report.check("never exceeds the bound", below);
  o.report.check("trajectories are monotone", monotone);
  const double gap = bound - best->value;
  if (dim == 2 || dim == 4) {
    o.report.tolerance("target_gap", 1e-3);
    o.report.check("best value within 1e-3 of the bound", gap <= 1e-3, fmt(gap));
  }
  o.report.result() = {{"dim", dim}, {"bound", sc::num(bound)}, {"best_gap", sc::num(gap)},
                       {"runs", runs}, {"best", sc::seesaw_json(*best, true)}};
  return o;
}

Output qkd_rate(const Options& opt, double p, double q, const std::string& protocol) {
  Output o{sc::Report("qkd rate")};
  const auto proto = sc::parse_protocol(protocol);
  const sc::NoiseParams n{p, q};
  sc::validate(n);
  const double r = sc::rate(proto, n);
  sc::Json res{{"protocol", protocol}, {"p", sc::num(p)}, {"q", sc::num(q)}, {"rate", sc::num(r)}};
  if (proto == sc::Protocol::SiftingA || proto == sc::Protocol::SiftingB) {
    res["success_probability"] = sc::num(sc::sift(n, proto).success_prob);
    const auto spread = sc::branch_equivalence(n, proto, sc::build_compound());
    o.report.tolerance("branch_equivalence", opt.tolerance);
    o.report.check("all sifting branches agree", spread.rate_spread <= opt.tolerance &&
                                                     spread.success_spread <= opt.tolerance &&
                                                     spread.key_distribution_spread <= opt.tolerance,
                   fmt(spread.rate_spread));
    res["branches"] = spread.branches;
  }
  o.report.result() = res;
  if (opt.format == "csv") {
    o.text = "protocol,p,q,rate\n" + protocol + "," + fmt(p) + "," + fmt(q) + "," + fmt(r) + "\n";
  }
  return o;
}

Output qkd_contour(const Options& opt, const std::string& protocol, double q_min, double q_max,
                   int steps) {
  Output o{sc::Report("qkd contour")};
  const auto proto = sc::parse_protocol(protocol);
  if (steps < 1 || q_min < 0.0 || q_max > 1.0 || q_min > q_max) {
    throw sc::InvalidParams("need steps >= 1 and 0 <= q-min <= q-max <= 1");
  }
  std::vector<double> grid;
  for (int i = 0; i < steps; ++i)
    grid.push_back(steps == 1 ? q_min : q_min + (q_max - q_min) * i / (steps - 1));
  const auto curve = sc::zero_rate_contour(proto, grid);
  o.report.tolerance("bisection", sc::kContourResolution);
  sc::Json pts = sc::Json::array();
  for (const auto& pt : curve.points) {
    sc::Json j{{"q", sc::num(pt.q)}, {"status", sc::to_string(pt.status)}};
    j["p_zero"] = pt.p_zero ? sc::num(*pt.p_zero) : sc::Json(nullptr);
    pts.push_back(j);
  }
  sc::Json res{{"protocol", protocol}, {"points", pts}};
  try {
    res["threshold_q_at_p0"] = sc::num(sc::threshold_q(proto, 0.0));
  } catch (const sc::NoSignChange&) {
    res["threshold_q_at_p0"] = nullptr;
  }
  o.report.result() = res;
  if (opt.format != "json") o.text = curve.to_csv();
  return o;
}

Output qkd_estimate(const std::string& path) {
  Output o{sc::Report("qkd estimate")};
  o.report.tolerance("feasibility", sc::kEstimateTolerance);
  std::ifstream in(path);
  if (!in) throw sc::ParseError("cannot open " + path);
  sc::Json doc;
  try {
    doc = sc::Json::parse(in);
  } catch (const std::exception& e) {
    throw sc::ParseError(e.what());
  }
  sc::Statistics s;
  try {
    s.k_agreement = doc.at("k_agreement").get<double>();
    s.sifting_a_success = doc.at("sifting_a_success").get<double>();
  } catch (const std::exception& e) {
    throw sc::ParseError(std::string("stats need k_agreement and sifting_a_success: ") + e.what());
  }
  const auto n = sc::estimate_params(s);
  o.report.check("statistics lie in the family", true);
  o.report.result() = {{"p", sc::num(n.p)}, {"q", sc::num(n.q)}};
  return o;
}

Output appendixc_check() {
  Output o{sc::Report("appendixc check")};
  o.report.tolerance("entrywise", 1e-12);
  const auto r = sc::bipartite_identity_residuals();
  o.report.check("bipartite identities and fourth powers", r.worst() <= 1e-12, fmt(r.worst()));
  o.report.result() = sc::residuals_json(r);
  return o;
}

int failure(const std::string& command, const std::exception& e, const Options& opt) {
  sc::Report r(command);
  r.check("completed", false, e.what());
  Output o{r};
  o.exit_override = kCheckFailure;
  emit(o, opt);
  std::cerr << e.what() << "\n";
  return kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SIC-compound verification, search, certification and key-rate tools"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--tolerance", opt.tolerance, "Derived-quantity tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out", opt.out, "Write the report to this file");
  app.add_option("--seed", opt.seed, "Base random seed")->capture_default_str();
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));

  auto* compound = app.add_subcommand("compound", "The d = 4 SIC-compound");
  compound->require_subcommand(1);
  compound->fallthrough();
  auto* c_verify = compound->add_subcommand("verify", "Exhaustive census of SICs and bases");
  auto* c_latin = compound->add_subcommand("latin", "Latin-square labelling");
  auto* c_export = compound->add_subcommand("export", "All 64 states as JSON");

  auto* mubs = app.add_subcommand("mubs", "Pretty good measurements and MUBs");
  mubs->require_subcommand(1);
  mubs->fallthrough();
  auto* m_extract = mubs->add_subcommand("extract", "Extract the five MUBs");

  auto* search = app.add_subcommand("search", "Orthogonal fiducial searches");
  search->require_subcommand(1);
  search->fallthrough();
  auto* s_qutrit = search->add_subcommand("qutrit", "Qutrit orthogonal fiducials");
  auto* s_clique = search->add_subcommand("clique", "Maximum orthogonal family in a catalogue");
  std::string fiducials;
  int expect = -1;
  s_clique->add_option("--fiducials", fiducials, "Fiducial catalogue (JSON)");
  s_clique->add_option("--expect", expect, "Assert the maximum family size");

  auto* certify = app.add_subcommand("certify", "Prepare-and-measure certification");
  certify->require_subcommand(1);
  certify->fallthrough();
  int dim = 2, seeds = 16, iters = 2000;
  auto* cb = certify->add_subcommand("bound", "Analytic bound");
  cb->add_option("--dim", dim)->required()->check(CLI::Range(2, 64));
  auto* cs = certify->add_subcommand("seesaw", "See-saw maximisation of H");
  cs->add_option("--dim", dim)->required()->check(CLI::Range(2, 16));
  cs->add_option("--seeds", seeds)->capture_default_str()->check(CLI::PositiveNumber);
  cs->add_option("--iters", iters)->capture_default_str()->check(CLI::PositiveNumber);

  auto* qkd = app.add_subcommand("qkd", "Key rates");
  qkd->require_subcommand(1);
  qkd->fallthrough();
  double p = 0.0, q = 0.0, q_min = 0.0, q_max = 0.35;
  int steps = 50;
  std::string protocol = "sifting-b", stats;
  const auto protocols = CLI::IsMember({"sifting-a", "sifting-b", "five-mub", "coherent-info"});
  auto* q_rate = qkd->add_subcommand("rate", "Rate at one (p, q)");
  q_rate->add_option("--p", p)->required();
  q_rate->add_option("--q", q)->required();
  q_rate->add_option("--protocol", protocol)->capture_default_str()->check(protocols);
  auto* q_contour = qkd->add_subcommand("contour", "Zero-rate contour p_zero(q)");
  q_contour->add_option("--protocol", protocol)->capture_default_str()->check(protocols);
  q_contour->add_option("--q-min", q_min)->capture_default_str();
  q_contour->add_option("--q-max", q_max)->capture_default_str();
  q_contour->add_option("--steps", steps)->capture_default_str();
  auto* q_estimate = qkd->add_subcommand("estimate", "Recover (p, q) from observed frequencies");
  q_estimate->add_option("--stats", stats)->required();

  auto* appc = app.add_subcommand("appendixc", "Twin Weyl-Heisenberg group");
  appc->require_subcommand(1);
  appc->fallthrough();
  auto* a_check = appc->add_subcommand("check", "Bipartite Heisenberg identities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return e.get_exit_code() == 0 ? code : kUsageError;
  }

  std::string command = "siccompound";
  try {
    Output out{sc::Report("")};
    if (*c_verify) {
      command = "compound verify";
      out = compound_verify(opt);
    } else if (*c_latin) {
      command = "compound latin";
      out = compound_latin(opt);
    } else if (*c_export) {
      command = "compound export";
      out = compound_export(opt);
    } else if (*m_extract) {
      command = "mubs extract";
      out = mubs_extract(opt);
    } else if (*s_qutrit) {
      command = "search qutrit";
      out = search_qutrit(opt);
    } else if (*s_clique) {
      command = "search clique";
      out = search_clique(opt, fiducials, expect);
    } else if (*cb) {
      command = "certify bound";
      out = certify_bound(dim);
    } else if (*cs) {
      command = "certify seesaw";
      out = certify_seesaw(opt, dim, seeds, iters);
    } else if (*q_rate) {
      command = "qkd rate";
      out = qkd_rate(opt, p, q, protocol);
    } else if (*q_contour) {
      command = "qkd contour";
      if (opt.format.empty()) opt.format = "csv";
      out = qkd_contour(opt, protocol, q_min, q_max, steps);
    } else if (*q_estimate) {
      command = "qkd estimate";
      out = qkd_estimate(stats);
    } else if (*a_check) {
      command = "appendixc check";
      out = appendixc_check();
    }
    return emit(out, opt);
  } catch (const sc::InvalidParams& e) {
    std::cerr << e.what() << "\n";
    return kUsageError;
  } catch (const sc::Error& e) {
    return failure(command, e, opt);
  }
}
