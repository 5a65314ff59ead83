#include "hfsign/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "hfsign/common.hpp"
#include "hfsign/homology.hpp"
#include "json.hpp"

namespace hfsign {

namespace {

using nlohmann::json;

struct Output {
  std::string path;  // empty = stdout
  void write(std::ostream& fallback, const std::string& text) const {
    if (path.empty()) {
      fallback << text;
      if (!text.empty() && text.back() != '\n') fallback << "\n";
      return;
    }
    std::ofstream f(path);
    if (!f) throw Error("cannot open output file: " + path);
    f << text;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

GridDiagram load_diagram(const std::string& path) {
  try {
    return GridDiagram::from_json(slurp(path));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad diagram file: ") + e.what());
  }
}

SignFunction diagram_sign_function(const GridDiagram& d) {
  return sign_function(shared_evaluator(d.n, d.b_stabilizations));
}

int run_counts(int n, const std::string& format, const Output& out, std::ostream& os) {
  long long g = generator_count(n), b = bigon_count(n), r = rectangle_count(n);
  if (format == "json") {
    json j{{"n", n}, {"generators", g}, {"bigons", b}, {"rectangles", r}};
    out.write(os, j.dump());
  } else {
    std::ostringstream s;
    s << g << " generators, " << b << " bigons, " << r << " rectangles\n";
    out.write(os, s.str());
  }
  return 0;
}

int run_solve(int n, const std::string& engine, bool allow_large, int gauge_seed,
              const std::string& dump_system, const std::string& format,
              const Output& out, std::ostream& os) {
  if (!dump_system.empty()) {
    GF2System sys = engine == "profile1" ? profile1_system(n)
                                         : enumerate_relation_rows(n, FamAll);
    std::ofstream f(dump_system);
    if (!f) throw Error("cannot open " + dump_system);
    f << sys.to_text();
  }
  SolveResult res =
      engine == "profile1" ? solve_profile1(n) : solve_global(n, allow_large, gauge_seed);
  if (format == "text") {
    std::ostringstream s;
    s << "engine " << engine << " n " << n << " dimension " << res.dimension
      << " entries " << res.table.entries.size() << "\n";
    out.write(os, s.str());
  } else {
    json j = json::parse(res.table.to_json());
    j["dimension"] = res.dimension;
    out.write(os, j.dump());
  }
  return 0;
}

int run_dimension(int n, bool allow_large, const Output& out, std::ostream& os) {
  SolveResult res = solve_global(n, allow_large);
  out.write(os, std::to_string(res.dimension) + "\n");
  return 0;
}

int run_sign_of(const std::string& flow_arg, const std::string& format,
                const Output& out, std::ostream& os) {
  std::string text = flow_arg;
  if (!flow_arg.empty() && flow_arg[0] == '@') text = slurp(flow_arg.substr(1));
  FormalFlow f = flow_from_json(text);
  int n = flow_power(f);
  if (n > profile1_solve_bound())
    throw PowerTooLarge("sign evaluation is bounded by the profile-1 solver");
  SignEvaluator ev(n);
  int s = ev.evaluate(f);
  if (format == "json") {
    json j{{"flow", flow_key(f)}, {"sign", s}};
    out.write(os, j.dump());
  } else {
    out.write(os, std::to_string(s) + "\n");
  }
  return 0;
}

int run_verify(int n, const std::string& families_csv, bool twisted, bool swapped,
               long long samples, uint64_t seed, int jobs,
               const std::string& format, const Output& out, std::ostream& os) {
  unsigned families = parse_families(families_csv);
  SignFunction s = sign_function(shared_evaluator(n));
  if (twisted) s = parity_twist(s);
  VerifyReport report = verify(s, n, families, swapped, samples, seed, jobs);
  out.write(os, format == "json" ? report.to_json() : report.to_text());
  return report.ok() ? 0 : 1;
}

int run_gauge_compare(int n, const std::string& table_a, const std::string& table_b,
                      const std::string& format, const Output& out, std::ostream& os) {
  SignTable a, b;
  if (!table_a.empty() && !table_b.empty()) {
    a = SignTable::from_json(slurp(table_a));
    b = SignTable::from_json(slurp(table_b));
  } else {
    a = materialize(sign_function(shared_evaluator(n)), n, "all_flows");
    b = solve_global(n).table;
  }
  auto g = find_gauge(a, b);
  if (format == "json") {
    json j{{"equivalent", g.has_value()}};
    if (g) j["restricted"] = g->restricted;
    out.write(os, j.dump());
  } else {
    out.write(os, g ? std::string("gauge equivalent\n") : std::string("NOT equivalent\n"));
  }
  return g ? 0 : 1;
}

int run_homology(const std::string& diagram_path, const std::string& coefficients,
                 int jobs, const std::string& dump_matrix, const std::string& format,
                 const Output& out, std::ostream& os) {
  GridDiagram d = load_diagram(diagram_path);
  if (coefficients == "f2") {
    long long dim = gf2_homology_dimension(d);
    out.write(os, format == "json" ? json{{"f2_dim", dim}}.dump()
                                   : std::to_string(dim) + "\n");
    return 0;
  }
  SignFunction s = diagram_sign_function(d);
  if (!dump_matrix.empty()) {
    std::ofstream f(dump_matrix);
    if (!f) throw Error("cannot open " + dump_matrix);
    f << differential(d, s, jobs).to_triplet_text();
  }
  HomologyResult h = homology(d, s, jobs);
  if (coefficients == "q") {
    out.write(os, format == "json" ? json{{"q_rank", h.q_rank}}.dump()
                                   : std::to_string(h.q_rank) + "\n");
    return 0;
  }
  out.write(os, format == "json" ? h.to_json() : h.to_text());
  return 0;
}

int run_stabilize(const std::string& diagram_path, int count, const Output& out,
                  std::ostream& os) {
  GridDiagram d = load_diagram(diagram_path);
  for (int k = 0; k < count; ++k) d = b_stabilize(d);
  out.write(os, d.to_json());
  return 0;
}

int run_invariance(const std::string& diagram_path, int trials, uint64_t seed,
                   int jobs, const std::string& format, const Output& out,
                   std::ostream& os) {
  GridDiagram d = load_diagram(diagram_path);
  SignFunction s = diagram_sign_function(d);
  HomologyResult ref = homology(d, s, jobs);
  json j;
  j["diagram"] = diagram_path;
  j["trials"] = trials;
  j["reference"] = json::parse(ref.to_json());
  bool all_equal = true;
  Rng rng(seed);

  for (int t = 0; t < trials; ++t) {
    HomologyResult h = homology(d, seeded_gauge(s, rng.next()), jobs);
    if (!(h == ref)) all_equal = false;
  }
  for (int t = 0; t < trials; ++t) {
    GridDiagram v = d;
    v.alpha_order = rng.permutation(d.n);
    v.beta_order = rng.permutation(d.n);
    HomologyResult h = homology(v, diagram_sign_function(v), jobs);
    if (!(h == ref)) all_equal = false;
  }
  for (int t = 0; t < trials; ++t) {
    GridDiagram v = d;
    for (int k = 0; k < d.n; ++k) {
      v.alpha_orient[k] = static_cast<int8_t>(rng.sign());
      v.beta_orient[k] = static_cast<int8_t>(rng.sign());
    }
    HomologyResult h = homology(v, diagram_sign_function(v), jobs);
    if (!(h == ref)) all_equal = false;
  }
  j["all_equal"] = all_equal;
  if (format == "text") {
    std::ostringstream ss;
    ss << "reference: " << ref.to_json() << "\n"
       << (all_equal ? "homology invariant across all trials\n"
                     : "homology CHANGED in some trial\n");
    out.write(os, ss.str());
  } else {
    out.write(os, j.dump());
  }
  return all_equal ? 0 : 1;
}

int run_calibrate(int n_max, int jobs, const std::string& format, const Output& out,
                  std::ostream& os) {
  (void)jobs;
  json j;
  bool ok = true;
  auto record = [&](const std::string& name, bool pass) {
    j[name] = pass;
    ok = ok && pass;
  };

  // companion algebra on small powers
  bool comp_ok = true;
  for (int n = 1; n <= std::min(n_max, 3); ++n) {
    auto [bigons, rects] = enumerate_flows(n);
    std::vector<FormalFlow> flows;
    for (auto& b : bigons) flows.emplace_back(std::move(b));
    for (auto& r : rects) flows.emplace_back(std::move(r));
    for (const auto& f : flows) {
      for (CompanionKind k : {CompanionKind::Alpha, CompanionKind::Beta}) {
        FormalFlow c = companion(f, k);
        comp_ok = comp_ok && validate_flow(c) &&
                  flow_key(companion(c, k)) == flow_key(f) &&
                  flow_start(c) == flow_end(f) && flow_end(c) == flow_start(f) &&
                  flow_key(c) != flow_key(f);
      }
      comp_ok = comp_ok && flow_key(companion(f, CompanionKind::Alpha)) !=
                               flow_key(companion(f, CompanionKind::Beta));
    }
  }
  record("companions", comp_ok);

  // the four basic-relation variants impose one constraint at n = 2
  bool basic_ok = true;
  {
    auto [bigons, rects] = enumerate_flows(2);
    (void)bigons;
    for (const auto& r : rects) {
      for (RectEdge e :
           {RectEdge::Bottom, RectEdge::Top, RectEdge::Left, RectEdge::Right}) {
        FormalRectangle rev = reverse_edge(r, e);
        int want = 2;
        for (const FormalRectangle& base : {r, rev}) {
          for (BasicEndpoint ep : {BasicEndpoint::StartCorner, BasicEndpoint::EndCorner}) {
            RelationInstance rel = basic_relation(base, e, ep);
            int c = -bigon_sign(std::get<FormalBigon>(rel.flows[1])) *
                    bigon_sign(std::get<FormalBigon>(rel.flows[2]));
            if (want == 2) want = c;
            else if (want != c) basic_ok = false;
          }
        }
      }
    }
  }
  record("basic_relation_variants", basic_ok);

  // full solve: consistent, right dimension, every row satisfied, evaluator matches
  bool rows_ok = true, gauge_ok = true;
  for (int n = 2; n <= n_max; ++n) {
    SolveResult res = solve_global(n);
    auto table = std::make_shared<SignTable>(res.table);
    SignFunction ts = sign_function(table);
    VerifyReport rep = verify(ts, n, FamAll);
    rows_ok = rows_ok && rep.ok();
    SignTable evt = materialize(sign_function(shared_evaluator(n)), n, "all_flows");
    gauge_ok = gauge_ok && find_gauge(evt, res.table).has_value();
  }
  record("solver_rows_satisfied", rows_ok);
  record("evaluator_gauge_equivalent", gauge_ok);

  // stabilization conventions: canceling bigon pairs and doubled homology
  bool stab_ok = true;
  {
    GridDiagram d = GridDiagram::make(2, {1, 2});
    GridDiagram ds = b_stabilize(d);
    SignFunction s0 = diagram_sign_function(d);
    SignFunction s1 = diagram_sign_function(ds);
    DiagramBasis basis = diagram_basis(ds);
    for (const auto& g : basis.gens) {
      std::vector<FormalFlow> stab_flows;
      for (const auto& [flow, y] : flows_from(ds, g)) {
        (void)y;
        if (std::holds_alternative<StabBigonFlow>(flow))
          stab_flows.push_back(to_formal(ds, flow, g));
      }
      if (stab_flows.size() == 2)
        stab_ok = stab_ok && s1(stab_flows[0]) == -s1(stab_flows[1]);
    }
    stab_ok = stab_ok && differential(ds, s1).is_zero() == differential(d, s0).is_zero();
    HomologyResult h0 = homology(d, s0);
    HomologyResult h1 = homology(ds, s1);
    stab_ok = stab_ok && h1.betti == 2 * h0.betti;
  }
  record("stabilization_conventions", stab_ok);

  if (format == "text") {
    std::ostringstream ss;
    for (auto it = j.begin(); it != j.end(); ++it)
      ss << (it.value().get<bool>() ? "PASS " : "FAIL ") << it.key() << "\n";
    ss << (ok ? "calibration passed\n" : "calibration FAILED\n");
    out.write(os, ss.str());
  } else {
    j["ok"] = ok;
    out.write(os, j.dump());
  }
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact sign assignments and integral grid-diagram Floer homology"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  std::string output_path;
  int jobs = 1;
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output", output_path, "write the report to a file");
  app.add_option("--jobs", jobs, "worker pool size")->check(CLI::PositiveNumber);

  int n = 2;
  bool allow_large = false;
  std::string engine = "global";
  int gauge_seed = 0;
  std::string dump_system, dump_matrix;
  std::string flow_arg;
  std::string families_csv = "all";
  bool twisted = false;
  bool swapped = false;
  long long samples = 0;
  uint64_t seed = 0;
  std::string diagram_path, table_a, table_b, coefficients = "z";
  int trials = 5, stab_count = 1, n_max = 3;

  auto* counts = app.add_subcommand("counts", "formal object counts");
  counts->fallthrough();
  counts->add_option("--n", n, "power")->required();

  auto* solve = app.add_subcommand("solve", "solve for a sign table");
  solve->fallthrough();
  solve->add_option("--n", n, "power")->required();
  solve->add_option("--engine", engine, "profile1 or global")
      ->check(CLI::IsMember({"profile1", "global"}));
  solve->add_flag("--allow-large", allow_large, "allow the n=4 global solve");
  solve->add_option("--gauge-seed", gauge_seed, "alternate gauge-fixing root");
  solve->add_option("--dump-system", dump_system, "write the GF(2) system to a file");

  auto* dimension = app.add_subcommand("dimension", "pre-gauge solution space dimension");
  dimension->fallthrough();
  dimension->add_option("--n", n, "power")->required();
  dimension->add_flag("--allow-large", allow_large, "allow the n=4 global solve");

  auto* sign_of = app.add_subcommand("sign-of", "evaluate the sign of one flow");
  sign_of->fallthrough();
  sign_of->add_option("--flow", flow_arg, "flow JSON (or @file)")->required();

  auto* verify_cmd = app.add_subcommand("verify", "check the sign axioms");
  verify_cmd->fallthrough();
  verify_cmd->add_option("--n", n, "power")->required();
  verify_cmd->add_option("--families", families_csv, "comma-separated families");
  verify_cmd->add_flag("--twisted", twisted, "verify the parity twist of the assignment");
  verify_cmd->add_flag("--swapped", swapped, "check the role-swapped degeneration axioms");
  verify_cmd->add_option("--samples", samples, "random instances instead of exhaustive");
  verify_cmd->add_option("--seed", seed, "sampling seed");

  auto* gauge_cmp = app.add_subcommand("gauge-compare", "test gauge equivalence");
  gauge_cmp->fallthrough();
  gauge_cmp->add_option("--n", n, "power");
  gauge_cmp->add_option("--table-a", table_a, "sign table JSON file");
  gauge_cmp->add_option("--table-b", table_b, "sign table JSON file");

  auto* homology_cmd = app.add_subcommand("homology", "integral homology of a diagram");
  homology_cmd->fallthrough();
  homology_cmd->add_option("--diagram", diagram_path, "diagram JSON file")->required();
  homology_cmd->add_option("--coefficients", coefficients, "z, f2 or q")
      ->check(CLI::IsMember({"z", "f2", "q"}));
  homology_cmd->add_option("--dump-matrix", dump_matrix, "write the boundary matrix");

  auto* stabilize = app.add_subcommand("stabilize", "apply type-b stabilizations");
  stabilize->fallthrough();
  stabilize->add_option("--diagram", diagram_path, "diagram JSON file")->required();
  stabilize->add_option("--count", stab_count, "number of stabilizations");

  auto* invariance = app.add_subcommand("invariance", "homology independence trials");
  invariance->fallthrough();
  invariance->add_option("--diagram", diagram_path, "diagram JSON file")->required();
  invariance->add_option("--trials", trials, "trials per variation");
  invariance->add_option("--seed", seed, "random seed");

  auto* calibrate = app.add_subcommand("calibrate", "run the convention calibration suite");
  calibrate->fallthrough();
  calibrate->add_option("--n-max", n_max, "largest power for the full solve")
      ->check(CLI::Range(2, 3));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\nhint: run with --help for the grammar\n";
    return 2;
  }

  Output sink{output_path};
  try {
    if (*counts) return run_counts(n, format, sink, out);
    if (*solve) return run_solve(n, engine, allow_large, gauge_seed, dump_system,
                                 format, sink, out);
    if (*dimension) return run_dimension(n, allow_large, sink, out);
    if (*sign_of) return run_sign_of(flow_arg, format, sink, out);
    if (*verify_cmd)
      return run_verify(n, families_csv, twisted, swapped, samples, seed, jobs, format, sink, out);
    if (*gauge_cmp) return run_gauge_compare(n, table_a, table_b, format, sink, out);
    if (*homology_cmd)
      return run_homology(diagram_path, coefficients, jobs, dump_matrix, format, sink, out);
    if (*stabilize) return run_stabilize(diagram_path, stab_count, sink, out);
    if (*invariance) return run_invariance(diagram_path, trials, seed, jobs, format, sink, out);
    if (*calibrate) return run_calibrate(n_max, jobs, format, sink, out);
    err << "error: no subcommand selected\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nhint: run with --help for the grammar\n";
    return 2;
  } catch (const PowerTooLarge& e) {
    err << "error: " << e.what() << "\nhint: HFSIGN_MAX_N raises the enumeration bound\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hfsign
