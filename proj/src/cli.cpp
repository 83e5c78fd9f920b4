#include "heisenlab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <sstream>

#include "heisenlab/census.hpp"
#include "heisenlab/commgraph.hpp"
#include "heisenlab/config.hpp"
#include "heisenlab/errors.hpp"
#include "heisenlab/heisenberg.hpp"
#include "heisenlab/rado.hpp"
#include "heisenlab/utgroup.hpp"
#include "heisenlab/walklab.hpp"

namespace heisenlab::cli {

namespace {

using nlohmann::json;

json integer_json(const BigInt& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

json rational_json(const Rational& q) { return {{"num", integer_json(q.get_num())}, {"den", integer_json(q.get_den())}}; }

json residues_json(std::span<const Residue> v) { return json(std::vector<Residue>(v.begin(), v.end())); }

json heis_json(const HeisElem& a) {
  return {{"x", residues_json(a.x.entries())}, {"y", residues_json(a.y.entries())}, {"z", a.z}};
}

json matrix_json(const UtMatrix& a) {
  return {{"n", a.n()}, {"entries", residues_json(a.entries())}, {"text", to_string(a)}};
}

json histogram_json(const std::map<std::uint64_t, std::uint64_t>& h) {
  json out = json::array();
  for (const auto& [k, v] : h) out.push_back({k, v});
  return out;
}

json envelope(const std::string& command, json config) {
  config["workers"] = worker_count();
  return {{"version", kVersion}, {"command", command}, {"config", std::move(config)}};
}

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const long long v = std::stoll(item, &used);
    if (used != item.size()) throw DomainError("not an integer: " + item);
    out.push_back(v);
  }
  return out;
}

std::set<std::uint64_t> parse_set(const std::string& text) {
  std::set<std::uint64_t> out;
  for (auto v : parse_list(text)) {
    if (v < 0) throw DomainError("vertex ids are nonnegative");
    out.insert(static_cast<std::uint64_t>(v));
  }
  return out;
}

UtMatrix parse_matrix(std::size_t n, PrimeModulus p, const std::string& text) {
  const auto values = parse_list(text);
  if (values.empty()) return UtMatrix(n, p);
  return UtMatrix::from_entries(n, p, values);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct GraphOptions {
  std::string family = "heisenberg";
  std::uint32_t p = 3;
  std::size_t k = 1;
  std::string mode = "quotient";
  bool no_loops = false;

  void attach(CLI::App* app) {
    app->add_option("--family", family, "heisenberg or ut")->check(CLI::IsMember({"heisenberg", "ut"}));
    app->add_option("--p", p, "prime");
    app->add_option("--k", k, "Heisenberg rank k, or matrix size n for ut");
    app->add_option("--mode", mode, "full or quotient")->check(CLI::IsMember({"full", "quotient"}));
    app->add_flag("--no-loops", no_loops, "omit the loop at each vertex");
  }
  GraphParams params() const {
    GraphParams g;
    g.family = family == "ut" ? GroupFamily::ut : GroupFamily::heisenberg;
    g.p = p;
    g.k = k;
    g.mode = mode == "full" ? GraphMode::full : GraphMode::quotient;
    g.loops = !no_loops;
    return g;
  }
  json config() const { return {{"family", family}, {"p", p}, {"k", k}, {"mode", mode}, {"loops", !no_loops}}; }
};

std::string graph_command(const GraphOptions& o, const std::string& format) {
  const CommGraph g = build_graph(o.params());
  if (format == "edgelist") {
    std::ostringstream os;
    write_edgelist(g, os);
    return os.str();
  }
  json j = envelope("graph", o.config());
  j["vertices"] = g.size();
  j["ordered_edges"] = g.ordered_edge_count();
  json tags = json::array();
  for (const auto& t : g.tags()) tags.push_back(to_string(t));
  j["tags"] = std::move(tags);
  json edges = json::array();
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t v = u; v < g.size(); ++v) {
      if (g.adjacent(u, v)) edges.push_back({u, v});
    }
  }
  j["edges"] = std::move(edges);
  return dump(j);
}

std::string quasi_command(const GraphOptions& o) {
  const CommGraph g = build_graph(o.params());
  const QuasiStats s = quasi_stats(g);
  json j = envelope("quasi", o.config());
  j["n"] = s.n;
  j["ordered_edges"] = s.ordered_edges;
  j["density"] = rational_json(s.density);
  j["codegree_deviation_sum"] = rational_json(s.codegree_deviation_sum);
  j["normalized_sum"] = rational_json(s.normalized_sum);
  j["degree_histogram"] = histogram_json(s.degree_histogram);
  j["codegree_histogram"] = histogram_json(s.codegree_histogram);
  return dump(j);
}

std::string embed_command(const std::string& path, std::uint32_t p) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read graph file " + path);
  const SimpleGraph graph = read_edgelist(in);
  const EmbeddingWitness w = embed_graph(graph, PrimeModulus(p));
  json j = envelope("embed", {{"graph", path}, {"p", p}});
  j["k"] = w.k;
  j["p"] = w.p;
  json images = json::array();
  for (const auto& img : w.vertex_images) images.push_back(heis_json(img));
  j["vertex_images"] = std::move(images);
  j["distinct_noncentral"] = w.distinct_noncentral;
  j["pattern_matches"] = w.pattern_matches;
  j["verified"] = w.verified;
  return dump(j);
}

json mass_json(const MassForm& m) {
  json j = {{"order", m.order},
            {"dyadic", rational_json(m.dyadic)},
            {"tail_coeff", rational_json(m.tail_coeff)},
            {"approx", static_cast<double>(m.approx())},
            {"certified_error", 1e-15}};
  if (m.tail_coeff == 0 || m.order <= MassForm::kExactOrderLimit) j["exact"] = rational_json(m.exact());
  return j;
}

json census_json(const CensusRecord& r) {
  json j = {{"n", r.n},
            {"p", r.p},
            {"order", r.order},
            {"classes", r.classes},
            {"commuting_pairs", integer_json(r.commuting_pairs)},
            {"probability", rational_json(r.probability)},
            {"log_p_classes", r.log_p_classes},
            {"higman_exponent", r.higman_exponent},
            {"soffer_exponent", r.soffer_exponent}};
  if (r.pairs_direct) j["pairs_direct_agrees"] = *r.pairs_direct;
  return j;
}

std::string label_set(const std::set<std::size_t>& s) {
  json j = json(std::vector<std::size_t>(s.begin(), s.end()));
  return j.dump();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Commuting graphs of Heisenberg and unitriangular groups, Rado walks, mixing"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  unsigned workers = 0;
  std::string out_path;
  app.add_option("--workers", workers, "worker threads (0 keeps the default)");
  app.add_option("--out", out_path, "write the artifact here instead of stdout");

  GraphOptions graph_opts, quasi_opts;
  std::string graph_format = "edgelist";
  auto* graph = app.add_subcommand("graph", "build a commuting graph");
  graph_opts.attach(graph);
  graph->add_option("--format", graph_format, "edgelist or json")->check(CLI::IsMember({"edgelist", "json"}));

  auto* quasi = app.add_subcommand("quasi", "quasirandomness statistics");
  quasi_opts.attach(quasi);

  std::string embed_path;
  std::uint32_t embed_p = 3;
  auto* embed = app.add_subcommand("embed", "embed a finite graph into a Heisenberg commuting graph");
  embed->add_option("--graph", embed_path, "edge-list file")->required();
  embed->add_option("--p", embed_p, "prime");

  // rado
  auto* rado = app.add_subcommand("rado", "Rado graph models");
  rado->require_subcommand(1);
  std::uint64_t ri = 0, rj = 1, rq1 = 5, rq2 = 13, rlimit = 128, rstart = 0, rsteps = 100, rseed = 1;
  std::uint64_t rpool = kDefaultPrimeBound;
  std::string rmodel = "bit", ru, rv;
  auto* r_adj = rado->add_subcommand("adjacent", "bit-model adjacency");
  r_adj->add_option("--i", ri)->required();
  r_adj->add_option("--j", rj)->required();
  auto* r_leg = rado->add_subcommand("legendre", "Legendre-model adjacency");
  r_leg->add_option("--q1", rq1)->required();
  r_leg->add_option("--q2", rq2)->required();
  auto* r_wit = rado->add_subcommand("witness", "extension-property witness");
  r_wit->add_option("--model", rmodel)->check(CLI::IsMember({"bit", "legendre"}));
  r_wit->add_option("--U", ru, "comma-separated vertices");
  r_wit->add_option("--V", rv, "comma-separated vertices");
  r_wit->add_option("--pool", rpool, "sieve bound for the Legendre prime pool");
  auto* r_mass = rado->add_subcommand("mass", "neighbourhood mass Q(N(i))");
  r_mass->add_option("--i", ri)->required();
  auto* r_stat = rado->add_subcommand("stationary", "stationary weights with a detailed-balance certificate");
  r_stat->add_option("--L", rlimit, "truncation");
  auto* r_traj = rado->add_subcommand("trajectory", "sampled walk trajectory");
  r_traj->add_option("--start", rstart);
  r_traj->add_option("--steps", rsteps);
  r_traj->add_option("--seed", rseed);

  // walk
  auto* walk = app.add_subcommand("walk", "mixing experiments");
  walk->require_subcommand(1);
  std::uint64_t wstart = 0, wsteps = 200, wlimit = kDefaultTruncation, wseed = 0;
  std::uint32_t wp = 3;
  std::string wformat = "json";
  auto* w_rado = walk->add_subcommand("rado", "truncated evolution of the Rado walk");
  w_rado->add_option("--start", wstart);
  w_rado->add_option("--steps", wsteps);
  w_rado->add_option("--L", wlimit, "truncation");
  w_rado->add_option("--seed", wseed, "recorded for reproducibility; the evolution is deterministic");
  auto* w_h3 = walk->add_subcommand("h3", "nearest-neighbour walk on H_3(p)");
  w_h3->add_option("--p", wp);
  w_h3->add_option("--steps", wsteps);
  w_h3->add_option("--format", wformat)->check(CLI::IsMember({"json", "csv"}));

  // ut
  auto* ut = app.add_subcommand("ut", "unitriangular core/shell calculus");
  ut->require_subcommand(1);
  std::size_t un = 3, uk = 2, ul = 3;
  std::uint32_t up = 2;
  std::string ua, ub;
  std::vector<std::string> uclique;
  bool uverify = true;
  auto add_np = [&](CLI::App* c) {
    c->add_option("--n", un, "matrix size");
    c->add_option("--p", up, "prime");
  };
  auto* u_tower = ut->add_subcommand("tower", "iterated cores of X");
  add_np(u_tower);
  u_tower->add_option("--x", ua, "upper entries, row-major");
  auto* u_sigma = ut->add_subcommand("sigma", "column and row sets of A");
  add_np(u_sigma);
  u_sigma->add_option("--a", ua);
  auto* u_eq = ut->add_subcommand("equations", "shell equations for cores A, B");
  add_np(u_eq);
  u_eq->add_option("--a", ua);
  u_eq->add_option("--b", ub);
  auto* u_deg = ut->add_subcommand("deg", "degree of X over B");
  add_np(u_deg);
  u_deg->add_option("--x", ua);
  u_deg->add_option("--b", ub, "entries of B; empty for the root");
  std::size_t ub_n = 1;
  u_deg->add_option("--b-size", ub_n, "size of B");
  auto* u_lift = ut->add_subcommand("lift", "clique lift to a multipartite Heisenberg graph");
  add_np(u_lift);
  u_lift->add_option("--matrix", uclique, "one core per occurrence")->required();
  u_lift->add_flag("!--no-verify", uverify);
  auto* u_part = ut->add_subcommand("equipartition", "block classification for cores A, B");
  add_np(u_part);
  u_part->add_option("--a", ua);
  u_part->add_option("--b", ub);
  u_part->add_flag("!--no-verify", uverify);
  auto* u_andre = ut->add_subcommand("andre", "single-class test for the set C(k, l)");
  add_np(u_andre);
  u_andre->add_option("--k", uk);
  u_andre->add_option("--l", ul);
  auto* u_semi = ut->add_subcommand("semidirect", "splitting of U_{n+2} over the shell");
  add_np(u_semi);

  // census
  auto* census = app.add_subcommand("census", "conjugacy census and Erdos-Turan check");
  std::string cfamily = "ut", cn = "3,4", cp = "2";
  census->add_option("--family", cfamily)->check(CLI::IsMember({"ut", "heisenberg"}));
  census->add_option("--n", cn, "sizes (ut) or ranks (heisenberg), comma-separated");
  census->add_option("--p", cp, "primes, comma-separated");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    if (e.get_exit_code() != 0) err << app.help();
    return kExitValidation;
  }
  if (workers > 0) set_worker_count(workers);

  try {
    std::string artifact;
    if (graph->parsed()) {
      artifact = graph_command(graph_opts, graph_format);
    } else if (quasi->parsed()) {
      artifact = quasi_command(quasi_opts);
    } else if (embed->parsed()) {
      artifact = embed_command(embed_path, embed_p);
    } else if (rado->parsed()) {
      json j;
      if (r_adj->parsed()) {
        j = envelope("rado adjacent", {{"i", ri}, {"j", rj}});
        j["adjacent"] = rado_adjacent(ri, rj);
        j["loop_query"] = ri == rj;
      } else if (r_leg->parsed()) {
        j = envelope("rado legendre", {{"q1", rq1}, {"q2", rq2}});
        j["adjacent"] = legendre_adjacent(rq1, rq2);
      } else if (r_wit->parsed()) {
        j = envelope("rado witness", {{"model", rmodel}, {"U", ru}, {"V", rv}, {"pool", rpool}});
        const RadoModel model = rmodel == "bit" ? RadoModel::bit() : RadoModel::legendre(rpool);
        const auto w = extension_witness(model, parse_set(ru), parse_set(rv));
        j["witness"] = w.least;
        if (w.direct) j["direct"] = *w.direct;
      } else if (r_mass->parsed()) {
        j = envelope("rado mass", {{"i", ri}});
        j["mass"] = mass_json(neighborhood_mass(ri));
      } else if (r_stat->parsed()) {
        j = envelope("rado stationary", {{"L", rlimit}});
        const auto sv = stationary_vector(rlimit);
        const auto& c = sv.certificate;
        j["certificate"] = {{"limit", c.limit},
                            {"adjacent_pairs", c.adjacent_pairs},
                            {"nonadjacent_pairs", c.nonadjacent_pairs},
                            {"symbolic_holds", c.symbolic_holds},
                            {"expanded_pairs", c.expanded_pairs},
                            {"expanded_holds", c.expanded_holds}};
        json weights = json::array();
        for (std::size_t i = 0; i < sv.weights.size(); ++i) {
          weights.push_back({{"vertex", i}, {"coefficient", rational_json(sv.weights[i].coefficient)}});
        }
        j["weights"] = std::move(weights);
        j["weight_form"] = "coefficient * Q(N(vertex))";
      } else {
        std::ostringstream os;
        write_trajectory(run_trajectory(rstart, rsteps, rseed), rseed, os);
        artifact = os.str();
      }
      if (artifact.empty()) artifact = dump(j);
    } else if (walk->parsed()) {
      std::ostringstream os;
      if (w_rado->parsed()) {
        const auto est = mixing_estimate(wstart, wsteps, wlimit);
        if (est.leak_warning) err << "warning: leaked mass exceeds 0.1; use a larger --L\n";
        write_mixing_csv(est, os);
        artifact = os.str();
      } else {
        const MixReport r = h3_mix_report(PrimeModulus(wp), wsteps);
        if (wformat == "csv") {
          write_tv_csv(r.tv, os);
          artifact = os.str();
        } else {
          json j = envelope("walk h3", {{"p", wp}, {"steps", wsteps}, {"format", wformat}});
          j["p"] = r.p;
          j["states"] = r.states;
          j["uniform_stationary"] = r.uniform_stationary;
          j["gap"] = {{"value", r.gap.gap},
                      {"lambda2", r.gap.lambda2},
                      {"lambda_min", r.gap.lambda_min},
                      {"power_iteration_slem", r.gap.power_slem},
                      {"certified_error", kSpectralAgreement},
                      {"degenerate", r.gap.degenerate}};
          json curve = json::array();
          for (const auto& pt : r.tv) curve.push_back({{"step", pt.step}, {"tv", pt.tv}, {"certified_error", pt.certified_error}});
          j["tv_curve"] = std::move(curve);
          j["start"] = r.start;
          j["steps_to_quarter"] = r.steps_to_quarter ? json(*r.steps_to_quarter) : json(nullptr);
          artifact = dump(j);
        }
      }
    } else if (ut->parsed()) {
      const PrimeModulus p(up);
      json cfg = {{"n", un}, {"p", up}};
      json j;
      if (u_tower->parsed()) {
        cfg["x"] = ua;
        j = envelope("ut tower", cfg);
        const Tower t = tower(parse_matrix(un, p, ua));
        json nodes = json::array();
        for (const auto& node : t.nodes) {
          json m = matrix_json(node.matrix);
          m["level"] = node.level;
          m["fiber_size"] = node.matrix.n() >= 1 ? fiber_size(node.matrix) : 1;
          nodes.push_back(std::move(m));
        }
        j["nodes"] = std::move(nodes);
        j["bottoms_at_u2"] = t.bottoms_at_u2;
      } else if (u_sigma->parsed()) {
        cfg["a"] = ua;
        j = envelope("ut sigma", cfg);
        const SigmaTau st = sigma_tau(parse_matrix(un, p, ua));
        j["sigma"] = json::parse(label_set(st.sigma));
        j["tau"] = json::parse(label_set(st.tau));
        j["symmetrized"] = json::parse(label_set(symmetrize(st)));
      } else if (u_eq->parsed()) {
        cfg["a"] = ua;
        cfg["b"] = ub;
        j = envelope("ut equations", cfg);
        const auto sys = equation_system(parse_matrix(un, p, ua), parse_matrix(un, p, ub));
        auto eq_json = [](const LinearEquation& e) {
          return json{{"row", e.row}, {"col", e.col}, {"coeff_x", e.coeff_x}, {"coeff_y", e.coeff_y}};
        };
        json a = json::array(), b = json::array();
        for (const auto& e : sys.group_a) a.push_back(eq_json(e));
        for (const auto& e : sys.group_b) b.push_back(eq_json(e));
        j["core_commutes"] = sys.core_commutes;
        j["group_a"] = std::move(a);
        j["group_b"] = std::move(b);
        j["heisenberg"] = sys.heisenberg;
        j["variable_order"] = "x_{1,2..n+1}, x_{2..n+1,n+2}";
      } else if (u_deg->parsed()) {
        cfg["x"] = ua;
        cfg["b"] = ub;
        cfg["b_size"] = ub_n;
        j = envelope("ut deg", cfg);
        j["degree"] = deg_over(parse_matrix(un, p, ua), parse_matrix(ub_n, p, ub));
      } else if (u_lift->parsed()) {
        cfg["matrices"] = uclique;
        cfg["verify"] = uverify;
        j = envelope("ut lift", cfg);
        std::vector<UtMatrix> clique;
        for (const auto& m : uclique) clique.push_back(parse_matrix(un, p, m));
        const CliqueLift lift = clique_lift(clique, uverify);
        j["symmetrized"] = json::parse(label_set(lift.symmetrized));
        j["m"] = lift.m;
        j["part_sizes"] = json::array();
        for (const auto& part : lift.parts) j["part_sizes"].push_back(part.size());
        j["bijective"] = lift.bijective;
        j["isomorphic"] = lift.isomorphic;
        j["pairs_checked"] = lift.pairs_checked;
      } else if (u_part->parsed()) {
        cfg["a"] = ua;
        cfg["b"] = ub;
        cfg["verify"] = uverify;
        j = envelope("ut equipartition", cfg);
        const Equipartition e = equipartition(parse_matrix(un, p, ua), parse_matrix(un, p, ub), uverify);
        j["symmetrized"] = json::parse(label_set(e.symmetrized));
        j["m"] = e.m;
        j["block_count"] = e.block_count;
        j["block_size"] = e.block_size;
        j["equal_sizes"] = e.equal_sizes;
        j["full_count"] = e.full_count;
        j["empty_count"] = e.empty_count;
        j["shifted_count"] = e.shifted_count;
        j["all_verified"] = e.all_verified;
        j["dichotomy_holds"] = e.dichotomy_holds();
      } else if (u_andre->parsed()) {
        cfg["k"] = uk;
        cfg["l"] = ul;
        j = envelope("ut andre", cfg);
        const AndreReport a = andre_class_check(un, p, uk, ul);
        j["set_size"] = a.set_size;
        j["orbit_size"] = a.orbit_size;
        j["is_single_class"] = a.is_single_class;
        j["unit_set_size"] = a.unit_set_size;
        j["unit_is_single_class"] = a.unit_is_single_class;
      } else {
        j = envelope("ut semidirect", cfg);
        const SemidirectReport s = semidirect_check(un, p);
        j["complement_isomorphic"] = s.complement_isomorphic;
        j["trivial_intersection"] = s.trivial_intersection;
        j["covers"] = s.covers;
        j["holds"] = s.holds();
      }
      artifact = dump(j);
    } else if (census->parsed()) {
      json j = envelope("census", {{"family", cfamily}, {"n", cn}, {"p", cp}});
      json records = json::array();
      for (auto n : parse_list(cn)) {
        for (auto pv : parse_list(cp)) {
          if (n < 1 || pv < 2) throw DomainError("census sizes must be positive and primes at least 2");
          const PrimeModulus p(static_cast<std::uint64_t>(pv));
          if (cfamily == "ut") {
            records.push_back(census_json(conjugacy_census(static_cast<std::size_t>(n), p)));
          } else {
            const auto r = erdos_turan_check(HeisenbergGroup(static_cast<std::size_t>(n), p));
            records.push_back({{"n", n},
                               {"p", pv},
                               {"order", r.order},
                               {"classes", r.classes},
                               {"commuting_pairs", r.commuting_pairs},
                               {"erdos_turan_holds", r.holds}});
          }
        }
      }
      j["records"] = std::move(records);
      artifact = dump(j);
    }

    if (out_path.empty()) {
      out << artifact;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw DomainError("cannot write " + out_path);
      file << artifact;
    }
    return kExitOk;
  } catch (const SizeCapError& e) {
    err << "size error: " << e.what() << '\n';
    return kExitCap;
  } catch (const PoolExhaustedError& e) {
    err << "size error: " << e.what() << '\n';
    return kExitCap;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace heisenlab::cli
