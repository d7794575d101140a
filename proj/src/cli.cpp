#include "gibbsdecomp/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "gibbsdecomp/decompose.hpp"
#include "gibbsdecomp/errors.hpp"
#include "gibbsdecomp/gibbs.hpp"
#include "gibbsdecomp/infotheory.hpp"
#include "gibbsdecomp/meanfield.hpp"
#include "gibbsdecomp/models.hpp"
#include "gibbsdecomp/parallel.hpp"

namespace gibbsdecomp {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v)) {
    throw ConfigError(what + ": expected a number, got '" + s + "'");
  }
  return v;
}

Json budgets(const RunConfig& c) {
  return {{"pairs", c.budget_pairs}, {"states", c.budget_states}, {"transport", c.budget_transport}};
}

Json head(const ModelSpec& model, const RunConfig& c) {
  Json doc;
  doc["command"] = c.command;
  doc["model"] = model.description;
  doc["budgets"] = budgets(c);
  doc["n"] = model.potential.space().dims();
  doc["states"] = model.potential.space().state_count();
  return doc;
}

Json side(double lhs, double rhs, bool holds) {
  return {{"lhs", number(lhs)}, {"rhs", number(rhs)}, {"holds", holds}};
}

Json cover_json(const GradientCover& cover) {
  return {{"delta", number(cover.delta)},
          {"part_count", cover.part_count()},
          {"epsilon", number(covering_exponent(cover))},
          {"max_center_distance", number(cover.radius_check)}};
}

Json decomposition_json(const DecompositionReport& r, bool with_parts) {
  Json doc;
  doc["part_count"] = r.part_count;
  doc["null_parts"] = r.null_parts;
  doc["epsilon"] = number(r.epsilon);
  doc["delta_eff"] = number(r.delta_eff);
  doc["diameter"] = number(r.diameter);
  doc["log_z"] = number(r.log_z);
  doc["dtc"] = number(r.dtc);
  doc["dtc_gibbs"] = number(r.dtc_gibbs);
  doc["partition_entropy"] = number(r.partition_entropy);
  doc["bounds"] = {{"a", side(r.a_lhs, r.a_rhs, r.a_holds)},
                   {"b", side(r.b_lhs, r.b_rhs, r.b_holds)},
                   {"c", side(r.c_lhs, r.c_rhs, r.c_holds)}};
  doc["selected"] = {{"kl", side(r.cor_kl_lhs, r.cor_kl_rhs, r.cor_kl_holds)},
                     {"transport", side(r.cor_transport_lhs, r.cor_transport_rhs,
                                        r.cor_transport_holds)}};
  doc["identity"] = {{"lhs", number(r.identity_lhs)},
                     {"rhs", number(r.identity_rhs)},
                     {"residual", number(r.identity_residual)},
                     {"holds", r.identity_holds}};
  doc["integrals_residual"] = number(r.integrals_residual);
  doc["flags"] = {{"diameter_exact", r.diameter_exact},
                  {"transport_computed", r.transport_computed},
                  {"transport_exact", r.transport_exact}};
  if (with_parts) {
    Json parts = Json::array();
    for (const PartRecord& p : r.parts) {
      Json g = Json::array();
      for (double v : p.selected_gradient) g.push_back(number(v));
      parts.push_back({{"id", p.id},
                       {"size", p.size},
                       {"mass", number(p.mass)},
                       {"diameter", number(p.diameter)},
                       {"kl_term", number(p.kl_term)},
                       {"transport_term", number(p.transport_term)},
                       {"transport_exact", p.transport_exact},
                       {"double_integral", number(p.double_integral)},
                       {"selected", p.selected},
                       {"selected_gradient", g},
                       {"selected_kl", number(p.selected_kl)},
                       {"selected_transport", number(p.selected_transport)}});
    }
    doc["parts"] = parts;
  }
  return doc;
}

Json bound_json(const PartitionBoundRecord& r) {
  Json vals = Json::array(), fac = Json::array();
  for (double v : r.restart_values) vals.push_back(number(v));
  for (double v : r.best_factors) fac.push_back(number(v));
  return {{"log_z_exact", number(r.log_z_exact)},
          {"mean_field_estimate", number(r.mean_field_estimate)},
          {"estimate_is_lower_bound_on_sup", true},
          {"estimate_origin", r.estimate_origin},
          {"best_factors", fac},
          {"converged", r.converged},
          {"restart_values", vals},
          {"restart_spread", number(r.restart_spread)},
          {"restarts_disagree", r.restarts_disagree},
          {"gradient_candidate_value", number(r.gradient_candidate_value)},
          {"gradient_candidates", r.gradient_candidates},
          {"epsilon", number(r.epsilon)},
          {"delta_eff", number(r.delta_eff)},
          {"part_count", r.part_count},
          {"lipschitz_f", number(r.lipschitz_f)},
          {"lipschitz_exact", r.lipschitz_exact},
          {"bound_rhs", number(r.bound_rhs)},
          {"slack", number(r.slack)},
          {"holds", r.holds}};
}

Json fixed_point_json(const FixedPointRecord& r) {
  Json res = Json::array();
  for (double v : r.residuals) res.push_back(number(v));
  return {{"residuals", res},
          {"weighted_sum", number(r.weighted_sum)},
          {"lipschitz_grad", number(r.lipschitz)},
          {"lipschitz_exact", r.lipschitz_exact},
          {"bound", number(r.bound)},
          {"holds", r.holds}};
}

DecomposeOptions decompose_options(const RunConfig& c) {
  DecomposeOptions o;
  o.transport_budget = c.budget_transport;
  o.pair_budget = c.budget_pairs;
  return o;
}

MeanFieldOptions mean_field_options(const RunConfig& c) {
  MeanFieldOptions o;
  o.restarts = c.restarts;
  o.seed = c.seed;
  o.pair_budget = c.budget_pairs;
  return o;
}

class CheckList {
 public:
  void equal(const std::string& name, const Json& delta, double lhs, double rhs, double tol) {
    const double res = std::abs(lhs - rhs);
    add(name, delta, lhs, rhs, "=", res, tol, res < tol);
  }
  void at_most(const std::string& name, const Json& delta, double lhs, double rhs, double slack) {
    add(name, delta, lhs, rhs, "<=", lhs - rhs, slack, lhs <= rhs + slack);
  }
  Json checks() const { return checks_; }
  Json failures() const { return failures_; }
  bool passed() const { return failures_.empty(); }

 private:
  void add(const std::string& name, const Json& delta, double lhs, double rhs,
           const char* relation, double value, double tol, bool ok) {
    checks_.push_back({{"name", name},
                       {"delta", delta},
                       {"lhs", number(lhs)},
                       {"rhs", number(rhs)},
                       {"relation", relation},
                       {"value", number(value)},
                       {"tolerance", number(tol)},
                       {"holds", ok}});
    if (!ok) failures_.push_back(name + (delta.is_null() ? "" : "@" + delta.dump()));
  }
  Json checks_ = Json::array();
  Json failures_ = Json::array();
};

void flatten(const Json& v, const std::string& path, std::string& out) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(x, path.empty() ? k : path + "." + k, out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "." + std::to_string(i), out);
  } else {
    out += path;
    out += ',';
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (s.find_first_of(",\"\n") != std::string::npos) {
        out += '"';
        for (char ch : s) {
          if (ch == '"') out += '"';
          out += ch;
        }
        out += '"';
      } else {
        out += s;
      }
    } else if (v.is_number_float()) {
      out += csv_field(v.get<double>());
    } else {
      out += v.dump();
    }
    out += '\n';
  }
}

}  // namespace

double resolve_delta(const std::string& entry, const Potential& f, std::size_t pair_budget) {
  if (entry == "full") {
    const double diam = gradient_diameter(GradientMap(f), pair_budget).diameter;
    const double n = static_cast<double>(f.space().dims());
    // A constant gradient has diameter 0; any positive delta then gives one part.
    return diam > 0.0 ? 2.0 * diam / n : 1.0;
  }
  const double d = parse_real(entry, "--delta");
  if (!(d > 0.0)) throw ConfigError("--delta: must be positive, got '" + entry + "'");
  return d;
}

Json decompose_report(const ModelSpec& model, const RunConfig& c) {
  const Potential& f = model.potential;
  const GradientMap grad(f);
  Json doc = head(model, c);
  Json runs = Json::array();
  for (const std::string& entry : c.deltas) {
    const double delta = resolve_delta(entry, f, c.budget_pairs);
    const GradientCover cover = greedy_cover(grad, delta);
    const DecompositionReport r = decompose(f, cover.partition(), decompose_options(c));
    Json run = decomposition_json(r, true);
    run["delta_entry"] = entry;
    run["cover"] = cover_json(cover);
    runs.push_back(std::move(run));
  }
  doc["runs"] = runs;
  return doc;
}

Json bound_report(const ModelSpec& model, const RunConfig& c) {
  const Potential& f = model.potential;
  const GradientMap grad(f);
  Json doc = head(model, c);
  Json runs = Json::array();
  for (const std::string& entry : c.deltas) {
    const double delta = resolve_delta(entry, f, c.budget_pairs);
    const GradientCover cover = greedy_cover(grad, delta);
    const PartitionBoundRecord r = partition_function_bound(f, cover, mean_field_options(c));
    Json run = bound_json(r);
    run["delta_entry"] = entry;
    run["cover"] = cover_json(cover);
    if (f.space().has_uniform_reference()) {
      const FiniteUniformRecord u = finite_uniform_form(f, r);
      run["finite_uniform"] = {{"log_sum", number(u.log_sum)},
                               {"entropy_estimate", number(u.entropy_estimate)},
                               {"bound_rhs", number(u.bound_rhs)},
                               {"slack", number(u.slack)},
                               {"residual", number(u.residual)},
                               {"log_alphabet_total", number(u.log_alphabet_total)}};
    }
    runs.push_back(std::move(run));
  }
  doc["runs"] = runs;
  return doc;
}

Json fixpoint_report(const ModelSpec& model, const RunConfig& c) {
  const Potential& f = model.potential;
  const ProductSpace& s = f.space();
  const GradientMap grad(f);
  Json doc = head(model, c);
  Json runs = Json::array();
  for (const std::string& entry : c.deltas) {
    const double delta = resolve_delta(entry, f, c.budget_pairs);
    const GradientCover cover = greedy_cover(grad, delta);
    const DecompositionReport r = decompose(f, cover.partition(), decompose_options(c));
    Json run = fixed_point_json(fixed_point_residuals(f, r, c.budget_pairs));
    run["delta_entry"] = entry;
    run["cover"] = cover_json(cover);
    runs.push_back(std::move(run));
  }
  doc["runs"] = runs;

  if (s.is_binary() && s.has_uniform_reference()) {
    std::vector<double> m0 = c.m0;
    if (m0.empty()) m0.assign(s.dims(), 0.5);
    if (m0.size() == 1) m0.assign(s.dims(), m0[0]);
    Json t;
    t["m0"] = Json::array();
    for (double v : m0) t["m0"].push_back(number(v));
    auto traj_json = [](const std::vector<std::vector<double>>& traj) {
      Json out = Json::array();
      for (const auto& m : traj) {
        Json row = Json::array();
        for (double v : m) row.push_back(number(v));
        out.push_back(row);
      }
      return out;
    };
    try {
      const TanhResult tr = tanh_fixed_point(f, m0);
      t["converged"] = true;
      t["iterations"] = tr.iterations;
      t["residual"] = number(tr.residual);
      t["m"] = Json::array();
      for (double v : tr.m) t["m"].push_back(number(v));
      t["trajectory"] = traj_json(tr.trajectory);
    } catch (const NonConvergence& e) {
      t["converged"] = false;
      t["residual"] = number(e.achieved());
      t["message"] = e.what();
      t["trajectory"] = traj_json(e.trajectory());
    }
    doc["tanh"] = t;
  } else {
    doc["tanh"] = nullptr;
    doc["tanh_skipped"] = "requires binary alphabets with uniform reference measures";
  }
  return doc;
}

Json verify_report(const ModelSpec& model, const RunConfig& c) {
  const Potential& f = model.potential;
  const ProductSpace& s = f.space();
  const GibbsMeasure mu = gibbs(f);
  const GradientMap grad(f);
  const Distribution lambda = Distribution::reference(f.space_ptr());
  CheckList checks;
  const Json none;

  // Gibbs variational identity, and its error term at a seeded nu.
  {
    std::vector<double> fmu;
    for (std::size_t x = 0; x < mu.dist.size(); ++x) fmu.push_back(mu.dist[x] * f(x));
    checks.equal("gibbs_identity", none, kl(mu.dist, lambda) - stable_sum(fmu), -mu.log_z, 1e-8);
    std::mt19937_64 rng(c.seed);
    std::vector<double> w(s.state_count());
    for (double& v : w) v = 0.05 + uniform01(rng);
    const Distribution nu = Distribution::normalized(f.space_ptr(), std::move(w));
    checks.equal("variational_gap", none, variational_gap(nu, f), kl(nu, mu.dist), 1e-8);
  }
  {
    const double dtc = dtc_definitional(mu.dist);
    const double dg = dtc_gibbs(mu, grad);
    checks.equal("dtc_cross_check", none, dg, dtc, 1e-8);
    checks.at_most("dtc_nonnegative", none, 0.0, dtc, 1e-10);
    checks.equal("tower_property", none, integrals_equal_residual(mu, grad), 0.0, 1e-8);
  }

  Json runs = Json::array();
  for (const std::string& entry : c.deltas) {
    const double delta = resolve_delta(entry, f, c.budget_pairs);
    const Json d = number(delta);
    const GradientCover cover = greedy_cover(grad, delta);
    const PartitionOfSpace P = cover.partition();
    checks.equal("modified_chain_rule", d, modified_chain_rule_residual(mu.dist, lambda, P), 0.0,
                 1e-8);
    const DecomposeOptions opts = decompose_options(c);
    const DecompositionReport r = decompose(f, P, opts);
    checks.equal("pivot_identity", d, r.identity_lhs, r.identity_rhs, 1e-8);
    checks.at_most("bound.a", d, r.a_lhs, r.a_rhs, opts.slack);
    checks.at_most("bound.b", d, r.b_lhs, r.b_rhs, opts.slack);
    checks.at_most("bound.c", d, r.c_lhs, r.c_rhs, opts.slack);
    checks.at_most("selected.kl", d, r.cor_kl_lhs, r.cor_kl_rhs, opts.slack);
    checks.at_most("selected.transport", d, r.cor_transport_lhs, r.cor_transport_rhs, opts.slack);
    const FixedPointRecord fp = fixed_point_residuals(f, r, c.budget_pairs);
    checks.at_most("fixed_point", d, fp.weighted_sum, fp.bound, 1e-8);
    const PartitionBoundRecord b = partition_function_bound(f, cover, mean_field_options(c));
    checks.at_most("partition_bound", d, b.log_z_exact, b.bound_rhs, 1e-8);
    if (s.has_uniform_reference()) {
      const FiniteUniformRecord u = finite_uniform_form(f, b);
      checks.equal("finite_uniform_form", d, u.residual, 0.0, 1e-10);
    }
    runs.push_back({{"delta", d},
                    {"delta_entry", entry},
                    {"delta_eff", number(r.delta_eff)},
                    {"epsilon", number(r.epsilon)},
                    {"part_count", r.part_count},
                    {"flags",
                     {{"diameter_exact", r.diameter_exact},
                      {"transport_exact", r.transport_exact},
                      {"lipschitz_grad_exact", fp.lipschitz_exact},
                      {"lipschitz_f_exact", b.lipschitz_exact},
                      {"mean_field_converged", b.converged},
                      {"restarts_disagree", b.restarts_disagree}}}});
  }

  Json doc = head(model, c);
  doc["log_z"] = number(mu.log_z);
  doc["runs"] = runs;
  doc["checks"] = checks.checks();
  doc["failures"] = checks.failures();
  doc["passed"] = checks.passed();
  return doc;
}

Json model_info_report(const ModelSpec& model, const RunConfig& c) {
  const Potential& f = model.potential;
  const GibbsMeasure mu = gibbs(f);
  const GradientMap grad(f);
  const HypothesisCheck diam = gradient_diameter(grad, c.budget_pairs);
  const LipschitzEstimate lg = gradient_lipschitz(grad, c.budget_pairs);
  const LipschitzEstimate lf = potential_lipschitz(f, c.budget_pairs);
  Json doc = head(model, c);
  doc["space"] = space_to_json(f.space());
  doc["log_z"] = number(mu.log_z);
  doc["dtc"] = number(dtc_definitional(mu.dist));
  doc["gradient_diameter"] = number(diam.diameter);
  doc["gradient_diameter_exact"] = diam.exact;
  doc["lipschitz_grad"] = {{"value", number(lg.value)}, {"regime", lg.regime}, {"exact", lg.exact}};
  doc["lipschitz_f"] = {{"value", number(lf.value)}, {"regime", lf.regime}, {"exact", lf.exact}};
  doc["threads"] = worker_count();
  return doc;
}

std::string render_csv(const Json& doc) {
  std::string out = "key,value\n";
  flatten(doc, "", out);
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gibbs measure decompositions by gradient complexity"};
  app.require_subcommand(1);
  RunConfig c;
  std::string delta_list = "0.2";
  std::string m0_list;

  const std::pair<const char*, const char*> commands[] = {
      {"decompose", "Cover the gradient set and report the decomposition terms"},
      {"bound", "Mean-field upper bound on the log partition function"},
      {"fixpoint", "Approximate fixed-point residuals and the tanh iteration"},
      {"verify", "Run every identity and inequality check on the model"},
      {"model-info", "Describe the model and its constants"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--model", c.model, "Inline model, e.g. curie-weiss:n=6,beta=1,h=0");
    sub->add_option("--model-file", c.model_file, "JSON model file");
    sub->add_option("--delta", delta_list, "Comma-separated deltas; 'full' means 2 diam / n");
    sub->add_option("--restarts", c.restarts, "Random restarts of the mean-field ascent");
    sub->add_option("--seed", c.seed, "Seed for restarts and random test measures");
    sub->add_option("--budget-states", c.budget_states, "Largest state count to enumerate")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget-transport", c.budget_transport,
                    "Largest support solved by exact transport")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget-pairs", c.budget_pairs, "Largest number of pairs for exact sups")
        ->check(CLI::PositiveNumber);
    sub->add_option("--m0", m0_list, "Start of the tanh iteration (one value or one per spin)");
    sub->add_option("--out", c.out, "Write the report here instead of stdout");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    c.deltas = split_list(delta_list);
    if (c.deltas.empty()) throw ConfigError("--delta: empty list");
    for (const std::string& v : split_list(m0_list)) c.m0.push_back(parse_real(v, "--m0"));
    if (c.model.empty() == c.model_file.empty()) {
      throw ConfigError("exactly one of --model and --model-file is required");
    }
    const ModelSpec model = c.model.empty() ? load_model_file(c.model_file, c.budget_states)
                                            : parse_model(c.model, c.budget_states);
    Json doc;
    if (c.command == "decompose") doc = decompose_report(model, c);
    else if (c.command == "bound") doc = bound_report(model, c);
    else if (c.command == "fixpoint") doc = fixpoint_report(model, c);
    else if (c.command == "verify") doc = verify_report(model, c);
    else doc = model_info_report(model, c);

    const std::string text = c.format == "csv" ? render_csv(doc) : render_json(doc);
    if (c.out.empty()) {
      out << text;
    } else {
      std::ofstream file(c.out, std::ios::binary);
      if (!file) throw ConfigError("--out: cannot write '" + c.out + "'");
      file << text;
    }
    if (c.command == "verify" && !doc["passed"].get<bool>()) {
      for (const auto& ch : doc["checks"]) {
        if (ch["holds"].get<bool>()) continue;
        err << "check failed: " << ch["name"].get<std::string>();
        if (!ch["delta"].is_null()) err << " at delta " << ch["delta"].dump();
        if (ch.contains("lhs")) err << ": lhs " << ch["lhs"].dump() << " rhs " << ch["rhs"].dump();
        err << "\n";
      }
      return kExitCheckFailed;
    }
    if (c.command == "fixpoint" && doc["tanh"].is_object() &&
        !doc["tanh"]["converged"].get<bool>()) {
      err << "tanh iteration did not converge\n";
      return kExitCheckFailed;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace gibbsdecomp
