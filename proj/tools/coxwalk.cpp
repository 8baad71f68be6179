#include "coxwalk/class_rules.hpp"
#include "coxwalk/config.hpp"
#include "coxwalk/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace coxwalk;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCap = 3;
constexpr int kExitEstimation = 4;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  bool allow_non_fuchsian = false;
  bool dot = false;
  std::vector<std::string> triangle;
  std::vector<std::string> polygon;
  std::vector<std::string> sources;
  std::optional<int> steps;
  std::vector<int> abc;
  bool all = false;
};

struct SearchFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string rat(const Rat& r) { return r.get_num().get_str() + "/" + r.get_den().get_str(); }

ExperimentConfig config_of(const Options& o) {
  if (o.config.empty()) throw ValidationError("--config is required for this command");
  auto c = load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.mode) c.mode = parse_mode(*o.mode);
  return c;
}

CoxeterSystem system_of(const Options& o) {
  std::vector<int> labels;
  auto parse = [&](const std::vector<std::string>& v) {
    for (const auto& t : v) {
      if (t == "inf") {
        labels.push_back(kInf);
        continue;
      }
      std::size_t used = 0;
      int x = 0;
      try {
        x = std::stoi(t, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != t.size() || x < 2) throw ValidationError("bad Coxeter label '" + t + "'");
      labels.push_back(x);
    }
  };
  if (!o.triangle.empty()) {
    parse(o.triangle);
    return CoxeterSystem::triangle(labels[0], labels[1], labels[2]);
  }
  if (!o.polygon.empty()) {
    parse(o.polygon);
    return CoxeterSystem::polygon(labels);
  }
  return *config_of(o).system;
}

void write_file(const Options& o, const std::string& name, const std::string& content) {
  if (o.out.empty()) return;
  std::filesystem::create_directories(o.out);
  std::ofstream f(std::filesystem::path(o.out) / name);
  if (!f) throw std::runtime_error("cannot write " + name);
  f << content;
}

void require_fuchsian(const CoxeterSystem& W, const Options& o) {
  const auto c = W.classify();
  if (c.fuchsian() || o.allow_non_fuchsian) return;
  throw ValidationError("refusing to run: " + c.describe() +
                        " is not Fuchsian, and the renewal estimators rest on the Fuchsian building hypothesis"
                        " (pass --allow-non-fuchsian for an exploratory run)");
}

json echo(const ExperimentConfig& c) {
  json j = c.raw;
  j["seed"] = c.seed;
  return j;
}

// automaton -----------------------------------------------------------------

int cmd_automaton(const Options& o) {
  const auto W = system_of(o);
  const auto a = build_cannon(W);
  const auto conn = is_strongly_connected(a);
  const auto cls = W.classify();
  json j;
  j["system"] = cls.describe();
  j["states"] = a.size();
  j["recurrent"] = a.recurrent_count();
  std::vector<std::string> transient;
  for (std::size_t s = 0; s < a.size(); ++s)
    if (!a.recurrent[s]) transient.push_back(W.format_word(a.representative[s]));
  j["transient"] = transient;
  j["strongly_connected"] = conn.strongly_connected;
  std::string line = cls.describe() + ": " + std::to_string(a.size()) + " states, " +
                     std::to_string(a.recurrent_count()) + " recurrent, strongly connected: " +
                     (conn.strongly_connected ? "yes" : "no");
  if (conn.witness) {
    const auto from = W.format_word(a.representative[conn.witness->first]);
    const auto to = W.format_word(a.representative[conn.witness->second]);
    j["witness"] = {{"from", from}, {"to", to}};
    line += ", witness " + from + " -/-> " + to;
  }
  try {
    const auto r = class_rule_automaton(W);
    const bool iso = isomorphism(a, r.automaton).has_value();
    j["class_rules"] = {{"vertices", r.automaton.size()},
                     {"isomorphic", iso},
                     {"minimized_vertices", r.minimized_size},
                     {"notes", r.notes}};
    if (r.claimed_vertices) j["class_rules"]["claimed_vertices"] = *r.claimed_vertices;
    line += std::string(", class rules match: ") + (iso ? "yes" : "no");
    if (!iso) line += " (" + std::to_string(r.automaton.size()) + " rule vertices, " + std::to_string(r.minimized_size) + " after merging)";
  } catch (const UnsupportedClass& e) {
    j["class_rules"] = {{"unsupported", e.what()}};
    line += ", class rules: unsupported";
  } catch (const CapExceeded& e) {
    j["class_rules"] = {{"unsupported", e.what()}};
    line += ", class rules: do not close";
  }
  write_file(o, "automaton.dot", to_dot(W, a, "cone_types"));
  auto full = json::parse(to_json(W, a));
  full["summary"] = j;
  write_file(o, "automaton.json", full.dump(2) + "\n");
  if (o.dot)
    std::cout << to_dot(W, a, "cone_types");
  else
    std::cout << line << "\n";
  return 0;
}

// feasibility ---------------------------------------------------------------

int cmd_feasibility(const Options& o) {
  json j = json::array();
  auto show = [&](int a, int b, int c, const Feasibility& f) {
    std::cout << "(" << a << "," << b << "," << c << "): " << (f.feasible ? "feasible" : "infeasible");
    if (!f.reason.empty()) std::cout << " (" << f.reason << ")";
    std::cout << "\n";
    j.push_back({{"triple", {a, b, c}}, {"feasible", f.feasible}, {"reason", f.reason}});
  };
  if (o.all) {
    int count = 0;
    for (const auto& v : enumerate_triangles()) {
      show(v.triple[0], v.triple[1], v.triple[2], v.verdict);
      count += v.verdict.feasible;
    }
    std::cout << count << " feasible\n";
  } else {
    if (o.abc.size() != 3) throw ValidationError("feasibility needs a b c or --all");
    show(o.abc[0], o.abc[1], o.abc[2], triangle_feasibility(o.abc[0], o.abc[1], o.abc[2]));
  }
  write_file(o, "feasibility.json", j.dump(2) + "\n");
  return 0;
}

// kernel / return ----------------------------------------------------------

int cmd_kernel(const Options& o) {
  const auto c = config_of(o);
  const auto b = c.building();
  const auto walk = c.walk();
  const auto& W = b.system;
  std::vector<Word> sources = c.sources;
  for (const auto& s : o.sources) sources.push_back(W.parse_word(s));
  if (sources.empty()) sources.push_back({});
  std::ostringstream csv;
  csv << "source,target,probability\n";
  std::vector<std::string> sums;
  for (const auto& src : sources) {
    const auto row = kernel_row(b, walk, W.word_to_element(src));
    std::vector<std::pair<Word, Rat>> entries;
    Rat sum = 0;
    for (const auto& [k, t] : row.entries) {
      entries.emplace_back(W.shortlex_nf(t.element), t.coeff);
      sum += t.coeff;
    }
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
      return x.first.size() != y.first.size() ? x.first.size() < y.first.size() : x.first < y.first;
    });
    const auto name = src.empty() ? std::string("e") : W.format_word(W.shortlex_nf(W.word_to_element(src)));
    for (const auto& [w, p] : entries) csv << name << "," << (w.empty() ? "e" : W.format_word(w)) << "," << rat(p) << "\n";
    sums.push_back("# source " + name + ": " + std::to_string(entries.size()) + " entries, row sum " + rat(sum));
  }
  write_file(o, "kernel.csv", csv.str());
  if (o.out.empty()) std::cout << csv.str();
  for (const auto& s : sums) std::cout << s << "\n";
  return 0;
}

int cmd_return(const Options& o) {
  const auto c = config_of(o);
  const auto b = c.building();
  const auto walk = c.walk();
  const int n = o.steps ? *o.steps : c.return_steps;
  const auto r = n_step_return(b, walk, n);
  json j;
  j["config"] = echo(c);
  std::vector<std::string> ps;
  for (const auto& p : r.p) ps.push_back(rat(p));
  j["p"] = ps;
  j["rho_hat"] = json::array();
  std::cout << "k,p,rho_hat\n";
  for (int k = 0; k <= n; ++k) {
    std::cout << k << "," << rat(r.p[k]) << ",";
    if (k % 2 == 0 && k > 0) {
      std::cout << r.rho_hat[k / 2];
      j["rho_hat"].push_back({{"k", k}, {"value", r.rho_hat[k / 2]}});
    }
    std::cout << "\n";
  }
  const auto sc = spectral_condition(b);
  j["spectral_condition"] = sc.satisfied;
  j["max_states"] = r.max_states;
  std::cout << "# spectral condition " << (sc.satisfied ? "holds" : "fails") << ", peak support " << r.max_states
            << " elements\n";
  write_file(o, "return.json", j.dump(2) + "\n");
  return 0;
}

// simulation pipeline --------------------------------------------------------

struct Run {
  ExperimentConfig config;
  std::unique_ptr<Simulator> sim;
  std::vector<Trajectory> trajectories;
};

Run simulate_batch(const Options& o) {
  Run r{config_of(o), nullptr, {}};
  const auto b = r.config.building();
  require_fuchsian(b.system, o);
  const auto walk = r.config.walk();
  const auto gen = support_generates(b.system, walk, 12);
  if (gen.verdict == Generation::No) throw ValidationError("walk support does not generate W: " + gen.reason);
  if (gen.verdict == Generation::Inconclusive)
    std::cerr << "warning: could not confirm that the support generates W (" << gen.reason << ")\n";
  for (const auto& w : validate_building(b)) std::cerr << "warning: " << w << "\n";
  if (r.config.horizon == 0 || r.config.trajectories == 0) throw ValidationError("horizon and trajectories must be positive");
  r.sim = std::make_unique<Simulator>(b, walk);
  r.trajectories = r.sim->batch_simulate(r.config.trajectories, r.config.horizon, r.config.seed, r.config.threads);
  return r;
}

json seeds_of(const Run& r) {
  return {{"master_seed", r.config.seed}, {"streams", {0, r.config.trajectories - 1}}, {"generator", "philox4x32-10"}};
}

int cmd_simulate(const Options& o) {
  auto r = simulate_batch(o);
  const auto& W = r.sim->system();
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    std::ofstream f(std::filesystem::path(o.out) / "trajectories.csv");
    f << "trajectory,step,length,cone_type" << (r.config.words ? ",word" : "") << "\n";
    for (std::size_t i = 0; i < r.trajectories.size(); ++i) {
      const auto& t = r.trajectories[i];
      Replay rp(t);
      for (std::size_t k = 0; k <= t.steps(); ++k) {
        if (k > 0) rp.advance();
        f << i << "," << k << "," << t.lengths[k] << "," << t.cone_types[k];
        if (r.config.words) f << "," << W.format_word(rp.word());
        f << "\n";
      }
    }
  }
  const auto d = direct_speed(r.trajectories);
  json j{{"config", echo(r.config)}, {"seeds", seeds_of(r)}, {"direct_speed", {{"value", d.value}, {"se", d.se}}}};
  write_file(o, "simulate.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct Renewals {
  RenewalConfig cfg;
  std::vector<RenewalSeries> series;
  Estimates est;
  Estimate direct;
};

Renewals renewals_of(const Run& r) {
  const auto& W = r.sim->system();
  const auto& a = r.sim->automaton();
  Renewals out;
  auto& cfg = out.cfg;
  if (r.config.cone_type) {
    cfg.cone_type = *r.config.cone_type;
  } else {
    std::vector<std::size_t> visits(a.size(), 0);
    for (const auto& t : r.trajectories)
      for (int s : t.cone_types) ++visits[s];
    std::size_t best = 0;
    for (std::size_t s = 0; s < a.size(); ++s)
      if (a.recurrent[s] && (!a.recurrent[best] || visits[s] > visits[best])) best = s;
    cfg.cone_type = static_cast<int>(best);
  }
  cfg.L1 = r.config.L1 ? *r.config.L1 : default_L1(W, r.sim->walk());
  cfg.mode = r.config.mode;
  cfg.tail_buffer = r.config.effective_tail_buffer();
  if (cfg.mode == RenewalMode::PaperPrefix && cfg.cone_type >= 0 && cfg.cone_type < static_cast<int>(a.size()) &&
      a.recurrent[cfg.cone_type]) {
    try {
      cfg.prefix_path = find_deep_subcone(W, a, cfg.cone_type, cfg.L1, r.config.search_depth).path;
    } catch (const std::runtime_error& e) {
      throw SearchFailed(e.what());
    }
  }
  validate(cfg, a, r.sim->walk(), r.config.horizon);
  out.series = extract_renewals(W, a, r.trajectories, cfg, r.config.threads);
  out.direct = direct_speed(r.trajectories);
  out.est = estimate(out.series);
  return out;
}

json renewal_json(const Run& r, const Renewals& n) {
  const auto& W = r.sim->system();
  const auto& a = r.sim->automaton();
  const double combined = std::sqrt(n.est.v.se * n.est.v.se + n.direct.se * n.direct.se);
  json j;
  j["config"] = echo(r.config);
  j["seeds"] = seeds_of(r);
  j["renewal"] = {{"cone_type", n.cfg.cone_type},
                  {"cone_type_word", W.format_word(a.representative[n.cfg.cone_type])},
                  {"L1", n.cfg.L1},
                  {"mode", to_string(n.cfg.mode)},
                  {"tail_buffer", n.cfg.tail_buffer},
                  {"prefix_path", W.format_word(n.cfg.prefix_path)}};
  j["estimates"] = to_json(n.est);
  j["direct_speed"] = {{"value", n.direct.value}, {"se", n.direct.se}};
  j["speed_agreement"] = {{"difference", n.est.v.value - n.direct.value},
                          {"combined_se", combined},
                          {"within_3_se", std::abs(n.est.v.value - n.direct.value) < 3 * combined}};
  j["v_positive_3se"] = n.est.v.value - 3 * n.est.v.se > 0;
  return j;
}

int cmd_estimate(const Options& o) {
  auto r = simulate_batch(o);
  auto n = renewals_of(r);
  auto j = renewal_json(r, n);
  write_file(o, "estimate.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_clt(const Options& o) {
  auto r = simulate_batch(o);
  auto n = renewals_of(r);
  auto j = renewal_json(r, n);
  const auto c = clt_check(r.trajectories, n.est.v.value, n.est.sigma2.value);
  j["clt"] = to_json(c);
  j["clt"]["passes_0.01"] = c.ks.p > 0.01;
  j["clt"]["tail_fit"] = to_json(n.est.tail);
  write_file(o, "clt.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cone types, Hecke kernels and random-walk statistics on Coxeter buildings"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub, bool config) {
    if (config) sub->add_option("--config", o.config, "experiment config file");
    sub->add_option("--out", o.out, "output directory");
  };
  auto renewal_opts = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "master seed (overrides the config)");
    sub->add_option("--mode", o.mode, "renewal mode")->check(CLI::IsMember({"paper_prefix", "enter_and_stay"}));
    sub->add_flag("--allow-non-fuchsian", o.allow_non_fuchsian, "run on non-Fuchsian systems");
  };

  auto* automaton = app.add_subcommand("automaton", "cone-type automaton, connectivity and class-rule comparison");
  common(automaton, true);
  automaton->add_option("--triangle", o.triangle, "labels m_12 m_23 m_13")->expected(3);
  automaton->add_option("--polygon", o.polygon, "labels k_1 .. k_n")->expected(3, 64);
  automaton->add_flag("--dot", o.dot, "print DOT instead of the summary");

  auto* feas = app.add_subcommand("feasibility", "triangle building feasibility");
  common(feas, false);
  feas->add_option("abc", o.abc, "sorted labels a >= b >= c")->expected(0, 3);
  feas->add_flag("--all", o.all, "enumerate every admissible triple");

  auto* kernel = app.add_subcommand("kernel", "exact kernel rows as CSV");
  common(kernel, true);
  kernel->add_option("--source", o.sources, "source word (repeatable)");

  auto* ret = app.add_subcommand("return", "exact return probabilities");
  common(ret, true);
  ret->add_option("--steps", o.steps, "number of steps");

  auto* simulate = app.add_subcommand("simulate", "simulate a batch of trajectories");
  common(simulate, true);
  renewal_opts(simulate);
  auto* est = app.add_subcommand("estimate", "renewal estimates of speed and variance");
  common(est, true);
  renewal_opts(est);
  auto* clt = app.add_subcommand("clt", "normal-approximation check of the endpoints");
  common(clt, true);
  renewal_opts(clt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (automaton->parsed()) return cmd_automaton(o);
    if (feas->parsed()) return cmd_feasibility(o);
    if (kernel->parsed()) return cmd_kernel(o);
    if (ret->parsed()) return cmd_return(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (est->parsed()) return cmd_estimate(o);
    if (clt->parsed()) return cmd_clt(o);
  } catch (const CapExceeded& e) {
    std::cerr << "error: computation cap reached: " << e.what() << "\n";
    return kExitCap;
  } catch (const SearchFailed& e) {
    std::cerr << "error: computation cap reached: " << e.what() << "\n";
    return kExitCap;
  } catch (const EstimationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEstimation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
