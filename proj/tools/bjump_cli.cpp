#include "bjump/cli_support.hpp"
#include "bjump/constructions.hpp"
#include "bjump/ershov.hpp"
#include "bjump/jump.hpp"
#include "bjump/suites.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace bjump;
using nlohmann::json;

namespace {

// exit codes: 0 ok, 1 a check failed, 2 bad usage
struct CheckFailed {
  json record;
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<Ordinal> parse_ordinals(const std::vector<std::string>& xs) {
  std::vector<Ordinal> out;
  for (const auto& x : xs) out.push_back(Ordinal::parse(x));
  return out;
}

json estimate_json(const std::optional<Estimate>& e) {
  if (!e) return nullptr;
  return {{"ordinal", e->ord.to_text()}, {"value", e->value}};
}

void save_trace(const ConstructionTrace& t, const std::string& path) {
  if (!path.empty()) t.save(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bounded-jump workbench"};
  app.require_subcommand(1);

  // ---- jump ----
  auto* jump = app.add_subcommand("jump", "bounded jump and its variants");
  jump->require_subcommand(1);
  auto* jenum = jump->add_subcommand("enum", "members of a jump among 0..N-1 at a stage");
  std::string variant = "b", base = "empty";
  std::uint64_t stage = 10'000, points = 20, window = 16;
  bool serial = false;
  jenum->add_option("--variant", variant, "b, b0, b1, i, tt or bk")->capture_default_str();
  jenum->add_option("--base", base, "set spec")->capture_default_str();
  jenum->add_option("--stage", stage, "step budget")->capture_default_str()->check(CLI::PositiveNumber);
  jenum->add_option("--N", points, "domain size")->capture_default_str()->check(CLI::PositiveNumber);
  jenum->add_option("--window", window, "bound indices tried below x")->capture_default_str();
  jenum->add_flag("--serial", serial, "use the serial enumerator");
  jenum->callback([&] {
    JumpConfig cfg;
    cfg.base = resolve_set_spec(base, stage);
    cfg.budget = stage;
    cfg.window = window;
    auto v = parse_variant(variant);
    auto dom = range_domain(points);
    emit((serial ? enum_jump_serial(v, cfg, dom) : enum_jump(v, cfg, dom)).to_json());
  });

  // ---- ordinal ----
  auto* ord = app.add_subcommand("ordinal", "ordinals below w^w");
  ord->require_subcommand(1);
  std::vector<std::string> ord_args;
  auto* osum = ord->add_subcommand("sum", "natural sum");
  osum->add_option("ordinals", ord_args, "e.g. w*2+1")->required();
  osum->callback([&] { std::cout << natural_sum(parse_ordinals(ord_args)).to_text() << "\n"; });
  auto* ocmp = ord->add_subcommand("cmp", "compare two ordinals: prints <, = or >");
  ocmp->add_option("ordinals", ord_args)->required()->expected(2);
  ocmp->callback([&] {
    auto o = parse_ordinals(ord_args);
    auto c = o[0] <=> o[1];
    std::cout << (c < 0 ? "<" : c > 0 ? ">" : "=") << "\n";
  });
  unsigned rank_k = 1;
  std::uint64_t rank_l = 0;
  auto* orank = ord->add_subcommand("rank", "w^k*l (+) S (+) units(S)");
  orank->add_option("--k", rank_k)->required()->check(CLI::PositiveNumber);
  orank->add_option("--l", rank_l)->required();
  orank->add_option("alphas", ord_args, "each below w^k");
  orank->callback([&] { std::cout << jump_rank(rank_k, rank_l, parse_ordinals(ord_args)).to_text() << "\n"; });

  // ---- ershov ----
  auto* ers = app.add_subcommand("ershov", "alpha-c.e. witnesses and their transformations");
  ers->require_subcommand(1);
  std::string witness_path, phi_text = "echo", f_text = "identity";
  std::uint64_t budget = 20'000;
  unsigned level = 1;
  bool check = false;
  auto witness_opts = [&](CLI::App* c) {
    c->add_option("--witness", witness_path, "witness script (JSON)")->required()->check(CLI::ExistingFile);
    c->add_option("--N", points, "points 0..N-1")->capture_default_str()->check(CLI::PositiveNumber);
    c->add_option("--budget", budget, "stages")->capture_default_str()->check(CLI::PositiveNumber);
  };
  auto load_witness = [&] { return script_witness(Script::load(witness_path)); };

  auto* eeval = ers->add_subcommand("eval", "state of the witness at each point");
  witness_opts(eeval);
  eeval->callback([&] {
    auto w = load_witness();
    json out = json::array();
    for (std::uint64_t n = 0; n < points; ++n)
      out.push_back({{"n", n}, {"state", witness_state(w, n, budget).to_json()}});
    emit({{"bound", w.bound.to_text()}, {"points", out}});
  });

  auto* edown = ers->add_subcommand("downward", "witness for A from A <=bT B and a witness for B");
  witness_opts(edown);
  edown->add_option("--phi", phi_text, "functional")->capture_default_str();
  edown->add_option("--f", f_text, "use bound")->capture_default_str();
  edown->callback([&] {
    auto wB = load_witness();
    Nat phi = parse_index(phi_text), f = parse_index(f_text);
    unsigned k = std::max(1u, wB.bound.degree());
    auto chi = downward_transform(phi, f, wB, k);
    json out = json::array();
    for (std::uint64_t n = 0; n < points; ++n) {
      auto tr = downward_trace(phi, f, wB, n, budget);
      json writes = json::array();
      for (const auto& h : tr.writes) writes.push_back({{"stage", h.stage}, {"ordinal", h.ord.to_text()}, {"value", h.value}});
      out.push_back({{"n", n}, {"f", to_string(tr.bound_value)}, {"limit", estimate_json(eval_witness(chi, n, budget))},
                     {"writes", writes}});
    }
    emit({{"bound", chi.bound.to_text()}, {"points", out}});
  });

  auto* ejump = ers->add_subcommand("jump", "witness for the bounded jump from a witness for A");
  witness_opts(ejump);
  ejump->add_option("--k", level, "witness bound w^k")->capture_default_str()->check(CLI::PositiveNumber);
  ejump->callback([&] {
    auto wA = script_witness(Script::load(witness_path), Ordinal::omega_power(level));
    auto chi = jump_transform(wA, level);
    json out = json::array();
    for (std::uint64_t n = 0; n < points; ++n) {
      auto tr = jump_transform_trace(wA, level, n, budget);
      json writes = json::array();
      for (const auto& h : tr.writes) writes.push_back({{"stage", h.stage}, {"ordinal", h.ord.to_text()}, {"value", h.value}});
      out.push_back({{"n", n}, {"decrements", tr.decrements}, {"capped", tr.capped},
                     {"limit", estimate_json(eval_witness(chi, n, budget))}, {"writes", writes}});
    }
    emit({{"bound", chi.bound.to_text()}, {"points", out}});
  });

  std::vector<std::uint64_t> nested_budgets = {3000, 200'000};
  auto reduce_cmd = [&](CLI::App* c, bool inductive) {
    witness_opts(c);
    if (inductive) c->add_option("--k", level, "witness bound w^k, k >= 3")->required();
    c->add_flag("--check", check, "compare with the iterated jump");
    c->add_option("--nested", nested_budgets, "budgets per jump level for --check")->capture_default_str();
    c->callback([&, inductive] {
      auto w = load_witness();
      unsigned k = inductive ? level : 2;
      if (!inductive && w.bound.degree() > 2)
        throw CLI::ValidationError("--witness", "erbase needs a bound of at most w^2");
      std::optional<NestedJump> nj;
      if (check) nj.emplace(k, nested_budgets, 2);
      json out = json::array();
      bool all_ok = true;
      for (std::uint64_t n = 0; n < points; ++n) {
        auto f = reduction_image(w.psi, n, k, budget);
        json row{{"n", n}, {"f", f ? json(to_string(*f)) : json(nullptr)}};
        auto lim = limit_value(w, n, budget);
        row["limit"] = lim ? json(*lim) : json(nullptr);
        if (nj && f) {
          bool in = nj->member(k, *f);
          row["in_jump"] = in;
          all_ok = all_ok && lim && in == (*lim == 1);
        }
        out.push_back(row);
      }
      json rep{{"k", k}, {"points", out}};
      if (check && !all_ok) throw CheckFailed{rep};
      emit(rep);
    });
  };
  reduce_cmd(ers->add_subcommand("erbase", "w^2-c.e. set into the second bounded jump"), false);
  reduce_cmd(ers->add_subcommand("inductive", "w^k-c.e. set into the k-th bounded jump"), true);

  // ---- constructions ----
  auto* cons = app.add_subcommand("construct", "run a construction and write its trace");
  cons->require_subcommand(1);
  std::string trace_path;
  auto trace_opt = [&](CLI::App* c) { c->add_option("--trace", trace_path, "JSON-lines trace output"); };

  std::string gamma_text = "bit:0", g_text = "const:64";
  auto* cstr = cons->add_subcommand("strinc", "refute a claimed reduction of the bounded jump to its base");
  cstr->add_option("--gamma", gamma_text, "claimed functional")->capture_default_str();
  cstr->add_option("--g", g_text, "its use bound")->capture_default_str();
  cstr->add_option("--base", base, "set spec")->capture_default_str();
  cstr->add_option("--budget", budget, "steps")->capture_default_str()->check(CLI::PositiveNumber);
  trace_opt(cstr);
  cstr->callback([&] {
    auto r = diagonalize_strinc(parse_index(gamma_text), parse_index(g_text), resolve_set_spec(base), budget);
    save_trace(strinc_trace(r, base, budget), trace_path);
    if (r.branch == Refutation::BudgetUnresolved) throw CheckFailed{r.to_json()};
    emit(r.to_json());
  });

  auto* cshoen = cons->add_subcommand("shoenfield", "c.e.-style inversion of a w^2-c.e. set");
  cshoen->add_option("--witness", witness_path, "witness script (JSON)")->required()->check(CLI::ExistingFile);
  cshoen->add_option("--N", points, "points")->capture_default_str()->check(CLI::PositiveNumber);
  cshoen->add_option("--budget", budget, "stages")->capture_default_str()->check(CLI::PositiveNumber);
  trace_opt(cshoen);
  cshoen->callback([&] {
    auto script = Script::load(witness_path);
    auto res = shoenfield_inversion(script, points, budget);
    save_trace(res.trace, trace_path);
    auto w = script_witness(script, Ordinal::omega_power(2));
    JumpConfig cfg;
    cfg.base = from_list(std::vector<Nat>(res.a.begin(), res.a.end()), "A");
    cfg.budget = 2 * budget + 1000;
    cfg.window = res.window;
    json pts = json::array();
    bool ok = true;
    for (std::uint64_t n = 0; n < points; ++n) {
      int b = limit_value(w, n, budget).value_or(0);
      bool in = in_jump(Variant::B, res.plan.g[n], cfg);
      bool within = Nat(res.definitions[n]) <= res.plan.h[n];
      ok = ok && (b == 1) == in && within;
      pts.push_back({{"n", n}, {"B", b}, {"g_in_jump", in}, {"definitions", res.definitions[n]}, {"within_h", within}});
    }
    std::uint64_t worst = 0;
    for (const auto& [x, c] : res.changes) {
      if (c > x + 1) ok = false;
      worst = std::max(worst, c);
    }
    json rep{{"points", pts}, {"A", res.a}, {"max_changes", worst}, {"plan", res.plan.to_json()}};
    if (!ok) throw CheckFailed{rep};
    emit(rep);
  });

  std::vector<std::string> adversary_texts;
  auto* ctt = cons->add_subcommand("ttsep", "c.e. set whose bounded jump is not bT below its tt-jump");
  ctt->add_option("--N", points, "requirements")->capture_default_str()->check(CLI::PositiveNumber);
  ctt->add_option("--stages", stage, "stages")->capture_default_str()->check(CLI::PositiveNumber);
  ctt->add_option("--adversary", adversary_texts, "functional/bound for R_0, R_1, ... (default: Cantor pairs)");
  ctt->add_option("--budget", budget, "steps for the final checks")->capture_default_str();
  trace_opt(ctt);
  ctt->callback([&] {
    std::vector<Adversary> adv;
    for (const auto& a : adversary_texts) adv.push_back(parse_adversary(a));
    auto res = tt_separation(points, stage, adv);
    save_trace(res.trace, trace_path);
    json reqs = json::array();
    bool ok = true;
    for (std::uint64_t n = 0; n < points; ++n) {
      auto c = check_requirement(res, n, budget);
      ok = ok && c.unfalsified();
      json r{{"n", n}, {"bound_resolved", c.bound_resolved}, {"jump", c.jump}, {"unfalsified", c.unfalsified()}};
      if (c.adversary) r["adversary"] = *c.adversary;
      reqs.push_back(r);
    }
    auto doubles = check_double_actions(res, budget);
    ok = ok && doubles.empty();
    json rep{{"enumerated", res.a_enumeration}, {"requirements", reqs}, {"double_action_violations", doubles}};
    if (!ok) throw CheckFailed{rep};
    emit(rep);
  });

  // ---- verify / replay ----
  std::string suite_name;
  auto* ver = app.add_subcommand("verify", "run a property suite");
  ver->add_option("--suite", suite_name, "all, or one of the suite names")->required();
  ver->callback([&] {
    auto names = suite_name == "all" ? suite_names() : std::vector<std::string>{suite_name};
    json out = json::array();
    bool ok = true;
    for (const auto& n : names) {
      auto r = run_suite(n);
      ok = ok && r.ok();
      out.push_back(r.to_json());
    }
    json rep = names.size() == 1 ? out[0] : json{{"suites", out}};
    if (!ok) throw CheckFailed{rep};
    emit(rep);
  });

  std::string replay_path;
  auto* rep = app.add_subcommand("replay", "re-run a construction from its trace and compare");
  rep->add_option("trace", replay_path, "JSON-lines trace")->required()->check(CLI::ExistingFile);
  rep->callback([&] {
    auto r = replay(ConstructionTrace::load(replay_path));
    if (!r.ok()) throw CheckFailed{r.to_json()};
    emit(r.to_json());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const CheckFailed& f) {
    std::cout << f.record.dump(2) << "\n";
    std::cerr << "check failed\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
