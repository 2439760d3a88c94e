#include "dtml/suites.hpp"

#include <sstream>

#include "dtml/errors.hpp"
#include "dtml/eval.hpp"
#include "dtml/generators.hpp"
#include "dtml/hybrid.hpp"
#include "dtml/io.hpp"
#include "dtml/kdl.hpp"
#include "dtml/parser.hpp"
#include "dtml/update.hpp"

namespace dtml {

std::string SuiteResult::report() const {
  std::ostringstream out;
  out << "suite " << name << ": " << (pass() ? "PASS" : "FAIL") << " (" << checks
      << " checks, seed " << seed << ")\n";
  size_t shown = 0;
  for (const auto& f : failures) {
    if (shown++ == 20) {
      out << "  ... +" << (failures.size() - 20) << " more\n";
      break;
    }
    out << "  counterexample: " << f << "\n";
  }
  return out.str();
}

SuiteResult run_prop1_suite(const SuiteOptions& opts) {
  SuiteResult result;
  result.name = "prop1";
  result.seed = opts.seed;
  int iterations = opts.iterations > 0 ? opts.iterations : 200;
  int per_model = opts.formulas_per_model > 0 ? opts.formulas_per_model : 5;
  Rng rng(opts.seed);
  for (int i = 0; i < iterations; ++i) {
    HybridModel hm = random_hybrid_model(rng);
    std::vector<HybridFormula> corpus;
    for (int f = 0; f < per_model; ++f) corpus.push_back(random_hybrid_formula(rng, hm, 4));
    Prop1Report rep = check_prop1(hm, corpus);
    result.checks += rep.checks;
    for (const auto& c : rep.counterexamples)
      result.failures.push_back("model " + std::to_string(i) + ": " + c);
  }
  return result;
}

namespace {

Valuation kdl_valuation(const KdlModel& m, Pivot pivot, const std::string& agent) {
  Valuation g;
  for (const auto& [nom, a] : m.nominal_assign) g.set(nom, a);
  g.set(pivot_name(pivot), agent);
  return g;
}

}  // namespace

SuiteResult run_prop2_suite(const SuiteOptions& opts) {
  SuiteResult result;
  result.name = "prop2";
  result.seed = opts.seed;
  int iterations = opts.iterations > 0 ? opts.iterations : 100;
  int per_model = opts.formulas_per_model > 0 ? opts.formulas_per_model : 100;
  Rng rng(opts.seed);

  for (int i = 0; i < iterations; ++i) {
    KdlModel m = random_kdl_model(rng);
    auto model_issues = validate_kdl(m);
    if (!model_issues.empty()) {
      result.failures.push_back("model " + std::to_string(i) +
                                ": generator produced invalid model: " + model_issues.front());
      continue;
    }
    auto d = random_transformation(rng, m);
    auto l = random_learning(rng, m);
    TranslationContext ctx = context_for(m);

    KdlModel md = apply_transformation(m, *d);
    KdlModel ml = apply_learning(m, *l);
    Model img = tml_image(m.as_hybrid());
    Model img_d = tml_image(md.as_hybrid());
    Model img_l = tml_image(ml.as_hybrid());
    PointedAction pad = ctx.compile_transformation(d);
    std::shared_ptr<const ActionModel> al = ctx.compile_learning(l);

    Evaluator ev;
    UpdateResult prod_d = product_update_full(ev, img, *pad.model);
    std::map<std::string, std::string> map_d;
    for (const auto& w : img.worlds) map_d[w] = prod_d.world_names.at({w, pad.event});
    MorphismReport rep = bounded_morphism_check(img_d, prod_d.model, map_d);
    result.checks += rep.checks;
    for (const auto& v : rep.violations)
      result.failures.push_back("model " + std::to_string(i) + " transformation morphism: " + v);

    UpdateResult prod_l = product_update_full(ev, img, *al);
    std::map<std::string, std::string> map_l;
    bool events_ok = true;
    Valuation closed;
    for (const auto& w : img.worlds) {
      std::string hit;
      int count = 0;
      for (const auto& e : al->events)
        if (ev.satisfies(img, w, closed, al->precondition(e))) {
          count++;
          hit = e;
        }
      result.checks++;
      if (count != 1) {
        result.failures.push_back("model " + std::to_string(i) + ": " + std::to_string(count) +
                                  " event preconditions hold at " + w);
        events_ok = false;
        break;
      }
      map_l[w] = prod_l.world_names.at({w, hit});
    }
    if (!events_ok) continue;
    rep = bounded_morphism_check(img_l, prod_l.model, map_l);
    result.checks += rep.checks;
    for (const auto& v : rep.violations)
      result.failures.push_back("model " + std::to_string(i) + " learning morphism: " + v);

    for (int f = 0; f < per_model; ++f) {
      HybridFormula phi = random_kdl_formula(rng, m, 3);
      for (Pivot pivot : {Pivot::x, Pivot::y}) {
        Formula t = translate_dynamic(phi, pivot, ctx);
        for (const auto& w : m.worlds) {
          for (const auto& a : m.agents) {
            Valuation g = kdl_valuation(m, pivot, a);
            bool direct = kdl_satisfies(md, w, a, phi);
            bool via_tml = ev.satisfies(prod_d.model, map_d.at(w), g, t);
            result.checks++;
            if (direct != via_tml)
              result.failures.push_back("model " + std::to_string(i) + " transformation: " +
                                        to_string(phi) + " at (" + w + "," + a + ") pivot " +
                                        pivot_name(pivot));
            direct = kdl_satisfies(ml, w, a, phi);
            via_tml = ev.satisfies(prod_l.model, map_l.at(w), g, t);
            result.checks++;
            if (direct != via_tml)
              result.failures.push_back("model " + std::to_string(i) + " learning: " +
                                        to_string(phi) + " at (" + w + "," + a + ") pivot " +
                                        pivot_name(pivot));
          }
        }
      }
      // Full dynamic translation, checked on the original image.
      HybridFormula boxed_d = HybridFormula::dyn_transform(d, phi);
      HybridFormula boxed_l = HybridFormula::dyn_learn(l, phi);
      Formula td = translate_dynamic(boxed_d, Pivot::x, ctx);
      Formula tl = translate_dynamic(boxed_l, Pivot::x, ctx);
      for (const auto& w : m.worlds) {
        for (const auto& a : m.agents) {
          Valuation g = kdl_valuation(m, Pivot::x, a);
          result.checks += 2;
          if (kdl_satisfies(m, w, a, boxed_d) != ev.satisfies(img, w, g, td))
            result.failures.push_back("model " + std::to_string(i) +
                                      " dynamic clause [d]: " + to_string(phi) + " at (" + w +
                                      "," + a + ")");
          if (kdl_satisfies(m, w, a, boxed_l) != ev.satisfies(img, w, g, tl))
            result.failures.push_back("model " + std::to_string(i) +
                                      " dynamic clause [l]: " + to_string(phi) + " at (" + w +
                                      "," + a + ")");
        }
      }
    }
  }
  return result;
}

namespace {

KdlModel mutation_base() {
  KdlModel m;
  m.agents = {"a1", "a2"};
  m.worlds = {"u", "v"};
  m.features.features = {{"f", {"0", "1"}}};
  m.epistemic["a1"] = {{"u", "v"}};
  m.epistemic["a2"] = {{"u"}, {"v"}};
  m.networks["u"] = {};
  m.networks["v"] = {};
  m.values["u"]["a1"]["f"] = "1";
  m.values["u"]["a2"]["f"] = "0";
  m.values["v"]["a1"]["f"] = "0";
  m.values["v"]["a2"]["f"] = "0";
  return m;
}

std::set<std::string> failing_axioms(const Model& img, size_t n) {
  std::set<std::string> out;
  for (const auto& [world, axiom] : check_characterization(img, n)) {
    (void)world;
    out.insert(axiom);
  }
  return out;
}

}  // namespace

SuiteResult run_fn_suite(const SuiteOptions& opts) {
  SuiteResult result;
  result.name = "fn";
  result.seed = opts.seed;
  int iterations = opts.iterations > 0 ? opts.iterations : 100;
  Rng rng(opts.seed);

  for (int i = 0; i < iterations; ++i) {
    KdlModel m = random_kdl_model(rng);
    auto d = random_transformation(rng, m);
    auto l = random_learning(rng, m);
    for (const auto& [tag, model] :
         std::vector<std::pair<std::string, KdlModel>>{{"base", m},
                                                       {"after d", apply_transformation(m, *d)},
                                                       {"after l", apply_learning(m, *l)}}) {
      Model img = tml_image(model.as_hybrid());
      auto failures = check_characterization(img, m.agents.size());
      result.checks += static_cast<long>(img.worlds.size()) * 4;
      for (const auto& [world, axiom] : failures)
        result.failures.push_back("model " + std::to_string(i) + " (" + tag + "): axiom " +
                                  axiom + " fails at " + world);
    }
  }

  // Targeted mutations must falsify exactly the matching axiom.
  KdlModel base = mutation_base();
  Model img = tml_image(base.as_hybrid());
  result.checks += 4;
  if (!failing_axioms(img, 2).empty())
    result.failures.push_back("mutation base is not in the class");

  {
    Model broken = img;
    for (auto& [w, wi] : broken.interp) wi.network.insert({"a1", "a2"});
    auto fails = failing_axioms(broken, 2);
    result.checks++;
    if (fails != std::set<std::string>{"Neigh"})
      result.failures.push_back("asymmetric network mutation should falsify exactly Neigh");
  }
  {
    Model broken = img;
    broken.interp.at("v").constants[agent_constant("a1")] = "a2";
    broken.interp.at("v").constants[agent_constant("a2")] = "a1";
    auto fails = failing_axioms(broken, 2);
    result.checks++;
    if (fails != std::set<std::string>{"Rig"})
      result.failures.push_back("non-rigid constant mutation should falsify exactly Rig");
  }
  {
    Model broken = img;
    broken.interp.at("u").network = {{"a1", "a2"}, {"a2", "a1"}};
    auto fails = failing_axioms(broken, 2);
    result.checks++;
    if (fails != std::set<std::string>{"KnowNeigh"})
      result.failures.push_back("hidden neighborhood mutation should falsify exactly KnowNeigh");
  }
  return result;
}

SuiteResult run_s5_suite(const SuiteOptions& opts) {
  SuiteResult result;
  result.name = "s5";
  result.seed = opts.seed;
  int iterations = opts.iterations > 0 ? opts.iterations : 10;
  int per_model = opts.formulas_per_model > 0 ? opts.formulas_per_model : 50;
  Rng rng(opts.seed);
  for (int i = 0; i < iterations; ++i) {
    Model m = random_model(rng);
    Evaluator ev;
    Valuation g;
    for (int f = 0; f < per_model; ++f) {
      Formula phi = random_closed_formula(rng, m.sig, 3);
      // Truthfulness holds for any index term, even a non-rigid constant.
      // The introspection schemata need a denotation-stable index, so they
      // are taken universally over a variable, as in term-modal S5 systems.
      Term c = Term::con(rng.pick(m.sig.constants()));
      Term v = Term::var("v");
      auto know_v = [&](Formula body) { return Formula::know(v, std::move(body)); };
      Formula schema_t = Formula::conj(
          Formula::implies(Formula::know(c, phi), phi),
          Formula::forall("v", Formula::implies(know_v(phi), phi)));
      Formula schema_4 =
          Formula::forall("v", Formula::implies(know_v(phi), know_v(know_v(phi))));
      Formula schema_5 = Formula::forall(
          "v", Formula::implies(Formula::neg(know_v(phi)), know_v(Formula::neg(know_v(phi)))));
      std::vector<std::pair<std::string, Formula>> schemata = {
          {"T", schema_t}, {"4", schema_4}, {"5", schema_5}};
      for (const auto& w : m.worlds) {
        for (const auto& [tag, schema] : schemata) {
          result.checks++;
          if (!ev.satisfies(m, w, g, schema))
            result.failures.push_back("model " + std::to_string(i) + ": schema " + tag +
                                      " fails at " + w + " for " + to_string(phi));
        }
      }
    }
  }
  return result;
}

std::vector<FigureCheck> figure_checks(const std::string& fixtures_dir) {
  std::vector<FigureCheck> out;
  auto add = [&](int criterion, const std::string& name, bool pass,
                 const std::string& detail = "") {
    out.push_back(FigureCheck{criterion, name, pass, detail});
  };

  LoadedModel server = load_model_file(fixtures_dir + "/server_error/server_error.model");
  const Model& m0 = server.pointed.model;
  Evaluator ev;
  Valuation g;
  auto F0 = [&](const std::string& s) { return parse_formula(s, m0.sig); };

  add(1, "nobody knows why the server failed",
      ev.satisfies(m0, "u", g, F0("forall x. !K[x] exists y. M(y)")));
  add(1, "boss lacks de re knowledge before the log",
      !ev.satisfies(m0, "u", g, F0("K[a_] M(c_)")));

  LoadedAction log = load_action_file(fixtures_dir + "/server_error/log.action", m0.sig);
  PointedModel pm1 = product_update_pointed(ev, server.pointed, {log.action, "3"});
  std::set<std::string> names(pm1.model.worlds.begin(), pm1.model.worlds.end());
  add(2, "log update has 5 worlds", names.size() == 5 && pm1.model.worlds.size() == 5,
      std::to_string(pm1.model.worlds.size()) + " worlds");
  add(2, "surviving pairs are w1 v2 u3 v4 u4",
      names == std::set<std::string>{"w1", "v2", "u3", "v4", "u4"});
  add(2, "w1 ~_b v2", same_cell(pm1.model, "b", "w1", "v2"));
  add(2, "v4 ~_a u4", same_cell(pm1.model, "a", "v4", "u4"));
  add(2, "w1 is not ~_a v2", !same_cell(pm1.model, "a", "w1", "v2"));
  add(2, "boss now knows that c made a mistake",
      ev.satisfies(pm1.model, "u3", g, F0("K[a_] M(c_)")));

  LoadedAction dedicto = load_action_file(fixtures_dir + "/server_error/dedicto.action", m0.sig);
  PointedModel pm2 = product_update_pointed(ev, pm1, {dedicto.action, "e"});
  add(3, "de dicto announcement leaves 4 worlds", pm2.model.worlds.size() == 4,
      std::to_string(pm2.model.worlds.size()) + " worlds");
  add(3, "everybody knows de dicto",
      ev.satisfies(pm2.model, pm2.actual, g, F0("forall x. K[x] exists y. M(y)")));
  add(3, "the boss knows de re",
      ev.satisfies(pm2.model, pm2.actual, g, F0("exists x. K[a_] M(x)")));
  add(3, "the employees are held in suspense",
      ev.satisfies(pm2.model, pm2.actual, g,
                   F0("forall x. (exists y. N(y,x) -> <K[x]> !exists z. K[a_] M(z))")));

  LoadedAction dere = load_action_file(fixtures_dir + "/server_error/dere.action", m0.sig);
  PointedModel pm3 = product_update_pointed(ev, pm2, {dere.action, "s"});
  add(4, "de re announcement leaves 2 worlds", pm3.model.worlds.size() == 2,
      std::to_string(pm3.model.worlds.size()) + " worlds");
  add(4, "everybody knows the boss knows de re",
      ev.satisfies(pm3.model, pm3.actual, g, F0("forall x. K[x] exists y. K[a_] M(y)")));
  add(4, "employees still only know de dicto",
      ev.satisfies(pm3.model, pm3.actual, g,
                   F0("forall x. ((x = b_ | x = c_) -> (K[x] exists y. M(y)) & !exists z. K[x] "
                      "M(z))")));

  LoadedAction fired = load_action_file(fixtures_dir + "/server_error/fired.action", m0.sig);
  PointedModel pm4 = product_update_pointed(ev, pm3, {fired.action, "f"});
  std::set<std::pair<std::string, std::string>> want{{"a", "c"}};
  std::string got;
  for (const auto& [a, b] : pm4.model.interp.at(pm4.actual).network)
    got += "(" + a + "," + b + ") ";
  add(5, "network after the firing is {(a,c)}",
      pm4.model.interp.at(pm4.actual).network == want, "network: " + got);

  LoadedModel thieves = load_model_file(fixtures_dir + "/thieves/thieves.model");
  const Model& t0 = thieves.pointed.model;
  auto F1 = [&](const std::string& s) { return parse_formula(s, t0.sig); };
  add(6, "the cop does not know who Tokyo is",
      ev.satisfies(t0, "w1", g, F1("!exists x. K[c_] (x = t_)")));

  LoadedAction join =
      load_action_file(fixtures_dir + "/thieves/becoming_criminal.action", t0.sig);
  PointedModel tm1 = product_update_pointed(ev, thieves.pointed, {join.action, "e"});
  add(6, "Tokyo knows all her neighbors",
      ev.satisfies(tm1.model, tm1.actual, g, F1("forall x. (N(t_,x) -> K[t_] N(t_,x))")));
  add(6, "cop learns de dicto that a hostage joined",
      ev.satisfies(tm1.model, tm1.actual, g,
                   F1("K[c_] exists x. (x != t_ & x != b_ & N(t_,x))")));
  add(6, "cop cannot tell who joined",
      !ev.satisfies(tm1.model, tm1.actual, g,
                    F1("exists x. K[c_] (x != t_ & x != b_ & N(t_,x))")));

  LoadedAction reveal = load_action_file(fixtures_dir + "/thieves/reveal_asset.action", t0.sig);
  PointedModel tm2 = product_update_pointed(ev, tm1, {reveal.action, "r"});
  add(6, "revealing the asset leaves 2 worlds", tm2.model.worlds.size() == 2,
      std::to_string(tm2.model.worlds.size()) + " worlds");
  add(6, "the cop now knows the network",
      ev.satisfies(tm2.model, tm2.actual, g,
                   F1("forall x. forall y. (N(x,y) -> K[c_] N(x,y))")));
  return out;
}

SuiteResult run_figures_suite(const SuiteOptions& opts) {
  SuiteResult result;
  result.name = "figures";
  result.seed = opts.seed;
  try {
    for (const auto& check : figure_checks(opts.fixtures_dir)) {
      result.checks++;
      if (!check.pass)
        result.failures.push_back(
            check.name + (check.detail.empty() ? "" : " (" + check.detail + ")"));
    }
  } catch (const Error& e) {
    result.failures.push_back(std::string("fixture error: ") + e.what());
  }
  return result;
}

}  // namespace dtml
