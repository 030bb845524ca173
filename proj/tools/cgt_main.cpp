#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "cgt/harness.hpp"

using namespace cgt;

namespace {

std::string rational_text(Rational const& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string show(Word const& w, Alphabet const& al) { return w.empty() ? "1" : format_word(w, al); }

void print(Json const& j) { std::cout << j.dump(2) << "\n"; }

// "g1, g2" or "(g1, g2)" as a pair of words over G.
std::pair<Word, Word> parse_pair(std::string text, Presentation const& g) {
  std::erase_if(text, [](char c) { return c == '(' || c == ')'; });
  auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("pair '" + text + "' needs the form g1, g2");
  auto part = [&](std::string s) {
    auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    return s == "1" || s.empty() ? Word{} : g.parse(s);
  };
  return {part(text.substr(0, comma)), part(text.substr(comma + 1))};
}

Json table_json_and_code(FunctionTable const& t, int& code) {
  for (auto const& s : t.samples)
    if (s.exactness == Exactness::BudgetExhausted) code = kBudgetExhausted;
  return table_to_json(t);
}

PairConvention parse_convention(std::string const& s) {
  if (s == "sum") return PairConvention::Sum;
  if (s == "max") return PairConvention::Max;
  throw ConfigError("convention must be 'sum' or 'max'");
}

struct Common {
  std::string pres;
  std::size_t radius = 16, moves = 8;
  BallOptions ball() const {
    BallOptions b;
    b.radius = radius;
    b.move_cap = moves;
    return b;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--presentation,--pres,--sys,--g", c.pres, "presentation file")->required();
  app->add_option("--radius", c.radius, "ball oracle: max intermediate word length");
  app->add_option("--moves", c.moves, "ball oracle: max relator applications");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cgt: experiments on Dehn functions, fibre products and conjugator length"};
  app.require_subcommand(1);

  Common common;
  std::string word, fn = "delta", flavor = "p", convention = "sum", u_text, v_text, in_path, out_path, config_path;
  std::vector<std::string> a_names;
  long long max_n = 6, powers = 5, exponent = 32, seed_q1 = 0, seed_q2 = 0;
  std::size_t area_cap = 32, length_cap = 0, states = 2000000, p_radius = 6, conj_radius = 4, tails = 16;
  std::size_t ball_radius = 3;
  bool use_seed = false;

  auto* wp = app.add_subcommand("wp", "decide whether a word is trivial");
  add_common(wp, common);
  wp->add_option("--word", word, "word")->required();

  auto* area_cmd = app.add_subcommand("area", "area of a null-homotopic word with a certificate");
  add_common(area_cmd, common);
  area_cmd->add_option("--word", word, "word")->required();
  area_cmd->add_option("--area-cap", area_cap, "max relator applications");
  area_cmd->add_option("--length-cap", length_cap, "max intermediate length (0: automatic)");
  area_cmd->add_option("--states", states, "state budget");

  auto* table = app.add_subcommand("table", "sample a Dehn-type function");
  add_common(table, common);
  table->add_option("--fn", fn, "delta | delta_c | delta_z | delta_o | frak_m | frak_t");
  table->add_option("--max-n", max_n, "largest n");
  table->add_option("--area-cap", area_cap, "max relator applications");
  table->add_option("--states", states, "area state budget");
  table->add_option("--exponent", exponent, "order cutoff");
  table->add_option("--convention", convention, "sum | max");
  bool csv = false;
  table->add_flag("--csv", csv, "print CSV instead of JSON");

  std::string report = "uqc";
  auto* cyc = app.add_subcommand("cyclics", "geometry of cyclic subgroups in a ball");
  cyc->add_option("--presentation,--pres", common.pres, "presentation file")->required();
  cyc->add_option("--radius", ball_radius, "ball radius");
  cyc->add_option("--powers", powers, "power cap");
  cyc->add_option("--report", report, "uqc | umc | tau")->check(CLI::IsMember({"uqc", "umc", "tau"}));
  cyc->add_option("--word", word, "word for the tau report");
  cyc->add_option("--oracle-radius", common.radius, "ball oracle: max intermediate word length");
  cyc->add_option("--moves", common.moves, "ball oracle: max relator applications");

  auto* fibre = app.add_subcommand("fibre", "distortion of the fibre product in G x G");
  add_common(fibre, common);
  std::string fibre_mode = "dist";
  fibre->add_option("mode", fibre_mode, "make | dist | witness")->check(CLI::IsMember({"make", "dist", "witness"}));
  fibre->add_option("--A", a_names, "generators of A")->required()->delimiter(',');
  fibre->add_option("--max-n", max_n, "largest n");
  fibre->add_option("--p-radius", p_radius, "P-ball radius");

  auto* cl = app.add_subcommand("cl", "conjugator length function");
  add_common(cl, common);
  cl->add_option("--A", a_names, "generators of A (flavors p, rel)")->delimiter(',');
  cl->add_option("--flavor", flavor, "g | p | rel");
  cl->add_option("--max-n", max_n, "largest n");
  cl->add_option("--conj-radius", conj_radius, "conjugator search radius");
  cl->add_option("--convention", convention, "sum | max");

  auto* conj = app.add_subcommand("conjugator", "construct a short conjugator in the fibre product");
  add_common(conj, common);
  conj->add_option("--A", a_names, "generators of A")->required()->delimiter(',');
  conj->add_option("--u", u_text, "U as 'g1, g2'")->required();
  conj->add_option("--v", v_text, "V as 'g1, g2'")->required();
  conj->add_option("--p-radius", p_radius, "P-ball radius for the brute-force comparison");
  conj->add_option("--exponent", exponent, "order cutoff");
  auto* seed_opt = conj->add_option("--seed-q1", seed_q1, "first exponent pair tried (q1)");
  conj->add_option("--seed-q2", seed_q2, "first exponent pair tried (q2)")->needs(seed_opt);

  auto* rips_cmd = app.add_subcommand("rips", "Rips construction");
  rips_cmd->add_option("--in", in_path, "quotient presentation")->required();
  rips_cmd->add_option("--out", out_path, "output presentation")->required();
  rips_cmd->add_option("--tails", tails, "initial tail length");

  auto* dagger_cmd = app.add_subcommand("dagger", "dagger construction");
  dagger_cmd->add_option("--in", in_path, "quotient presentation")->required();
  dagger_cmd->add_option("--out", out_path, "output presentation")->required();
  dagger_cmd->add_option("--tails", tails, "initial tail length");

  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    unsigned workers = worker_count();
    use_seed = conj->count("--seed-q1") > 0;

    if (*wp) {
      auto p = load_presentation(common.pres);
      auto o = make_oracle(p, common.ball());
      Word w = p.parse(word);
      Verdict v = o->query(w);
      auto st = o->stats();
      print({{"word", show(w, p.alphabet())},
             {"verdict", to_string(v)},
             {"oracle", o->kind()},
             {"exact", o->is_exact()},
             {"stats", {{"queries", st.queries}, {"nodes", st.nodes}, {"iso_constant_empirical", st.iso_constant}}}});
      return v == Verdict::Unknown ? kBudgetExhausted : kOk;
    }

    if (*area_cmd) {
      auto p = load_presentation(common.pres);
      Word w = p.parse(word);
      AreaCaps caps{length_cap, area_cap, states};
      auto r = area(p, w, caps);
      Json j{{"word", show(w, p.alphabet())},
             {"status", to_string(r.status)},
             {"area", r.area},
             {"lower_bound", r.lower_bound},
             {"closed", r.closed},
             {"states", r.states},
             {"length_cap", r.length_cap_used}};
      if (r.certificate) {
        Json f = Json::array();
        for (auto const& x : r.certificate->factors)
          f.push_back({{"theta", show(x.theta, p.alphabet())}, {"rho", show(x.rho, p.alphabet())}});
        j["certificate"] = {{"factors", f},
                            {"noise", r.certificate->noise},
                            {"noise_within_bound", r.noise_within_bound},
                            {"verified", verify_decomposition(w, *r.certificate, p)}};
      }
      print(j);
      return r.found() ? kOk : kBudgetExhausted;
    }

    if (*table) {
      auto p = load_presentation(common.pres);
      FunctionCaps caps;
      caps.area.area_cap = area_cap;
      caps.area.state_cap = states;
      caps.order_cutoff = exponent;
      caps.convention = parse_convention(convention);
      FunctionContext ctx(p, make_oracle(p, common.ball()), caps);
      if (!std::set<std::string>{"delta", "delta_c", "delta_z", "delta_o", "frak_m", "frak_t"}.count(fn))
        throw ConfigError("unknown function '" + fn + "'");
      auto t = function_table(ctx, fn, max_n, workers);
      int code = kOk;
      Json j = table_json_and_code(t, code);
      if (csv)
        std::cout << table_to_csv(t);
      else
        print(j);
      return code;
    }

    if (*cyc) {
      auto p = load_presentation(common.pres);
      auto ball = BallIndex::build(make_oracle(p, common.ball()), ball_radius);
      auto rep = [&](CyclicGeometryReport const& r, bool umc) {
        Json j{{"radius", r.radius}, {"power_cap", r.power_cap}, {"ball_complete", r.ball_complete},
               {"uncertified", r.uncertified}};
        if (umc) {
          j["k_hat"] = r.k_hat ? Json(rational_text(*r.k_hat)) : Json(nullptr);
          j["witness"] = {{"g", show(r.k_witness, p.alphabet())}, {"i", r.k_witness_i}, {"p", r.k_witness_p}};
        } else {
          j["lambda_hat"] = r.lambda_hat ? Json(rational_text(*r.lambda_hat)) : Json(nullptr);
          j["witness"] = {{"g", show(r.lambda_witness, p.alphabet())}, {"n", r.lambda_witness_n}};
        }
        if (r.torsion_witness)
          j["torsion_witness"] = {{"g", show(r.torsion_witness->first, p.alphabet())},
                                  {"order", r.torsion_witness->second}};
        return j;
      };
      Json j{{"report", report}, {"dedup", ball.dedup_method()}};
      if (report == "uqc") j["uqc"] = rep(uqc_estimate(ball, powers), false);
      if (report == "umc") j["umc"] = rep(umc_estimate(ball, powers), true);
      if (report == "tau") {
        if (word.empty()) throw ConfigError("--report tau needs --word");
        auto tb = translation_number_bound(p.parse(word), powers, ball);
        j["translation_number"] = {{"word", word},
                                   {"tau_upper", tb.tau_upper ? Json(rational_text(*tb.tau_upper)) : Json(nullptr)},
                                   {"argmin_n", tb.argmin_n},
                                   {"uncertified", tb.uncertified}};
      }
      print(j);
      return kOk;
    }

    if (*fibre) {
      auto p = load_presentation(common.pres);
      auto sys = make_fibre_system(p, a_names, common.ball());
      Json j{{"mode", fibre_mode},
             {"Q", serialize_presentation(sys.Q())},
             {"A", a_names},
             {"p_generators", sys.p_gens().names()}};
      int code = kOk;
      if (fibre_mode == "dist") {
        FunctionTable t;
        t.name = "dist";
        t.budget["p_radius"] = static_cast<long long>(p_radius);
        for (long long n = 1; n <= max_n; ++n) t.samples.push_back(distortion(sys, n, {p_radius, 400000}));
        j["table"] = table_json_and_code(t, code);
      }
      if (fibre_mode == "witness") {
        Json hard = Json::array();
        for (long long n = 1; n <= max_n; ++n) {
          auto h = hard_distortion_witness(sys, n, {p_radius, 400000});
          if (h.exactness != Exactness::Exact) code = kBudgetExhausted;
          hard.push_back({{"n", n},
                          {"gamma", show(h.gamma, p.alphabet())},
                          {"p_length", h.p_len ? Json(*h.p_len) : Json(nullptr)},
                          {"exactness", to_string(h.exactness)}});
        }
        j["witnesses"] = hard;
      }
      print(j);
      return code;
    }

    if (*cl) {
      auto p = load_presentation(common.pres);
      CLFlavor fl = parse_cl_flavor(flavor);
      CLCaps caps;
      caps.conjugator_radius = conj_radius;
      caps.convention = parse_convention(convention);
      caps.workers = workers;
      FunctionTable t;
      t.name = "cl_" + to_string(fl);
      t.budget["conjugator_radius"] = static_cast<long long>(conj_radius);
      Json extra = Json::array();
      if (fl == CLFlavor::G) {
        auto o = make_oracle(p, common.ball());
        for (long long n = 1; n <= max_n; ++n) {
          auto s = cl_g(o, n, caps);
          extra.push_back({{"n", n}, {"pairs", s.pairs}, {"uncertified_pairs", s.uncertified_pairs}});
          t.samples.push_back(s.sample);
        }
      } else {
        if (a_names.empty()) throw ConfigError("flavors p and rel need --A");
        auto sys = make_fibre_system(p, a_names, common.ball());
        for (long long n = 1; n <= max_n; ++n) {
          auto s = cl_p(sys, n, fl, caps);
          extra.push_back({{"n", n}, {"pairs", s.pairs}, {"uncertified_pairs", s.uncertified_pairs}});
          t.samples.push_back(s.sample);
        }
      }
      int code = kOk;
      Json j{{"table", table_json_and_code(t, code)}, {"pairs", extra}};
      print(j);
      return code;
    }

    if (*conj) {
      auto p = load_presentation(common.pres);
      auto sys = make_fibre_system(p, a_names, common.ball());
      auto [u1, u2] = parse_pair(u_text, p);
      auto [v1, v2] = parse_pair(v_text, p);
      ConjugatorCaps caps;
      caps.order_cutoff = exponent;
      if (use_seed) caps.seed = std::make_pair(seed_q1, seed_q2);
      auto c = construct_P_conjugator(u1, u2, v1, v2, sys, caps);
      Json j = certificate_to_json(c, sys);
      auto brute = p_conjugacy_search(PBall::build(sys, p_radius), u1, u2, v1, v2);
      j["brute_force"] = {{"status", to_string(brute.status)},
                          {"p_radius", p_radius},
                          {"conjugator", brute.status == ConjugacySearch::Status::Found
                                             ? Json(show(brute.p_word, sys.p_gens()))
                                             : Json(nullptr)},
                          {"length", brute.status == ConjugacySearch::Status::Found ? Json(brute.p_word.size())
                                                                                     : Json(nullptr)}};
      print(j);
      if (c.stage == "verify") return kAuditFailure;
      return c.ok ? kOk : kBudgetExhausted;
    }

    if (*rips_cmd) {
      auto q = load_presentation(in_path);
      auto r = rips(q, tails);
      save_presentation(r.g, out_path);
      Json j = rips_to_json(r.certificate);
      std::ofstream(out_path + ".json") << j.dump(2) << "\n";
      print(j);
      return r.certificate.ok() ? kOk : kAuditFailure;
    }

    if (*dagger_cmd) {
      auto q = load_presentation(in_path);
      auto d = dagger(q, tails);
      save_presentation(d.qd, out_path);
      Json j{{"rips", rips_to_json(d.rips)},
             {"generators", d.qd.rank()},
             {"relators", d.relator_count},
             {"expected_relators", d.expected_count},
             {"fibre_generators", d.s_p_names},
             {"kill_t", d.kill_t},
             {"kill_chain", d.kill_chain},
             {"stages", d.stages},
             {"ok", d.ok()}};
      std::ofstream(out_path + ".json") << j.dump(2) << "\n";
      print(j);
      return d.ok() ? kOk : kAuditFailure;
    }

    if (*run) {
      auto cfg = load_config(config_path);
      auto res = run_experiment(cfg, workers);
      for (auto const& l : res.logs) std::cerr << l << "\n";
      if (!cfg.output.empty()) {
        for (auto const& path : emit(res, cfg.output, cfg.formats)) std::cerr << "wrote " << path << "\n";
      } else {
        print(res.report);
      }
      return res.exit_code;
    }
  } catch (ConfigError const& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (ParseError const& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (Error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kOk;
}
