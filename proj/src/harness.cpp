#include "cgt/harness.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace cgt {

namespace fs = std::filesystem;

namespace {

std::set<std::string> const kFunctions = {"delta",  "delta_c", "delta_z", "delta_o", "frak_m",
                                          "frak_t", "dist",    "cl_g",    "cl_p",    "cl_rel"};
std::set<std::string> const kAudits = {"monotone",    "scholium-3.4", "half-length", "cl-containment",
                                       "conjugator",  "hard-instance", "rips",       "dagger"};
std::set<std::string> const kPipelines = {"none", "rips", "dagger", "hnn"};

Exactness parse_exactness(std::string const& s) {
  if (s == "exact") return Exactness::Exact;
  if (s == "lower_bound") return Exactness::LowerBound;
  if (s == "budget_exhausted") return Exactness::BudgetExhausted;
  throw ConfigError("unknown exactness '" + s + "'");
}

template <class T>
T get_or(Json const& j, char const* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (nlohmann::json::exception const&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

std::size_t positive(Json const& j, char const* key, std::size_t fallback, bool zero_ok = false) {
  if (!j.contains(key)) return fallback;
  long long v = get_or<long long>(j, key, 0);
  if (v < 0 || (v == 0 && !zero_ok)) throw ConfigError(std::string("cap '") + key + "' must be positive");
  return static_cast<std::size_t>(v);
}

std::string resolve(std::string const& path, std::string const& base_dir) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).lexically_normal().string();
}

}  // namespace

unsigned worker_count() {
  char const* v = std::getenv("CGT_WORKERS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) throw ConfigError("CGT_WORKERS must be an integer in 1..1024");
  return static_cast<unsigned>(n);
}

std::string to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::Pass: return "pass";
    case AuditStatus::Fail: return "fail";
    case AuditStatus::Unknown: return "unknown";
  }
  return "unknown";
}

std::size_t AuditReport::count(AuditStatus s) const {
  std::size_t k = 0;
  for (auto const& x : samples) k += x.status == s;
  return k;
}

// ---- config -------------------------------------------------------------

ExperimentConfig parse_config(Json const& j, std::string const& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  c.base = resolve(get_or<std::string>(j, "base", ""), base_dir);
  if (c.base.empty()) throw ConfigError("config needs 'base'");
  c.pipeline = get_or<std::string>(j, "pipeline", "none");
  if (!kPipelines.count(c.pipeline)) throw ConfigError("unknown pipeline '" + c.pipeline + "'");
  c.hnn_subgroup = get_or<std::vector<std::string>>(j, "hnn_subgroup", {});
  c.a = get_or<std::vector<std::string>>(j, "A", {});
  if (!j.contains("n")) throw ConfigError("config needs 'n': [min, max]");
  auto n = get_or<std::vector<long long>>(j, "n", {});
  if (n.size() != 2) throw ConfigError("'n' must be [min, max]");
  c.n_min = n[0];
  c.n_max = n[1];
  if (c.n_min < 0 || c.n_max < c.n_min) throw ConfigError("'n' range is empty");
  c.functions = get_or<std::vector<std::string>>(j, "functions", {});
  for (auto const& f : c.functions)
    if (!kFunctions.count(f)) throw ConfigError("unknown function '" + f + "'");
  c.audits = get_or<std::vector<std::string>>(j, "audits", {});
  for (auto const& a : c.audits)
    if (!kAudits.count(a)) throw ConfigError("unknown audit '" + a + "'");
  c.conjugator_instances = positive(j, "conjugator_instances", 0, true);
  c.seed = get_or<std::uint64_t>(j, "seed", 1);
  c.output = resolve(get_or<std::string>(j, "output", ""), base_dir);
  c.formats = get_or<std::vector<std::string>>(j, "formats", c.formats);
  for (auto const& f : c.formats)
    if (f != "json" && f != "csv") throw ConfigError("unknown format '" + f + "'");

  Json caps = j.contains("caps") ? j.at("caps") : Json::object();
  if (!caps.is_object()) throw ConfigError("'caps' must be an object");
  auto& k = c.caps;
  k.radius = positive(caps, "radius", k.radius);
  k.moves = positive(caps, "moves", k.moves);
  k.area = positive(caps, "area", k.area);
  k.length_cap = positive(caps, "length_cap", k.length_cap, true);
  k.states = positive(caps, "states", k.states);
  k.exponent = static_cast<long long>(positive(caps, "exponent", static_cast<std::size_t>(k.exponent)));
  k.p_radius = positive(caps, "p_radius", k.p_radius);
  k.conjugator_radius = positive(caps, "conjugator_radius", k.conjugator_radius);
  k.rips_tails = positive(caps, "rips_tails", k.rips_tails);
  std::string conv = get_or<std::string>(caps, "convention", "sum");
  if (conv == "sum")
    k.convention = PairConvention::Sum;
  else if (conv == "max")
    k.convention = PairConvention::Max;
  else
    throw ConfigError("convention must be 'sum' or 'max'");

  bool needs_fibre = false;
  for (auto const& f : c.functions) needs_fibre |= f == "dist" || f == "cl_p" || f == "cl_rel";
  for (auto const& a : c.audits)
    needs_fibre |= a == "scholium-3.4" || a == "half-length" || a == "conjugator" || a == "hard-instance" ||
                   a == "cl-containment";
  bool rips_like = c.pipeline == "rips" || c.pipeline == "dagger";
  if (needs_fibre && !rips_like && c.a.empty()) throw ConfigError("fibre-product work needs 'A' or a rips pipeline");
  if (c.pipeline == "hnn" && !j.contains("hnn_subgroup"))
    throw ConfigError("hnn pipeline needs 'hnn_subgroup' (may be an empty list)");
  for (auto const& a : c.audits) {
    if (a == "rips" && !rips_like) throw ConfigError("audit 'rips' needs the rips or dagger pipeline");
    if (a == "dagger" && c.pipeline != "dagger") throw ConfigError("audit 'dagger' needs the dagger pipeline");
  }
  return c;
}

ExperimentConfig load_config(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (nlohmann::json::parse_error const& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  return parse_config(j, fs::path(path).parent_path().string());
}

Json config_to_json(ExperimentConfig const& c) {
  Json j;
  j["base"] = fs::path(c.base).filename().string();
  j["pipeline"] = c.pipeline;
  if (c.pipeline == "hnn") j["hnn_subgroup"] = c.hnn_subgroup;
  j["A"] = c.a;
  j["n"] = {c.n_min, c.n_max};
  j["functions"] = c.functions;
  j["audits"] = c.audits;
  j["conjugator_instances"] = c.conjugator_instances;
  j["seed"] = c.seed;
  auto const& k = c.caps;
  j["caps"] = {{"radius", k.radius},
               {"moves", k.moves},
               {"area", k.area},
               {"length_cap", k.length_cap},
               {"states", k.states},
               {"exponent", k.exponent},
               {"p_radius", k.p_radius},
               {"conjugator_radius", k.conjugator_radius},
               {"rips_tails", k.rips_tails},
               {"convention", k.convention == PairConvention::Sum ? "sum" : "max"}};
  return j;
}

// ---- serialisation ------------------------------------------------------

Json table_to_json(FunctionTable const& t) {
  Json j;
  j["name"] = t.name;
  Json samples = Json::array();
  for (auto const& s : t.samples)
    samples.push_back({{"n", s.n}, {"value", s.value}, {"exactness", to_string(s.exactness)}, {"witness", s.witness}});
  j["samples"] = samples;
  Json budget = Json::object();
  for (auto const& [k, v] : t.budget) budget[k] = v;
  j["budget"] = budget;
  return j;
}

FunctionTable table_from_json(Json const& j) {
  FunctionTable t;
  try {
    t.name = j.at("name").get<std::string>();
    for (auto const& s : j.at("samples")) {
      Sample x;
      x.n = s.at("n").get<long long>();
      x.value = s.at("value").get<long long>();
      x.exactness = parse_exactness(s.at("exactness").get<std::string>());
      x.witness = s.at("witness").get<std::string>();
      t.samples.push_back(std::move(x));
    }
    for (auto const& [k, v] : j.at("budget").items()) t.budget[k] = v.get<long long>();
  } catch (nlohmann::json::exception const& e) {
    throw ConfigError(std::string("malformed table: ") + e.what());
  }
  return t;
}

std::string table_to_csv(FunctionTable const& t) {
  std::ostringstream os;
  os << "n,value,exactness\n";
  for (auto const& s : t.samples) os << s.n << ',' << s.value << ',' << to_string(s.exactness) << '\n';
  return os.str();
}

Json audit_to_json(AuditReport const& a) {
  Json j;
  j["id"] = a.id;
  j["inequality"] = a.inequality;
  Json constants = Json::array();
  for (auto const& c : a.constants)
    constants.push_back({{"name", c.name}, {"value", c.value}, {"provenance", c.provenance}});
  j["constants"] = constants;
  Json samples = Json::array();
  for (auto const& s : a.samples)
    samples.push_back(
        {{"n", s.n}, {"status", to_string(s.status)}, {"witness", s.witness}, {"detail", s.detail}});
  j["samples"] = samples;
  j["summary"] = {{"pass", a.count(AuditStatus::Pass)},
                  {"fail", a.count(AuditStatus::Fail)},
                  {"unknown", a.count(AuditStatus::Unknown)}};
  return j;
}

std::vector<std::string> emit(ExperimentResult const& r, std::string const& prefix,
                              std::vector<std::string> const& formats) {
  std::vector<std::string> written;
  fs::path p(prefix);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  auto write = [&](std::string const& path, std::string const& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("write failed for '" + path + "'");
    written.push_back(path);
  };
  for (auto const& f : formats) {
    if (f == "json") write(prefix + ".json", r.report.dump(2) + "\n");
    if (f == "csv") {
      std::map<std::string, int> seen;
      for (auto const& t : r.tables) {
        int k = ++seen[t.name];
        std::string name = k == 1 ? t.name : t.name + "_" + std::to_string(k);
        write(prefix + "_" + name + ".csv", table_to_csv(t));
      }
    }
  }
  return written;
}

Json rips_to_json(RipsCertificate const& c) {
  Json j;
  j["kernel"] = {c.a_name, c.b_name};
  j["word_length"] = c.word_length;
  j["attempts"] = c.attempts;
  j["tail_scheme"] = c.tail_scheme;
  j["relator_count"] = c.relator_count;
  j["expected_count"] = c.expected_count;
  j["lambda"] = std::to_string(c.lambda.numerator()) + "/" + std::to_string(c.lambda.denominator());
  j["c_prime_sixth"] = c.c6;
  j["retraction"] = c.retraction;
  j["asphericity"] = c.asphericity;
  j["ok"] = c.ok();
  return j;
}

Json certificate_to_json(ConjugatorCertificate const& c, FibreSystem const& sys) {
  auto const& al = sys.G().alphabet();
  auto w = [&](Word const& x) { return format_word(x, al); };
  Json j;
  j["U"] = {w(c.u1), w(c.u2)};
  j["V"] = {w(c.v1), w(c.v2)};
  j["zeta"] = format_word(c.zeta, sys.p_gens());
  j["zeta_length"] = c.zeta.size();
  j["ok"] = c.ok;
  j["stage"] = c.stage;
  j["conjugates"] = to_string(c.conjugates);
  j["member"] = to_string(c.member);
  Json s;
  s["diagonal_case"] = c.diagonal_case;
  s["g"] = w(c.g);
  s["gamma"] = w(c.gamma);
  s["y1"] = w(c.y1);
  s["e1"] = c.e1;
  s["y2"] = w(c.y2);
  s["e2"] = c.e2;
  s["q1"] = c.q1;
  s["q2"] = c.q2;
  s["p"] = c.p;
  s["r2"] = c.r2;
  s["p_prime"] = c.p_prime;
  s["omega"] = c.omega ? Json(*c.omega) : Json(nullptr);
  s["torsion_step"] = c.torsion_step;
  s["p_final"] = c.p_final;
  s["area_steps"] = c.area_steps;
  j["stages"] = s;
  return j;
}

// ---- pair audits --------------------------------------------------------

namespace {

struct PairFacts {
  Word g1, g2;
  std::size_t gg_length = 0;
  std::optional<std::size_t> p_length;  // exact, inside the P-ball
  Word w;                               // g2^-1 g1
  AreaResult area;
};

std::string pair_text(FibreSystem const& sys, Word const& g1, Word const& g2) {
  auto const& al = sys.G().alphabet();
  auto f = [&](Word const& x) { return x.empty() ? std::string("1") : format_word(x, al); };
  return "(" + f(g1) + ", " + f(g2) + ")";
}

// Members of P with |g1| + |g2| <= n_max, with their exact ingredients.
std::vector<PairFacts> collect_pairs(FibreSystem const& sys, long long n_max, PairAuditCaps const& caps,
                                     bool with_area, bool& lengths_exact) {
  auto gball = BallIndex::build(sys.g_oracle(), static_cast<std::size_t>(n_max));
  auto pball = PBall::build(sys, caps.p_radius);
  lengths_exact = gball.complete();
  std::vector<PairFacts> out;
  for (auto const& a : gball.elements())
    for (auto const& b : gball.elements()) {
      if (static_cast<long long>(a.length + b.length) > n_max) continue;
      if (p_membership(a.rep, b.rep, sys) != Verdict::Trivial) continue;
      PairFacts f;
      f.g1 = a.rep;
      f.g2 = b.rep;
      f.gg_length = a.length + b.length;
      if (pball.complete())
        if (auto const* e = pball.find(a.rep, b.rep)) f.p_length = e->length;
      f.w = invert(b.rep) * a.rep;
      if (with_area) f.area = sys.q_solver().solve(f.w, caps.area);
      out.push_back(std::move(f));
    }
  return out;
}

void close_sample(AuditSample& s, std::size_t certified, std::size_t checked, std::size_t violations) {
  s.detail = "pairs=" + std::to_string(checked) + " certified=" + std::to_string(certified) +
             " violations=" + std::to_string(violations);
  if (violations > 0)
    s.status = AuditStatus::Fail;
  else if (certified == checked)
    s.status = AuditStatus::Pass;
  else
    s.status = AuditStatus::Unknown;
}

}  // namespace

AuditReport audit_scholium(FibreSystem const& sys, long long n_min, long long n_max, PairAuditCaps caps) {
  AuditReport r;
  r.id = "scholium-3.4";
  r.inequality = "|(g1,g2)|_P <= (L+1) Area_Q(w) + |w| + n, w = g2^-1 g1, |(g1,g2)|_{GxG} <= n";
  std::size_t L = sys.q_max_relator_length();
  r.constants.push_back({"L", std::to_string(L), "computed"});
  r.constants.push_back({"p_radius", std::to_string(caps.p_radius), "configured"});
  bool exact_lengths = false;
  auto pairs = collect_pairs(sys, n_max, caps, true, exact_lengths);
  for (long long n = n_min; n <= n_max; ++n) {
    AuditSample s;
    s.n = n;
    std::size_t checked = 0, certified = 0, violations = 0;
    for (auto const& f : pairs) {
      if (static_cast<long long>(f.gg_length) > n) continue;
      ++checked;
      if (!exact_lengths || !f.p_length || !f.area.exact()) continue;
      ++certified;
      std::size_t rhs = (L + 1) * f.area.area + f.w.size() + static_cast<std::size_t>(n);
      if (*f.p_length > rhs) {
        if (violations++ == 0)
          s.witness = pair_text(sys, f.g1, f.g2) + " P-length " + std::to_string(*f.p_length) + " > " +
                      std::to_string(rhs);
      }
    }
    close_sample(s, certified, checked, violations);
    r.samples.push_back(std::move(s));
  }
  return r;
}

AuditReport audit_half_length(FibreSystem const& sys, long long n_min, long long n_max, PairAuditCaps caps) {
  AuditReport r;
  r.id = "half-length";
  r.inequality = "2 |(g1,g2)|_P >= |g1|_G + |g2|_G";
  r.constants.push_back({"p_radius", std::to_string(caps.p_radius), "configured"});
  bool exact_lengths = false;
  auto pairs = collect_pairs(sys, n_max, caps, false, exact_lengths);
  for (long long n = n_min; n <= n_max; ++n) {
    AuditSample s;
    s.n = n;
    std::size_t checked = 0, certified = 0, violations = 0;
    for (auto const& f : pairs) {
      if (static_cast<long long>(f.gg_length) > n) continue;
      ++checked;
      if (!exact_lengths || !f.p_length) continue;
      ++certified;
      if (2 * *f.p_length < f.gg_length) {
        if (violations++ == 0)
          s.witness = pair_text(sys, f.g1, f.g2) + " 2*" + std::to_string(*f.p_length) + " < " +
                      std::to_string(f.gg_length);
      }
    }
    close_sample(s, certified, checked, violations);
    r.samples.push_back(std::move(s));
  }
  return r;
}

// ---- conjugator audit ---------------------------------------------------

namespace {

Word random_p_word(std::mt19937_64& rng, std::size_t letters, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(1, max_len), code(0, 2 * letters - 1);
  std::size_t target = len(rng);
  std::vector<Letter> out;
  while (out.size() < target) {
    Letter l{static_cast<std::uint16_t>(code(rng))};
    if (!out.empty() && out.back() == l.inverse()) continue;
    out.push_back(l);
  }
  return from_reduced(std::move(out));
}

}  // namespace

AuditReport audit_conjugator(FibreSystem const& sys, long long n_min, long long n_max, ConjugatorAuditCaps caps) {
  AuditReport r;
  r.id = "conjugator";
  r.inequality = "zeta'' conjugates U to V in P, |zeta''| >= min P-conjugator length; torsion: |p''| <= omega/2";
  r.constants.push_back({"p_radius", std::to_string(caps.p_radius), "configured"});
  r.constants.push_back({"q_cap", std::to_string(caps.construct.q_cap), "configured"});
  r.constants.push_back({"g_radius", std::to_string(caps.construct.g_radius), "configured"});
  auto pball = PBall::build(sys, caps.p_radius);

  struct Instance {
    std::string label;
    Word u1, u2, v1, v2;
  };
  std::vector<Instance> instances;
  if (!sys.A().empty())
    for (long long n = n_min; n <= n_max; ++n) {
      auto h = hard_conjugacy_instance(sys, n, {caps.p_radius, 400000});
      instances.push_back({"hard n=" + std::to_string(n), h.u1, h.u2, h.v1, h.v2});
    }
  std::mt19937_64 rng(caps.seed);
  for (std::size_t i = 0; i < caps.random_instances; ++i) {
    Word u = random_p_word(rng, sys.p_gens().size(), caps.word_length);
    Word z = random_p_word(rng, sys.p_gens().size(), caps.word_length);
    auto [u1, u2] = sys.coordinates(u);
    auto [v1, v2] = sys.coordinates(conjugate(u, z));
    instances.push_back({"random " + std::to_string(i), u1, u2, v1, v2});
  }

  long long idx = 0;
  for (auto const& in : instances) {
    AuditSample s;
    s.n = idx++;
    s.witness = in.label + " U=" + pair_text(sys, in.u1, in.u2) + " V=" + pair_text(sys, in.v1, in.v2);
    auto brute = p_conjugacy_search(pball, in.u1, in.u2, in.v1, in.v2);
    auto c = construct_P_conjugator(in.u1, in.u2, in.v1, in.v2, sys, caps.construct);
    std::string brute_len =
        brute.status == ConjugacySearch::Status::Found ? std::to_string(brute.p_word.size()) : to_string(brute.status);
    s.detail = "stage=" + c.stage + " |zeta''|=" + std::to_string(c.zeta.size()) + " brute=" + brute_len;
    bool torsion_ok = !c.torsion_step || (c.omega && 2 * std::abs(c.p_final) <= *c.omega);
    if (c.torsion_step) s.detail += " p''=" + std::to_string(c.p_final) + " omega=" + std::to_string(*c.omega);
    if (c.stage == "verify" && (c.conjugates == Verdict::Nontrivial || c.member == Verdict::Nontrivial)) {
      s.status = AuditStatus::Fail;
    } else if (!c.ok || brute.status != ConjugacySearch::Status::Found) {
      // Dominance also fails if the ball is complete, holds no conjugator,
      // yet the construction found one inside it.
      bool contradiction = c.ok && brute.status == ConjugacySearch::Status::NotFound && c.zeta.size() <= pball.radius();
      s.status = contradiction ? AuditStatus::Fail : AuditStatus::Unknown;
    } else {
      s.status = c.zeta.size() >= brute.p_word.size() && torsion_ok ? AuditStatus::Pass : AuditStatus::Fail;
    }
    r.samples.push_back(std::move(s));
  }
  return r;
}

// ---- experiment ---------------------------------------------------------

namespace {

AuditReport audit_monotone(std::vector<FunctionTable> const& tables) {
  AuditReport r;
  r.id = "monotone";
  r.inequality = "f(n-1) <= f(n) on consecutive exact samples";
  for (auto const& t : tables)
    for (std::size_t i = 1; i < t.samples.size(); ++i) {
      auto const& a = t.samples[i - 1];
      auto const& b = t.samples[i];
      AuditSample s;
      s.n = b.n;
      s.witness = t.name;
      if (a.exactness != Exactness::Exact || b.exactness != Exactness::Exact || b.n != a.n + 1)
        s.status = AuditStatus::Unknown;
      else
        s.status = a.value <= b.value ? AuditStatus::Pass : AuditStatus::Fail;
      s.detail = t.name + "(" + std::to_string(a.n) + ")=" + std::to_string(a.value) + ", " + t.name + "(" +
                 std::to_string(b.n) + ")=" + std::to_string(b.value);
      r.samples.push_back(std::move(s));
    }
  return r;
}

AuditReport audit_hard_instances(FibreSystem const& sys, long long n_min, long long n_max, std::size_t p_radius) {
  AuditReport r;
  r.id = "hard-instance";
  r.inequality = "|(a,a)|_P = 1, |(gamma^-1 a gamma, a)|_P <= 2n+2, P-conjugators of the form (a0^p gamma, a0^q)";
  r.constants.push_back({"p_radius", std::to_string(p_radius), "configured"});
  auto pball = PBall::build(sys, p_radius);
  for (long long n = n_min; n <= n_max; ++n) {
    auto h = hard_conjugacy_instance(sys, n, {p_radius, 400000});
    AuditSample s;
    s.n = n;
    s.witness = "gamma=" + (h.gamma.empty() ? std::string("1") : sys.G().format(h.gamma)) +
                " V=" + pair_text(sys, h.v1, h.v2);
    auto brute = p_conjugacy_search(pball, h.u1, h.u2, h.v1, h.v2);
    CentraliserForm form;
    if (brute.status == ConjugacySearch::Status::Found) {
      auto [z1, z2] = sys.coordinates(brute.p_word);
      form = centraliser_form(z1, z2, h, sys, static_cast<long long>(p_radius) + 2 * n + 2);
    }
    s.detail = "|U|_P=" + (h.u_p_length ? std::to_string(*h.u_p_length) : std::string("?")) +
               " |V|_P=" + (h.v_p_length ? std::to_string(*h.v_p_length) : std::string("?")) +
               " spelled=" + std::to_string(h.v_p_word.size()) + " bound=" + std::to_string(h.bound) +
               " min_conjugator=" +
               (brute.status == ConjugacySearch::Status::Found ? std::to_string(brute.p_word.size())
                                                                : to_string(brute.status)) +
               " form=" + to_string(form.holds);
    bool certified = h.u_p_length && h.v_p_length && form.holds != Verdict::Unknown;
    bool holds = h.u_p_length == 1u && h.v_p_length && *h.v_p_length <= h.bound && form.holds == Verdict::Trivial;
    bool violated = (h.u_p_length && *h.u_p_length != 1) || (h.v_p_length && *h.v_p_length > h.bound) ||
                    form.holds == Verdict::Nontrivial;
    s.status = violated ? AuditStatus::Fail : (certified && holds ? AuditStatus::Pass : AuditStatus::Unknown);
    r.samples.push_back(std::move(s));
  }
  return r;
}

FunctionTable sample_table(std::string const& name, long long n_min, long long n_max,
                           std::function<Sample(long long)> const& fn) {
  FunctionTable t;
  t.name = name;
  for (long long n = n_min; n <= n_max; ++n) t.samples.push_back(fn(n));
  return t;
}

}  // namespace

ExperimentResult run_experiment(ExperimentConfig const& config, unsigned workers) {
  ExperimentResult res;
  auto const& k = config.caps;
  auto stage_error = [](std::string const& stage, std::exception const& e) {
    return Error("stage '" + stage + "': " + e.what());
  };

  Presentation base;
  try {
    base = load_presentation(config.base);
  } catch (ParseError const& e) {
    throw ConfigError("stage 'load': " + std::string(e.what()));
  } catch (Error const& e) {
    throw ConfigError("stage 'load': " + std::string(e.what()));
  }
  res.logs.push_back("loaded " + config.base + ": " + std::to_string(base.rank()) + " generators, " +
                     std::to_string(base.relators().size()) + " relators");

  Json pipeline;
  pipeline["kind"] = config.pipeline;
  Presentation subject = base;
  std::optional<Presentation> fibre_g;
  std::vector<std::size_t> fibre_a;
  std::optional<RipsCertificate> rips_cert;
  std::optional<DaggerResult> dagger_res;
  std::size_t smoke_failures = 0, smoke_count = 200;
  try {
    if (config.pipeline == "rips" || config.pipeline == "dagger") {
      auto r = rips(base, k.rips_tails);
      rips_cert = r.certificate;
      fibre_g = r.g;
      fibre_a = r.a;
      smoke_failures = null_product_smoke(r.g, smoke_count, config.seed);
      pipeline["rips"] = rips_to_json(r.certificate);
      pipeline["rips"]["null_products"] = {{"count", smoke_count}, {"failures", smoke_failures}};
      pipeline["G"] = serialize_presentation(r.g);
      res.logs.push_back("rips: tails " + std::to_string(r.certificate.word_length));
      if (config.pipeline == "dagger") {
        dagger_res = dagger(base, k.rips_tails);
        Json d;
        d["generators"] = dagger_res->qd.rank();
        d["relators"] = dagger_res->relator_count;
        d["expected_relators"] = dagger_res->expected_count;
        d["stable_letter"] = dagger_res->qd.alphabet().name(dagger_res->t);
        d["fibre_generators"] = dagger_res->s_p_names;
        d["kill_t"] = dagger_res->kill_t;
        d["kill_chain"] = dagger_res->kill_chain;
        d["stages"] = dagger_res->stages;
        pipeline["dagger"] = d;
      }
    } else if (config.pipeline == "hnn") {
      std::vector<Word> h;
      for (auto const& w : config.hnn_subgroup) h.push_back(base.parse(w));
      auto r = trivial_hnn(base, h);
      subject = r.p;
      pipeline["hnn"] = {{"stable_letter", subject.alphabet().name(r.t)},
                         {"presentation", serialize_presentation(subject)}};
    }
  } catch (ParseError const& e) {
    throw ConfigError("stage 'pipeline': " + std::string(e.what()));
  } catch (Error const& e) {
    throw stage_error("pipeline", e);
  }
  if (!fibre_g && !config.a.empty()) {
    fibre_g = subject;
    for (auto const& n : config.a) {
      auto idx = subject.alphabet().find(n);
      if (!idx) throw ConfigError("stage 'fibre': unknown generator '" + n + "' in A");
      fibre_a.push_back(*idx);
    }
  }

  BallOptions ball;
  ball.radius = k.radius;
  ball.move_cap = k.moves;
  OraclePtr oracle = make_oracle(subject, ball);
  pipeline["oracle"] = oracle->kind();
  std::unique_ptr<FibreSystem> sys;
  if (fibre_g) {
    sys = std::make_unique<FibreSystem>(*fibre_g, fibre_a, ball);
    pipeline["fibre"] = {{"A", Json::array()}, {"p_generators", sys->p_gens().names()}};
    for (auto a : sys->A()) pipeline["fibre"]["A"].push_back(sys->G().alphabet().name(a));
  }

  FunctionCaps fcaps;
  fcaps.area.length_cap = k.length_cap;
  fcaps.area.area_cap = k.area;
  fcaps.area.state_cap = k.states;
  fcaps.order_cutoff = k.exponent;
  fcaps.convention = k.convention;
  FunctionContext ctx(subject, oracle, fcaps);
  CLCaps ccaps;
  ccaps.conjugator_radius = k.conjugator_radius;
  ccaps.convention = k.convention;
  ccaps.workers = workers;
  std::map<long long, CLSample> rel_cache;
  auto rel_sample = [&](long long n) -> CLSample const& {
    auto it = rel_cache.find(n);
    if (it == rel_cache.end()) it = rel_cache.emplace(n, cl_p(*sys, n, CLFlavor::Rel, ccaps)).first;
    return it->second;
  };

  for (auto const& fn : config.functions) {
    try {
      FunctionTable t;
      if (fn == "dist") {
        t = sample_table("dist", config.n_min, config.n_max,
                         [&](long long n) { return distortion(*sys, n, {k.p_radius, 400000}); });
        t.budget["p_radius"] = static_cast<long long>(k.p_radius);
      } else if (fn == "cl_g") {
        t = sample_table("cl_g", config.n_min, config.n_max, [&](long long n) { return cl_g(oracle, n, ccaps).sample; });
        t.budget["conjugator_radius"] = static_cast<long long>(k.conjugator_radius);
      } else if (fn == "cl_p") {
        t = sample_table("cl_p", config.n_min, config.n_max,
                         [&](long long n) { return cl_p(*sys, n, CLFlavor::P, ccaps).sample; });
        t.budget["conjugator_radius"] = static_cast<long long>(k.conjugator_radius);
      } else if (fn == "cl_rel") {
        t = sample_table("cl_rel", config.n_min, config.n_max, [&](long long n) { return rel_sample(n).sample; });
        t.budget["conjugator_radius"] = static_cast<long long>(k.conjugator_radius);
      } else {
        t = function_table(ctx, fn, config.n_max, workers);
        std::erase_if(t.samples, [&](Sample const& s) { return s.n < config.n_min; });
      }
      res.logs.push_back("table " + fn + ": " + std::to_string(t.samples.size()) + " samples");
      res.tables.push_back(std::move(t));
    } catch (Error const& e) {
      throw stage_error("table " + fn, e);
    }
  }

  PairAuditCaps pcaps;
  pcaps.p_radius = k.p_radius;
  pcaps.area = fcaps.area;
  for (auto const& id : config.audits) {
    try {
      if (id == "monotone") {
        res.audits.push_back(audit_monotone(res.tables));
      } else if (id == "scholium-3.4") {
        res.audits.push_back(audit_scholium(*sys, config.n_min, config.n_max, pcaps));
      } else if (id == "half-length") {
        res.audits.push_back(audit_half_length(*sys, config.n_min, config.n_max, pcaps));
      } else if (id == "conjugator") {
        ConjugatorAuditCaps c;
        c.p_radius = k.p_radius;
        c.random_instances = config.conjugator_instances;
        c.seed = config.seed;
        c.construct.g_radius = k.conjugator_radius + 2;
        c.construct.order_cutoff = k.exponent;
        c.construct.area = fcaps.area;
        res.audits.push_back(audit_conjugator(*sys, config.n_min, config.n_max, c));
      } else if (id == "hard-instance") {
        res.audits.push_back(audit_hard_instances(*sys, config.n_min, config.n_max, k.p_radius));
      } else if (id == "cl-containment") {
        AuditReport r;
        r.id = id;
        r.inequality = "CL_P(n) <= CL_P^{GxG}(2n) (pair sets nested); CL_P(n) <= CL_P^{GxG}(n) flagged only";
        r.constants.push_back({"conjugator_radius", std::to_string(k.conjugator_radius), "configured"});
        for (long long n = config.n_min; n <= config.n_max; ++n) {
          auto p = cl_p(*sys, n, CLFlavor::P, ccaps);
          auto const& rel2 = rel_sample(2 * n);
          auto const& rel1 = rel_sample(n);
          AuditSample s;
          s.n = n;
          s.witness = p.sample.witness;
          bool exact = p.sample.exactness == Exactness::Exact && rel2.sample.exactness == Exactness::Exact;
          s.status = !exact ? AuditStatus::Unknown
                            : (p.sample.value <= rel2.sample.value ? AuditStatus::Pass : AuditStatus::Fail);
          s.detail = "CL_P=" + std::to_string(p.sample.value) + " CL_rel(2n)=" + std::to_string(rel2.sample.value) +
                     " CL_rel(n)=" + std::to_string(rel1.sample.value);
          if (p.sample.value > rel1.sample.value) s.detail += " flag: matched-n comparison reversed";
          r.samples.push_back(std::move(s));
        }
        res.audits.push_back(std::move(r));
      } else if (id == "rips") {
        AuditReport r;
        r.id = id;
        r.inequality = "|T| = 4|X| + |R|, lambda < 1/6, killing {a,b} recovers R, null products Dehn-reduce";
        AuditSample s;
        auto const& c = *rips_cert;
        s.status = c.ok() && smoke_failures == 0 ? AuditStatus::Pass : AuditStatus::Fail;
        s.detail = "relators=" + std::to_string(c.relator_count) + "/" + std::to_string(c.expected_count) +
                   " lambda=" + std::to_string(c.lambda.numerator()) + "/" + std::to_string(c.lambda.denominator()) +
                   " retraction=" + (c.retraction ? "ok" : "failed") +
                   " null_product_failures=" + std::to_string(smoke_failures);
        r.samples.push_back(std::move(s));
        res.audits.push_back(std::move(r));
      } else if (id == "dagger") {
        AuditReport r;
        r.id = id;
        r.inequality = "|relators| = |T~| + |S_P|, killing t gives GxG, then killing a factor and {a,b} gives Q";
        AuditSample s;
        s.status = dagger_res->ok() ? AuditStatus::Pass : AuditStatus::Fail;
        s.detail = "relators=" + std::to_string(dagger_res->relator_count) + "/" +
                   std::to_string(dagger_res->expected_count);
        r.samples.push_back(std::move(s));
        res.audits.push_back(std::move(r));
      }
    } catch (ConfigError const&) {
      throw;
    } catch (Error const& e) {
      throw stage_error("audit " + id, e);
    }
  }

  std::size_t failures = 0, exhausted = 0;
  for (auto const& a : res.audits) failures += a.count(AuditStatus::Fail);
  for (auto const& t : res.tables)
    for (auto const& s : t.samples) exhausted += s.exactness == Exactness::BudgetExhausted;
  res.exit_code = failures ? kAuditFailure : (exhausted ? kBudgetExhausted : kOk);

  Json report;
  report["schema"] = "cgt-report/1";
  report["config"] = config_to_json(config);
  report["pipeline"] = pipeline;
  Json tables = Json::array();
  for (auto const& t : res.tables) tables.push_back(table_to_json(t));
  report["tables"] = tables;
  Json audits = Json::array();
  for (auto const& a : res.audits) audits.push_back(audit_to_json(a));
  report["audits"] = audits;
  report["summary"] = {{"audit_failures", failures}, {"budget_exhausted_samples", exhausted},
                       {"exit_code", res.exit_code}};
  res.report = std::move(report);
  return res;
}

}  // namespace cgt
