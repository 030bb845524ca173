#pragma once

#include <json.hpp>

#include "cgt/conjugacy.hpp"
#include "cgt/constructions.hpp"

namespace cgt {

using Json = nlohmann::ordered_json;

// Input errors: bad config, missing files, unparsable presentations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int { kOk = 0, kAuditFailure = 2, kBudgetExhausted = 3, kInputError = 4 };

// Worker count from CGT_WORKERS (default 1; invalid values are input errors).
unsigned worker_count();

struct ExperimentCaps {
  std::size_t radius = 16;             // ball oracle: intermediate word length
  std::size_t moves = 8;               // ball oracle: relator applications
  std::size_t area = 32;               // area search: max relator applications
  std::size_t length_cap = 0;          // area search: 0 = automatic
  std::size_t states = 2000000;        // area search: state budget
  long long exponent = 32;             // order cutoff and exponent scans
  std::size_t p_radius = 6;            // P-ball radius
  std::size_t conjugator_radius = 4;   // conjugator search radius
  std::size_t rips_tails = 16;         // initial Rips tail length
  PairConvention convention = PairConvention::Sum;
};

struct ExperimentConfig {
  std::string base;                      // presentation path
  std::string pipeline = "none";         // none | rips | dagger | hnn
  std::vector<std::string> hnn_subgroup; // words for the hnn pipeline
  std::vector<std::string> a;            // A for the fibre system (none / hnn)
  long long n_min = 1, n_max = 1;
  std::vector<std::string> functions;
  std::vector<std::string> audits;
  std::size_t conjugator_instances = 0;  // random zeta-conjugated pairs
  ExperimentCaps caps;
  std::uint64_t seed = 1;
  std::string output;                    // path prefix; empty: no files
  std::vector<std::string> formats{"json", "csv"};
};

// Relative paths in the config resolve against base_dir. Throws ConfigError.
ExperimentConfig parse_config(Json const& j, std::string const& base_dir = ".");
ExperimentConfig load_config(std::string const& path);
Json config_to_json(ExperimentConfig const& c);

enum class AuditStatus { Pass, Fail, Unknown };
std::string to_string(AuditStatus s);

struct AuditSample {
  long long n = 0;
  AuditStatus status = AuditStatus::Unknown;
  std::string witness;
  std::string detail;
};

struct AuditConstant {
  std::string name;
  std::string value;
  std::string provenance;  // computed | empirical | configured
};

struct AuditReport {
  std::string id;
  std::string inequality;
  std::vector<AuditConstant> constants;
  std::vector<AuditSample> samples;
  std::size_t count(AuditStatus s) const;
};

struct ExperimentResult {
  Json report;
  std::vector<FunctionTable> tables;
  std::vector<AuditReport> audits;
  std::vector<std::string> logs;
  int exit_code = kOk;
};

// Errors carry the stage id in the message.
ExperimentResult run_experiment(ExperimentConfig const& config, unsigned workers = 1);

Json table_to_json(FunctionTable const& t);
FunctionTable table_from_json(Json const& j);
std::string table_to_csv(FunctionTable const& t);
Json audit_to_json(AuditReport const& a);

// Writes <prefix>.json and <prefix>_<table>.csv (repeated names get _2, _3,
// ...). Returns the paths written.
std::vector<std::string> emit(ExperimentResult const& r, std::string const& prefix,
                              std::vector<std::string> const& formats);

// Pair-level audits over the fibre product, exposed for the test suite.
// Upper bound: |(g1,g2)|_P <= (L+1) Area_Q(w) + |w| + n for w = g2^-1 g1.
// Half-length: 2 |(g1,g2)|_P >= |g1|_G + |g2|_G.
struct PairAuditCaps {
  std::size_t p_radius = 6;
  AreaCaps area;
};
AuditReport audit_scholium(FibreSystem const& sys, long long n_min, long long n_max, PairAuditCaps caps = {});
AuditReport audit_half_length(FibreSystem const& sys, long long n_min, long long n_max, PairAuditCaps caps = {});

// Pipeline instances: hard instances for n in range plus random pairs
// (U, zeta^-1 U zeta) with U, zeta random P-words. Each instance is checked
// against brute-force P-conjugacy search.
struct ConjugatorAuditCaps {
  std::size_t p_radius = 6;
  std::size_t random_instances = 0;
  std::size_t word_length = 3;
  std::uint64_t seed = 1;
  ConjugatorCaps construct;
};
AuditReport audit_conjugator(FibreSystem const& sys, long long n_min, long long n_max, ConjugatorAuditCaps caps);

Json certificate_to_json(ConjugatorCertificate const& c, FibreSystem const& sys);
Json rips_to_json(RipsCertificate const& c);

}  // namespace cgt
