#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hfsign/formal.hpp"
#include "hfsign/relations.hpp"

namespace hfsign {

// Closed-form bigon sector: o_alpha times the product of the start profile
// entries before the moving coordinate.
int bigon_sign(const FormalBigon& b);

struct SignTable {
  int n = 0;
  std::string scope;  // "bigons" | "profile1_rectangles" | "all_flows"
  std::string gauge_id;
  std::map<std::string, int8_t> entries;

  int at(const std::string& flow_key) const;  // ScopeMismatch on missing key
  std::string to_json() const;
  static SignTable from_json(const std::string& text);
};

struct GaugeMap {
  int n = 0;
  std::map<std::string, int8_t> u;  // generator key -> ±1
  bool restricted = false;          // value depends only on the permutation

  int at(const FormalGenerator& g) const;
};

GaugeMap constant_gauge(int n, int8_t value);
GaugeMap gauge_from_function(int n, const std::function<int(const FormalGenerator&)>& f);
// u(x) depends only on sigma: per_sigma maps perm_key -> ±1.
GaugeMap restricted_gauge(int n, const std::map<std::string, int8_t>& per_sigma);
GaugeMap random_gauge(int n, uint64_t seed);

// The character sign(sigma) * product(epsilon).
int parity_character(const FormalGenerator& g);

struct SolveResult {
  SignTable table;
  long long dimension = 0;  // solution space dimension before gauge fixing
};

// The GF(2) system on the all-plus profile rectangle sector: degeneration
// pair rows plus all composite-square rows.
GF2System profile1_system(int n);

// Solves the degeneration + composite-square system on the all-plus profile
// rectangle sector and gauge-fixes it on a spanning tree.
SolveResult solve_profile1(int n);

// Solves the full relation system over all flows; the solution space
// dimension must equal n! 2^n - 1.
SolveResult solve_global(int n, bool allow_large = false, int gauge_seed = 0);

// Flows enumerated by a table scope.
std::vector<FormalFlow> scope_flows(int n, const std::string& scope);

// Total deterministic sign evaluator: bigons by formula, rectangles reduced
// by simple flips and edge reversals to an all-plus profile rectangle looked
// up in the solved profile-1 table. `extra` trailing coordinates (used for
// stabilized diagrams) are handled through the same reductions, with the
// permutation required to fix them.
class SignEvaluator {
 public:
  explicit SignEvaluator(int base_n, int extra = 0);
  int power() const { return base_n_ + extra_; }
  int base_power() const { return base_n_; }
  int evaluate(const FormalFlow& f) const;
  const SignTable& profile1_table() const { return *p1_; }

 private:
  int rectangle_sign(const FormalRectangle& r) const;
  int base_n_;
  int extra_;
  std::shared_ptr<const SignTable> p1_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, int> memo_;
};

// Process-wide evaluator cache; the profile-1 solve for a given power runs
// once and is shared by every diagram of that size.
std::shared_ptr<const SignEvaluator> shared_evaluator(int base_n, int extra = 0);

// A sign assignment (possibly partial) as a callable with a declared power.
struct SignFunction {
  int power = 0;
  std::function<int(const FormalFlow&)> fn;
  int operator()(const FormalFlow& f) const { return fn(f); }
};

SignFunction sign_function(std::shared_ptr<const SignEvaluator> ev);
SignFunction sign_function(std::shared_ptr<const SignTable> table);
SignFunction apply_gauge(const SignFunction& s, std::shared_ptr<const GaugeMap> u);
// Deterministic ±1 gauge derived by hashing generator keys with a seed; total
// on generators of any power.
SignFunction seeded_gauge(const SignFunction& s, uint64_t seed);
SignFunction parity_twist(const SignFunction& s);
// Evaluate power-(m-1) flows through a power-m sign function by fixing the
// last coordinate with the given profile entry.
SignFunction restrict_power(const SignFunction& s, int8_t fixed_epsilon);

SignTable apply_gauge(const SignTable& t, const GaugeMap& u);
SignTable parity_twist(const SignTable& t);
// Tabulate a sign function over the flows of a scope.
SignTable materialize(const SignFunction& s, int n, const std::string& scope);

// Gauge equivalence test by spanning-tree propagation; nullopt when the
// tables are not gauge equivalent.
std::optional<GaugeMap> find_gauge(const SignTable& a, const SignTable& b);

struct VerifyReport {
  int n = 0;
  unsigned families = 0;
  bool swapped_roles = false;
  bool sampled = false;
  long long samples = 0;
  uint64_t seed = 0;
  std::map<std::string, long long> checked;  // family -> instances checked

  struct Violation {
    std::string family;
    std::vector<std::string> flow_keys;
    int expected;
    int got;
  };
  std::vector<Violation> violations;
  long long violation_count = 0;  // may exceed violations.size() when capped

  bool ok() const { return violation_count == 0; }
  long long total_checked() const;
  std::string to_json() const;
  std::string to_text() const;
};

// Checks the selected relation families against a sign function, exhaustively
// when samples == 0, otherwise on seeded random instances.
VerifyReport verify(const SignFunction& s, int n, unsigned families,
                    bool swapped_roles = false, long long samples = 0,
                    uint64_t seed = 0, int jobs = 1);

}  // namespace hfsign
