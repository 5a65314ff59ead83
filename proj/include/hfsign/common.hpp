#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hfsign {

// Enumeration bound for formal objects; HFSIGN_MAX_N overrides the default of 8.
int enumeration_bound();

// Largest power for which the profile-1 rectangle system is solved (default 6).
int profile1_solve_bound();

uint64_t splitmix64(uint64_t state);
uint64_t hash_combine(uint64_t h, uint64_t v);
uint64_t hash_string(const std::string& s);

// Deterministic seeded generator used for all sampling.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  uint64_t next();
  int below(int n);  // uniform in [0, n)
  int sign();        // ±1
  std::vector<int> permutation(int n);  // 1-based images
 private:
  uint64_t state_;
};

// Static partition of [0, n) over at most `jobs` worker threads.
void parallel_for(int jobs, int n, const std::function<void(int)>& body);

}  // namespace hfsign
