#include "hfsign/common.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace hfsign {

int enumeration_bound() {
  if (const char* env = std::getenv("HFSIGN_MAX_N")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 8;
}

int profile1_solve_bound() { return 6; }

uint64_t splitmix64(uint64_t state) {
  uint64_t z = state + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t hash_combine(uint64_t h, uint64_t v) {
  return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

uint64_t hash_string(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t Rng::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return splitmix64(state_);
}

int Rng::below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<uint64_t>(n)); }

int Rng::sign() { return (next() & 1) ? 1 : -1; }

std::vector<int> Rng::permutation(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i + 1;
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[below(i + 1)]);
  return p;
}

void parallel_for(int jobs, int n, const std::function<void(int)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  int workers = std::min(jobs, n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) body(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace hfsign
