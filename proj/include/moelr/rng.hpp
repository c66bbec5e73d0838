#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace moelr {

// Seeded RNG with pinned, platform-independent mappings. The exact formulas
// are part of the reproducibility contract:
//   unit():     (engine() >> 11) * 2^-53            -> [0, 1)
//   below(n):   engine() % n
//   shuffle():  Fisher-Yates down-sweep, j = below(i + 1)
// std::uniform_* distributions are implementation-defined and are not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace moelr
