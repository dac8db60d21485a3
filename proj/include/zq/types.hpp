#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace zq {

using Real = double;
using Complex = std::complex<double>;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;

inline constexpr const char* kToolVersion = "0.1.0";

struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegreeCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContainmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic, platform-independent RNG (splitmix64). Test expectations
/// and report determinism must not depend on libstdc++ distribution details.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Complex complex_box(double half_width) {
    double re = uniform(-half_width, half_width);
    double im = uniform(-half_width, half_width);
    return {re, im};
  }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

/// FNV-1a 64-bit hash, used for config hashes and golden symbolic hashes.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string to_hex(std::uint64_t value);

}  // namespace zq
