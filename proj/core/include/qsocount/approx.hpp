#pragma once

#include <cstdint>
#include <functional>

namespace qsocount {

// A counter over the index domain [0, N): acc = #{i : accept(i)}. With the
// MR promise, acc is either 0 or more than N/2.
struct CountingSampler {
  std::uint64_t domain_size = 1;
  std::function<bool(std::uint64_t)> accept;
  bool promised_mr = false;
};

struct EstimateParams {
  double epsilon = 0.25;
  double delta = 0.25;
  double p_lower_bound = 0.5;
  std::uint64_t seed = 0;

  // Throws approx.params unless epsilon, delta in (0,1) and p_lower_bound in
  // (0,1], and the resulting sample size stays below kMaxSamples.
  void validate() const;
};

inline constexpr std::uint64_t kMaxSamples = std::uint64_t{1} << 32;

// m = ceil(3 ln(2/delta) / (epsilon^2 p_lower_bound))
std::uint64_t sample_size(double epsilon, double delta, double p_lower_bound);

struct FractionEstimate {
  double p_hat = 0.0;
  std::uint64_t accepted = 0;
  std::uint64_t samples = 0;
};

// Draws m uniform indices with replacement and returns the accepted fraction.
FractionEstimate estimate_fraction(const CountingSampler& sampler, const EstimateParams& params);

struct CountEstimate {
  double estimate = 0.0;  // p_hat * N
  std::uint64_t samples = 0;
  std::uint64_t domain_size = 0;
};

// estimate_fraction with p_lower_bound = 1/2, scaled by N. Exactly 0 whenever
// acc = 0.
CountEstimate fpras_rp1(const CountingSampler& sampler, double epsilon, double delta, std::uint64_t seed);

// fpras_rp1 with epsilon = delta = 1/4; yes iff the estimate is at least 1/2.
bool rp_decide(const CountingSampler& sampler, std::uint64_t seed);

// N = 2^i with fval in (2^(i-1), 2^i], accept(b) iff b + 1 <= fval; fval = 0
// gives N = 1 with nothing accepted. Throws approx.range above 2^63.
CountingSampler machine_from_fp(std::uint64_t fval);

inline constexpr std::uint64_t kMaxCheckedDomain = std::uint64_t{1} << 24;

struct MrCheck {
  bool holds = false;
  std::uint64_t accepted = 0;
  std::uint64_t domain_size = 0;
};

// Exhaustive. Throws approx.domain when N > kMaxCheckedDomain.
MrCheck check_mr(const CountingSampler& sampler);

// Strong-liar test of base a for odd n >= 3.
bool is_strong_liar(std::uint64_t a, std::uint64_t n);

// N = n - 1, accept(i) iff i + 1 is a compositeness witness. Throws
// approx.domain for even n or n < 3.
CountingSampler miller_rabin_sampler(std::uint64_t n);

inline constexpr std::uint64_t kMaxWitnessEnumeration = 1000000;

struct WitnessCount {
  std::uint64_t witnesses = 0;
  CountingSampler sampler;
};

// Throws approx.domain for even n, n < 3 or n > kMaxWitnessEnumeration.
WitnessCount miller_rabin_witness_count(std::uint64_t n);

}  // namespace qsocount
