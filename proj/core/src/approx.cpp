#include "qsocount/approx.hpp"

#include <bit>
#include <cmath>

#include "qsocount/error.hpp"
#include "qsocount/random.hpp"

namespace qsocount {

std::uint64_t sample_size(double epsilon, double delta, double p_lower_bound) {
  double m = std::ceil(3.0 * std::log(2.0 / delta) / (epsilon * epsilon * p_lower_bound));
  if (!(m < static_cast<double>(kMaxSamples))) return kMaxSamples;
  return static_cast<std::uint64_t>(m);
}

void EstimateParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("approx.params", "epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw Error("approx.params", "delta must lie in (0,1)");
  if (!(p_lower_bound > 0.0 && p_lower_bound <= 1.0))
    throw Error("approx.params", "the acceptance lower bound must lie in (0,1]");
  if (sample_size(epsilon, delta, p_lower_bound) >= kMaxSamples)
    throw Error("approx.params", "parameters require more than 2^32 samples");
}

FractionEstimate estimate_fraction(const CountingSampler& sampler, const EstimateParams& params) {
  params.validate();
  if (sampler.domain_size == 0) throw Error("approx.domain", "the domain must be nonempty");
  FractionEstimate out;
  out.samples = sample_size(params.epsilon, params.delta, params.p_lower_bound);
  Rng rng(params.seed);
  for (std::uint64_t k = 0; k < out.samples; ++k)
    if (sampler.accept(rng.below(sampler.domain_size))) ++out.accepted;
  out.p_hat = static_cast<double>(out.accepted) / static_cast<double>(out.samples);
  return out;
}

CountEstimate fpras_rp1(const CountingSampler& sampler, double epsilon, double delta, std::uint64_t seed) {
  auto f = estimate_fraction(sampler, {epsilon, delta, 0.5, seed});
  CountEstimate out;
  out.samples = f.samples;
  out.domain_size = sampler.domain_size;
  out.estimate = f.accepted == 0 ? 0.0
                                 : static_cast<double>(f.accepted) * static_cast<double>(sampler.domain_size) /
                                       static_cast<double>(f.samples);
  return out;
}

bool rp_decide(const CountingSampler& sampler, std::uint64_t seed) {
  return fpras_rp1(sampler, 0.25, 0.25, seed).estimate >= 0.5;
}

CountingSampler machine_from_fp(std::uint64_t fval) {
  if (fval == 0) return {1, [](std::uint64_t) { return false; }, true};
  if (fval > (std::uint64_t{1} << 63)) throw Error("approx.range", "value exceeds 2^63");
  const auto i = std::bit_width(fval - 1);
  return {std::uint64_t{1} << i, [fval](std::uint64_t b) { return b + 1 <= fval; }, true};
}

MrCheck check_mr(const CountingSampler& sampler) {
  if (sampler.domain_size == 0 || sampler.domain_size > kMaxCheckedDomain)
    throw Error("approx.domain", "exhaustive check needs 1 <= N <= 2^24, got N=" + std::to_string(sampler.domain_size));
  MrCheck out;
  out.domain_size = sampler.domain_size;
  for (std::uint64_t i = 0; i < sampler.domain_size; ++i)
    if (sampler.accept(i)) ++out.accepted;
  out.holds = out.accepted == 0 || 2 * out.accepted > out.domain_size;
  return out;
}

namespace {

__extension__ typedef unsigned __int128 Wide;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<Wide>(a) * b % n);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t n) {
  std::uint64_t result = 1 % n;
  base %= n;
  while (exp) {
    if (exp & 1u) result = mulmod(result, base, n);
    base = mulmod(base, base, n);
    exp >>= 1;
  }
  return result;
}

void require_odd(std::uint64_t n) {
  if (n < 3 || n % 2 == 0) throw Error("approx.domain", "n must be odd and at least 3, got " + std::to_string(n));
}

}  // namespace

bool is_strong_liar(std::uint64_t a, std::uint64_t n) {
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

CountingSampler miller_rabin_sampler(std::uint64_t n) {
  require_odd(n);
  return {n - 1, [n](std::uint64_t i) { return !is_strong_liar(i + 1, n); }, true};
}

WitnessCount miller_rabin_witness_count(std::uint64_t n) {
  require_odd(n);
  if (n > kMaxWitnessEnumeration)
    throw Error("approx.domain", "witness enumeration is limited to n <= " + std::to_string(kMaxWitnessEnumeration));
  WitnessCount out{0, miller_rabin_sampler(n)};
  for (std::uint64_t a = 1; a < n; ++a)
    if (!is_strong_liar(a, n)) ++out.witnesses;
  return out;
}

}  // namespace qsocount
