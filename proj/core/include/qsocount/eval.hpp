#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qsocount/model.hpp"
#include "qsocount/qso.hpp"

namespace qsocount {

// Guards the exhaustive enumerations of the reference evaluator.
struct EvalBudget {
  // Bound on the summed |A|^arity of the second-order binders along any path.
  unsigned max_so_exponent = 24;
  // Bound on |A|^k where k is the number of first-order variables bound along
  // any path (quantitative sums, block quantifiers and nested quantifiers).
  std::uint64_t max_fo_expansion = std::uint64_t{1} << 24;

  // Throws eval.budget unless both bounds are positive and the exponent fits
  // a 62-bit subset mask.
  void validate() const;
};

// Tarskian truth of a first-order formula. Every free variable of `formula`
// must be bound in `assignment`. Throws eval.empty_universe, eval.unbound,
// eval.unknown_relation.
bool fo_eval(const Structure& structure, const Fo& formula, const FoAssignment& assignment);

// Value of a quantitative sentence by exhaustive enumeration of every sum.
// Throws eval.not_sentence, eval.budget, eval.empty_universe, eval.overflow.
std::uint64_t qso_eval(const Structure& structure, const Qso& sentence, const EvalBudget& budget = {});

// Same semantics with explicit first- and second-order assignments for the
// free variables. For a sentence the result does not depend on them.
std::uint64_t qso_eval_with(const Structure& structure, const Qso& formula, const FoAssignment& fo,
                            const SoAssignment& so, const EvalBudget& budget = {});

// |{X : A |= forall ys exists zs (phi(ys,zs) & X(zs))}| by enumerating every X.
std::uint64_t pi2_count(const Structure& structure, const Pi2Spec& spec, const EvalBudget& budget = {});

// Whether X (given as a bitmask over lexicographic tuple ranks) satisfies the
// spec on `structure`.
bool pi2_satisfies(const Structure& structure, const Pi2Spec& spec, std::uint64_t mask);

// A first-order formula compiled against one structure with a fixed order of
// free variables; evaluating it is a plain tree walk over slot indices. The
// structure must outlive the compiled formula.
class CompiledFo {
 public:
  CompiledFo(const Structure& structure, const Fo& formula, const std::vector<std::string>& free_vars);
  ~CompiledFo();
  CompiledFo(CompiledFo&&) noexcept;
  CompiledFo& operator=(CompiledFo&&) noexcept;

  // values[i] is the element bound to free_vars[i].
  bool operator()(std::span<const Element> values) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qsocount
