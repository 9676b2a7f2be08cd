#include "qsocount/eval.hpp"

#include <algorithm>

#include "qsocount/error.hpp"

namespace qsocount {

namespace {

using Slot = std::uint32_t;

// First-order formulas compile to a node arena. Every binder gets its own
// slot in a flat environment of element values.
struct FoProgram {
  enum class Op : std::uint8_t { True, False, Eq, Atom, Not, Or, Exists };
  struct Node {
    Node(Op o, std::uint32_t l = 0, std::uint32_t r = 0) : op(o), lhs(l), rhs(r) {}
    Op op = Op::True;
    std::uint32_t lhs = 0;
    std::uint32_t rhs = 0;
    Slot slot = 0;
    const Relation* relation = nullptr;
    std::vector<Slot> args;
  };
  std::vector<Node> nodes;
};

bool eval_node(const FoProgram& p, std::uint32_t index, std::vector<Element>& env, std::size_t n) {
  const auto& node = p.nodes[index];
  switch (node.op) {
    case FoProgram::Op::True:
      return true;
    case FoProgram::Op::False:
      return false;
    case FoProgram::Op::Eq:
      return env[node.lhs] == env[node.rhs];
    case FoProgram::Op::Atom: {
      if (node.relation->has_dense_index()) {
        std::uint64_t rank = 0;
        for (Slot s : node.args) rank = rank * n + env[s];
        return node.relation->contains_rank(rank);
      }
      Tuple t;
      t.reserve(node.args.size());
      for (Slot s : node.args) t.push_back(env[s]);
      return node.relation->contains(t);
    }
    case FoProgram::Op::Not:
      return !eval_node(p, node.lhs, env, n);
    case FoProgram::Op::Or:
      return eval_node(p, node.lhs, env, n) || eval_node(p, node.rhs, env, n);
    case FoProgram::Op::Exists:
      for (std::size_t e = 0; e < n; ++e) {
        env[node.slot] = static_cast<Element>(e);
        if (eval_node(p, node.lhs, env, n)) return true;
      }
      return false;
  }
  return false;
}

unsigned quantifier_depth(const Fo& f) {
  using namespace fo_node;
  return std::visit(Overloaded{
                        [](const Not& x) { return quantifier_depth(x.body); },
                        [](const Or& x) { return std::max(quantifier_depth(x.lhs), quantifier_depth(x.rhs)); },
                        [](const And& x) { return std::max(quantifier_depth(x.lhs), quantifier_depth(x.rhs)); },
                        [](const Implies& x) {
                          return std::max(quantifier_depth(x.lhs), quantifier_depth(x.rhs));
                        },
                        [](const Exists& x) { return 1 + quantifier_depth(x.body); },
                        [](const Forall& x) { return 1 + quantifier_depth(x.body); },
                        [](const auto&) { return 0u; },
                    },
                    f->node);
}

class FoCompiler {
 public:
  FoCompiler(const Structure& structure, FoProgram& program, Slot& slot_count)
      : structure_(structure), program_(program), slot_count_(slot_count) {}

  void bind(const std::string& name, Slot slot) { scope_.emplace_back(name, slot); }
  void unbind(std::size_t count) { scope_.resize(scope_.size() - count); }

  Slot lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return it->second;
    throw Error("eval.unbound", "variable '" + name + "' is not bound");
  }

  std::uint32_t compile(const Fo& formula) { return emit(lower(formula)); }

 private:
  std::uint32_t push(FoProgram::Node node) {
    program_.nodes.push_back(std::move(node));
    return static_cast<std::uint32_t>(program_.nodes.size() - 1);
  }

  std::uint32_t emit(const Fo& f) {
    using namespace fo_node;
    using Op = FoProgram::Op;
    return std::visit(
        Overloaded{
            [&](const Top&) { return push({Op::True}); },
            [&](const Bottom&) { return push({Op::False}); },
            [&](const Eq& n) { return push({Op::Eq, lookup(n.lhs), lookup(n.rhs)}); },
            [&](const Atom& n) {
              auto index = structure_.vocabulary().index_of(n.relation);
              if (!index) throw Error("eval.unknown_relation", "unknown relation '" + n.relation + "'");
              const Relation& rel = structure_.relation(*index);
              if (rel.arity() != n.args.size())
                throw Error("eval.unknown_relation", "relation '" + n.relation + "' has arity " +
                                                         std::to_string(rel.arity()));
              FoProgram::Node node{Op::Atom};
              node.relation = &rel;
              for (const auto& a : n.args) node.args.push_back(lookup(a));
              return push(std::move(node));
            },
            [&](const Not& n) {
              auto body = emit(n.body);
              return push({Op::Not, body});
            },
            [&](const Or& n) {
              auto lhs = emit(n.lhs);
              auto rhs = emit(n.rhs);
              return push({Op::Or, lhs, rhs});
            },
            [&](const Exists& n) {
              Slot slot = slot_count_++;
              bind(n.var, slot);
              auto body = emit(n.body);
              unbind(1);
              FoProgram::Node node{Op::Exists, body};
              node.slot = slot;
              return push(std::move(node));
            },
            [&](const auto&) -> std::uint32_t { throw Error("eval.internal", "sugar survived lowering"); },
        },
        f->node);
  }

  const Structure& structure_;
  FoProgram& program_;
  Slot& slot_count_;
  std::vector<std::pair<std::string, Slot>> scope_;
};

void require_nonempty(const Structure& s) {
  if (s.universe_size() == 0)
    throw Error("eval.empty_universe", "logical operations require a nonempty universe");
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("eval.overflow", "value exceeds 64 bits");
  return r;
}

// ---- quantitative formulas ----

struct SoRef {
  Slot slot = 0;
  bool positive = true;
  std::vector<Slot> args;
};

struct CompiledEntry {
  bool second_order = false;
  std::uint32_t fo_node = 0;
  SoRef literal;
};

struct CompiledBase {
  std::vector<Slot> exists_slots;
  std::vector<Slot> forall_slots;
  std::vector<std::array<CompiledEntry, 3>> clauses;
};

struct QNode {
  enum class Kind : std::uint8_t { Base, Const, Plus, SumFo, SumSo } kind = Kind::Const;
  std::uint64_t value = 0;
  std::uint32_t lhs = 0;
  std::uint32_t rhs = 0;
  Slot slot = 0;
  unsigned bits = 0;  // |A|^arity for SumSo
  std::uint32_t base = 0;
};

class QsoProgram {
 public:
  QsoProgram(const Structure& structure, const Qso& formula, const FoAssignment& fo_assignment,
             const SoAssignment& so_assignment, const EvalBudget& budget)
      : structure_(structure),
        n_(structure.universe_size()),
        budget_(budget),
        compiler_(structure, fo_program_, fo_slots_) {
    for (const auto& [name, value] : fo_assignment) {
      if (value >= n_) throw Error("eval.range", "assignment of '" + name + "' is outside the universe");
      Slot s = fo_slots_++;
      compiler_.bind(name, s);
      fo_initial_.emplace_back(s, value);
    }
    for (const auto& [name, value] : so_assignment) {
      auto cells = checked_power(n_, value.arity, 62);
      if (!cells) throw Error("eval.budget", "second-order assignment of '" + name + "' is too large");
      std::uint64_t mask = 0;
      for (const auto& t : value.tuples) {
        if (t.size() != value.arity) throw Error("eval.range", "tuple arity mismatch in '" + name + "'");
        for (Element e : t)
          if (e >= n_) throw Error("eval.range", "assignment of '" + name + "' is outside the universe");
        mask |= std::uint64_t{1} << tuple_rank(t, n_);
      }
      Slot s = so_slots_++;
      so_scope_.push_back({name, s, value.arity});
      so_initial_.emplace_back(s, mask);
    }
    root_ = compile(formula, 0, static_cast<unsigned>(fo_assignment.size()));
  }

  std::uint64_t run() {
    std::vector<Element> fo_env(fo_slots_, 0);
    std::vector<std::uint64_t> so_env(so_slots_, 0);
    for (auto [s, v] : fo_initial_) fo_env[s] = v;
    for (auto [s, m] : so_initial_) so_env[s] = m;
    return eval(root_, fo_env, so_env);
  }

 private:
  struct SoBinding {
    std::string name;
    Slot slot;
    unsigned arity;
  };

  void check_fo_budget(unsigned fo_vars) const {
    if (!checked_power(n_, fo_vars, budget_.max_fo_expansion))
      throw Error("eval.budget", "first-order expansion " + std::to_string(n_) + "^" + std::to_string(fo_vars) +
                                     " exceeds budget " + std::to_string(budget_.max_fo_expansion));
  }

  std::uint32_t push(QNode node) {
    nodes_.push_back(node);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t compile(const Qso& f, unsigned so_exponent, unsigned fo_vars) {
    using namespace qso_node;
    return std::visit(
        Overloaded{
            [&](const Const& n) { return push({QNode::Kind::Const, n.value}); },
            [&](const Plus& n) {
              auto lhs = compile(n.lhs, so_exponent, fo_vars);
              auto rhs = compile(n.rhs, so_exponent, fo_vars);
              QNode node{QNode::Kind::Plus};
              node.lhs = lhs;
              node.rhs = rhs;
              return push(node);
            },
            [&](const SumFo& n) {
              check_fo_budget(fo_vars + 1);
              Slot slot = fo_slots_++;
              compiler_.bind(n.var, slot);
              auto body = compile(n.body, so_exponent, fo_vars + 1);
              compiler_.unbind(1);
              QNode node{QNode::Kind::SumFo};
              node.lhs = body;
              node.slot = slot;
              return push(node);
            },
            [&](const SumSo& n) {
              auto cells = checked_power(n_, n.arity, 1u << 20);
              std::uint64_t total = so_exponent + (cells ? *cells : (1u << 20));
              if (total > budget_.max_so_exponent)
                throw Error("eval.budget", "second-order exponent " + std::to_string(total) + " at '" + n.var +
                                               "' exceeds budget " + std::to_string(budget_.max_so_exponent));
              Slot slot = so_slots_++;
              so_scope_.push_back({n.var, slot, n.arity});
              auto body = compile(n.body, static_cast<unsigned>(total), fo_vars);
              so_scope_.pop_back();
              QNode node{QNode::Kind::SumSo};
              node.lhs = body;
              node.slot = slot;
              node.bits = static_cast<unsigned>(*cells);
              return push(node);
            },
            [&](const Base& n) {
              const auto& b = n.formula;
              CompiledBase cb;
              unsigned local = static_cast<unsigned>(b.exists_vars.size() + b.forall_vars.size());
              unsigned deepest = 0;
              for (const auto& c : b.clauses)
                for (const auto& part : c.parts)
                  if (const auto* fo = std::get_if<Fo>(&part)) deepest = std::max(deepest, quantifier_depth(*fo));
              check_fo_budget(fo_vars + local + deepest);
              for (const auto& v : b.exists_vars) {
                cb.exists_slots.push_back(fo_slots_++);
                compiler_.bind(v, cb.exists_slots.back());
              }
              for (const auto& v : b.forall_vars) {
                cb.forall_slots.push_back(fo_slots_++);
                compiler_.bind(v, cb.forall_slots.back());
              }
              for (const auto& c : b.clauses) {
                std::array<CompiledEntry, 3> entries;
                for (std::size_t k = 0; k < 3; ++k) {
                  if (const auto* lit = std::get_if<SoLiteral>(&c.parts[k])) {
                    entries[k].second_order = true;
                    entries[k].literal = resolve(*lit);
                  } else {
                    entries[k].fo_node = compiler_.compile(std::get<Fo>(c.parts[k]));
                  }
                }
                cb.clauses.push_back(std::move(entries));
              }
              compiler_.unbind(local);
              bases_.push_back(std::move(cb));
              QNode node{QNode::Kind::Base};
              node.base = static_cast<std::uint32_t>(bases_.size() - 1);
              return push(node);
            },
        },
        f->node);
  }

  SoRef resolve(const SoLiteral& lit) {
    for (auto it = so_scope_.rbegin(); it != so_scope_.rend(); ++it) {
      if (it->name != lit.var) continue;
      if (it->arity != lit.args.size())
        throw Error("eval.arity", "second-order variable '" + lit.var + "' applied to wrong number of arguments");
      SoRef ref{it->slot, lit.positive, {}};
      for (const auto& a : lit.args) ref.args.push_back(compiler_.lookup(a));
      return ref;
    }
    throw Error("eval.unbound", "second-order variable '" + lit.var + "' is not bound");
  }

  bool clause_holds(const std::array<CompiledEntry, 3>& clause, std::vector<Element>& fo_env,
                    const std::vector<std::uint64_t>& so_env) const {
    for (const auto& e : clause) {
      if (e.second_order) {
        std::uint64_t rank = 0;
        for (Slot s : e.literal.args) rank = rank * n_ + fo_env[s];
        bool member = (so_env[e.literal.slot] >> rank) & 1u;
        if (member == e.literal.positive) return true;
      } else if (eval_node(fo_program_, e.fo_node, fo_env, n_)) {
        return true;
      }
    }
    return false;
  }

  bool forall_level(const CompiledBase& b, std::size_t i, std::vector<Element>& fo_env,
                    const std::vector<std::uint64_t>& so_env) const {
    if (i == b.forall_slots.size()) {
      for (const auto& c : b.clauses)
        if (!clause_holds(c, fo_env, so_env)) return false;
      return true;
    }
    for (std::size_t e = 0; e < n_; ++e) {
      fo_env[b.forall_slots[i]] = static_cast<Element>(e);
      if (!forall_level(b, i + 1, fo_env, so_env)) return false;
    }
    return true;
  }

  bool exists_level(const CompiledBase& b, std::size_t i, std::vector<Element>& fo_env,
                    const std::vector<std::uint64_t>& so_env) const {
    if (i == b.exists_slots.size()) return forall_level(b, 0, fo_env, so_env);
    for (std::size_t e = 0; e < n_; ++e) {
      fo_env[b.exists_slots[i]] = static_cast<Element>(e);
      if (exists_level(b, i + 1, fo_env, so_env)) return true;
    }
    return false;
  }

  std::uint64_t eval(std::uint32_t index, std::vector<Element>& fo_env, std::vector<std::uint64_t>& so_env) const {
    const QNode& node = nodes_[index];
    switch (node.kind) {
      case QNode::Kind::Const:
        return node.value;
      case QNode::Kind::Plus:
        return checked_add(eval(node.lhs, fo_env, so_env), eval(node.rhs, fo_env, so_env));
      case QNode::Kind::SumFo: {
        std::uint64_t total = 0;
        for (std::size_t e = 0; e < n_; ++e) {
          fo_env[node.slot] = static_cast<Element>(e);
          total = checked_add(total, eval(node.lhs, fo_env, so_env));
        }
        return total;
      }
      case QNode::Kind::SumSo: {
        // Binary counter over lexicographically ordered tuples.
        std::uint64_t total = 0;
        const std::uint64_t limit = std::uint64_t{1} << node.bits;
        for (std::uint64_t mask = 0; mask < limit; ++mask) {
          so_env[node.slot] = mask;
          total = checked_add(total, eval(node.lhs, fo_env, so_env));
        }
        return total;
      }
      case QNode::Kind::Base:
        return exists_level(bases_[node.base], 0, fo_env, so_env) ? 1 : 0;
    }
    return 0;
  }

  const Structure& structure_;
  std::size_t n_;
  EvalBudget budget_;
  FoProgram fo_program_;
  Slot fo_slots_ = 0;
  Slot so_slots_ = 0;
  FoCompiler compiler_;
  std::vector<SoBinding> so_scope_;
  std::vector<std::pair<Slot, Element>> fo_initial_;
  std::vector<std::pair<Slot, std::uint64_t>> so_initial_;
  std::vector<QNode> nodes_;
  std::vector<CompiledBase> bases_;
  std::uint32_t root_ = 0;
};

}  // namespace

void EvalBudget::validate() const {
  if (max_so_exponent == 0 || max_so_exponent > 62)
    throw Error("eval.budget", "max_so_exponent must be in 1..62");
  if (max_fo_expansion == 0) throw Error("eval.budget", "max_fo_expansion must be positive");
}

struct CompiledFo::Impl {
  const Structure* structure = nullptr;
  FoProgram program;
  Slot slots = 0;
  std::size_t free_count = 0;
  std::uint32_t root = 0;
};

CompiledFo::CompiledFo(const Structure& structure, const Fo& formula, const std::vector<std::string>& free_vars)
    : impl_(std::make_unique<Impl>()) {
  require_nonempty(structure);
  impl_->structure = &structure;
  FoCompiler compiler(structure, impl_->program, impl_->slots);
  for (const auto& v : free_vars) compiler.bind(v, impl_->slots++);
  impl_->free_count = free_vars.size();
  impl_->root = compiler.compile(formula);
}

CompiledFo::~CompiledFo() = default;
CompiledFo::CompiledFo(CompiledFo&&) noexcept = default;
CompiledFo& CompiledFo::operator=(CompiledFo&&) noexcept = default;

bool CompiledFo::operator()(std::span<const Element> values) const {
  std::vector<Element> env(impl_->slots, 0);
  std::copy_n(values.begin(), std::min(values.size(), impl_->free_count), env.begin());
  return eval_node(impl_->program, impl_->root, env, impl_->structure->universe_size());
}

bool fo_eval(const Structure& structure, const Fo& formula, const FoAssignment& assignment) {
  require_nonempty(structure);
  std::vector<std::string> names;
  std::vector<Element> values;
  for (const auto& [name, value] : assignment) {
    if (value >= structure.universe_size())
      throw Error("eval.range", "assignment of '" + name + "' is outside the universe");
    names.push_back(name);
    values.push_back(value);
  }
  CompiledFo compiled(structure, formula, names);
  return compiled(values);
}

std::uint64_t qso_eval(const Structure& structure, const Qso& sentence, const EvalBudget& budget) {
  auto check = check_sentence(sentence);
  if (!check.ok()) throw Error("eval.not_sentence", "formula has free variables");
  return qso_eval_with(structure, sentence, {}, {}, budget);
}

std::uint64_t qso_eval_with(const Structure& structure, const Qso& formula, const FoAssignment& fo,
                            const SoAssignment& so, const EvalBudget& budget) {
  budget.validate();
  require_nonempty(structure);
  QsoProgram program(structure, formula, fo, so, budget);
  return program.run();
}

namespace {

struct Pi2Program {
  Pi2Program(const Structure& structure, const Pi2Spec& spec)
      : n(structure.universe_size()), forall(spec.forall_vars.size()), exists(spec.exists_vars.size()) {
    std::vector<std::string> order = spec.forall_vars;
    order.insert(order.end(), spec.exists_vars.begin(), spec.exists_vars.end());
    phi = std::make_unique<CompiledFo>(structure, spec.fo_part, order);
  }

  // forall ys exists zs (phi(ys, zs) & X(zs)), odometer over both blocks.
  bool satisfied(std::uint64_t mask) const {
    std::vector<Element> values(forall + exists, 0);
    while (true) {
      bool witnessed = false;
      std::fill(values.begin() + static_cast<std::ptrdiff_t>(forall), values.end(), 0);
      while (true) {
        std::uint64_t rank = 0;
        for (std::size_t i = forall; i < values.size(); ++i) rank = rank * n + values[i];
        if (((mask >> rank) & 1u) && (*phi)(values)) {
          witnessed = true;
          break;
        }
        if (!step(values, forall, values.size())) break;
      }
      if (!witnessed) return false;
      if (!step(values, 0, forall)) return true;
    }
  }

  bool step(std::vector<Element>& values, std::size_t from, std::size_t to) const {
    for (std::size_t i = to; i-- > from;) {
      if (++values[i] < n) return true;
      values[i] = 0;
    }
    return false;
  }

  std::size_t n;
  std::size_t forall;
  std::size_t exists;
  std::unique_ptr<CompiledFo> phi;
};

}  // namespace

bool pi2_satisfies(const Structure& structure, const Pi2Spec& spec, std::uint64_t mask) {
  validate_pi2(spec);
  require_nonempty(structure);
  return Pi2Program(structure, spec).satisfied(mask);
}

std::uint64_t pi2_count(const Structure& structure, const Pi2Spec& spec, const EvalBudget& budget) {
  budget.validate();
  validate_pi2(spec);
  require_nonempty(structure);
  auto cells = checked_power(structure.universe_size(), spec.so_var.arity, budget.max_so_exponent);
  if (!cells)
    throw Error("eval.budget", "|A|^arity(" + spec.so_var.name + ") exceeds budget " +
                                   std::to_string(budget.max_so_exponent));
  auto fo_vars = spec.forall_vars.size() + spec.exists_vars.size() + quantifier_depth(spec.fo_part);
  if (!checked_power(structure.universe_size(), fo_vars, budget.max_fo_expansion))
    throw Error("eval.budget", "first-order expansion exceeds budget");
  Pi2Program program(structure, spec);
  std::uint64_t count = 0;
  const std::uint64_t limit = std::uint64_t{1} << *cells;
  for (std::uint64_t mask = 0; mask < limit; ++mask)
    if (program.satisfied(mask)) ++count;
  return count;
}

}  // namespace qsocount
