#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "faq/factor.hpp"
#include "faq/hypergraph.hpp"
#include "faq/semiring.hpp"

namespace faq {

struct VariableDecl {
  std::string name;
  bool is_free = false;
  std::string aggregate;  // empty for free variables
  std::optional<std::vector<std::string>> domain;  // explicit value list
};

struct FactorDecl {
  std::string name;
  std::vector<VarId> vars;  // column order of the data file
  std::string path;
};

/// An FAQ query: variables in aggregate order (free prefix first), each bound
/// variable with its aggregate, and the factor declarations. Variable ids are
/// positions in `variables`.
struct FAQQuery {
  const SemiringContext* context = nullptr;
  std::vector<VariableDecl> variables;
  std::vector<FactorDecl> factors;

  std::size_t num_vars() const { return variables.size(); }
  std::size_t num_free() const;
  VarSet free_vars() const;
  VarSet product_vars() const;  // bound variables under a product aggregate
  const Aggregate& aggregate_of(VarId v) const;
  std::optional<VarId> find_var(const std::string& name) const;
  std::string var_name(VarId v) const { return variables.at(v).name; }
  std::string format_vars(VarSet s) const;

  /// Hypergraph with one edge per factor declaration (uniform weights), edge
  /// ids equal to declaration indices.
  Hypergraph hypergraph() const;

  /// Checks the structural invariants (free prefix, at least one semiring
  /// aggregate among bound variables when there are any, declared edge
  /// variables, explicit domains under product aggregates, every variable in
  /// an edge or with an explicit domain). Throws UserError.
  void validate() const;
};

/// A permutation of all variables whose first `num_free` entries are the free
/// variables. Variables are eliminated from the back.
struct VariableOrdering {
  std::vector<VarId> order;
  std::size_t num_free = 0;

  std::span<const VarId> bound() const { return std::span<const VarId>(order).subspan(num_free); }
  friend bool operator==(const VariableOrdering&, const VariableOrdering&) = default;
};

/// The query's own aggregate order.
VariableOrdering identity_ordering(const FAQQuery& q);
/// Throws UserError unless `sigma` is a permutation with the free prefix.
void validate_ordering(const FAQQuery& q, const VariableOrdering& sigma);

/// faqw(sigma): the largest fractional edge cover number over the subqueries
/// of the semiring steps (bound variables, then the free variables).
mpq_class faqw_of_ordering(const FAQQuery& q, const VariableOrdering& sigma,
                           ProjectionPolicy policy = ProjectionPolicy::when_joining);
WidthProfile width_profile(const FAQQuery& q, const VariableOrdering& sigma,
                           ProjectionPolicy policy = ProjectionPolicy::when_joining);

/// Per-variable value dictionary. Codes follow the sorted order of values
/// (numeric when every value is an integer), so code order is value order.
class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(std::vector<std::string> values);

  std::size_t size() const { return values_.size(); }
  const std::string& decode(Code c) const { return values_.at(c); }
  std::optional<Code> find(const std::string& value) const;
  const std::vector<std::string>& values() const { return values_; }

 private:
  std::vector<std::string> values_;
  std::unordered_map<std::string, Code> index_;
};

/// Sorts values numerically when all parse as integers, else lexicographically.
std::vector<std::string> sorted_unique_values(std::vector<std::string> values);

/// A query with its loaded data.
struct FAQInstance {
  FAQQuery query;
  std::vector<Dictionary> dictionaries;  // per variable
  std::vector<Factor> factors;           // per factor declaration

  const SemiringContext& context() const { return *query.context; }
  VariableDomain domain(VarId v) const;
};

}  // namespace faq
