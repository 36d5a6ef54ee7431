#include "faq/query.hpp"

#include <algorithm>
#include <numeric>

#include "faq/error.hpp"

namespace faq {

std::size_t FAQQuery::num_free() const {
  return static_cast<std::size_t>(
      std::count_if(variables.begin(), variables.end(), [](const VariableDecl& v) { return v.is_free; }));
}

VarSet FAQQuery::free_vars() const {
  VarSet s;
  for (VarId v = 0; v < variables.size(); ++v)
    if (variables[v].is_free) s.insert(v);
  return s;
}

VarSet FAQQuery::product_vars() const {
  VarSet s;
  for (VarId v = 0; v < variables.size(); ++v)
    if (!variables[v].is_free && aggregate_of(v).is_product) s.insert(v);
  return s;
}

const Aggregate& FAQQuery::aggregate_of(VarId v) const {
  const auto& decl = variables.at(v);
  if (decl.is_free) throw InternalError("free variable '" + decl.name + "' has no aggregate");
  return context->aggregate(decl.aggregate);
}

std::optional<VarId> FAQQuery::find_var(const std::string& name) const {
  for (VarId v = 0; v < variables.size(); ++v)
    if (variables[v].name == name) return v;
  return std::nullopt;
}

std::string FAQQuery::format_vars(VarSet s) const {
  std::string out = "{";
  bool first = true;
  for (VarId v : s) {
    out += (first ? "" : ",") + variables.at(v).name;
    first = false;
  }
  return out + "}";
}

Hypergraph FAQQuery::hypergraph() const {
  VarSet all;
  for (VarId v = 0; v < variables.size(); ++v) all.insert(v);
  Hypergraph h(all);
  for (const auto& f : factors) h.add_edge(VarSet::of(f.vars), f.name);
  return h;
}

void FAQQuery::validate() const {
  if (context == nullptr) throw UserError("query has no context");
  if (variables.size() > kMaxVariables)
    throw UserError("queries are limited to " + std::to_string(kMaxVariables) + " variables");
  bool seen_bound = false, any_bound = false, any_semiring = false;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const auto& v = variables[i];
    for (std::size_t j = 0; j < i; ++j)
      if (variables[j].name == v.name) throw UserError("duplicate variable '" + v.name + "'");
    if (v.is_free) {
      if (seen_bound) throw UserError("free variable '" + v.name + "' declared after a bound variable");
    } else {
      seen_bound = any_bound = true;
      const auto& agg = context->aggregate(v.aggregate);
      any_semiring |= agg.is_semiring;
      if (agg.is_product && !v.domain)
        throw UserError("variable '" + v.name + "' is under product aggregate '" + agg.name +
                        "' and needs an explicit domain");
    }
    if (v.domain && v.domain->empty()) throw UserError("variable '" + v.name + "' has an empty domain");
  }
  if (any_bound && !any_semiring) throw UserError("query needs at least one semiring aggregate");

  VarSet in_edge;
  for (const auto& f : factors) {
    VarSet s;
    for (VarId v : f.vars) {
      if (v >= variables.size()) throw UserError("factor '" + f.name + "' uses an undeclared variable");
      if (s.contains(v)) throw UserError("factor '" + f.name + "' repeats variable '" + variables[v].name + "'");
      s.insert(v);
    }
    if (s.empty()) throw UserError("factor '" + f.name + "' has no variables");
    in_edge |= s;
  }
  for (VarId v = 0; v < variables.size(); ++v)
    if (!in_edge.contains(v) && !variables[v].domain)
      throw UserError("variable '" + variables[v].name + "' appears in no factor and has no domain");
}

VariableOrdering identity_ordering(const FAQQuery& q) {
  VariableOrdering sigma;
  sigma.order.resize(q.num_vars());
  std::iota(sigma.order.begin(), sigma.order.end(), VarId{0});
  sigma.num_free = q.num_free();
  return sigma;
}

void validate_ordering(const FAQQuery& q, const VariableOrdering& sigma) {
  if (sigma.order.size() != q.num_vars()) throw UserError("ordering must list every variable exactly once");
  VarSet seen;
  for (std::size_t i = 0; i < sigma.order.size(); ++i) {
    VarId v = sigma.order[i];
    if (v >= q.num_vars() || seen.contains(v)) throw UserError("ordering is not a permutation");
    seen.insert(v);
    if (q.variables[v].is_free != (i < sigma.num_free))
      throw UserError("free variables must form the ordering's prefix");
  }
  if (sigma.num_free != q.num_free()) throw UserError("free variables must form the ordering's prefix");
}

WidthProfile width_profile(const FAQQuery& q, const VariableOrdering& sigma, ProjectionPolicy policy) {
  validate_ordering(q, sigma);
  return elimination_width(q.hypergraph(), sigma.order, q.product_vars(), policy);
}

mpq_class faqw_of_ordering(const FAQQuery& q, const VariableOrdering& sigma, ProjectionPolicy policy) {
  return width_profile(q, sigma, policy).width;
}

namespace {

bool is_integer_text(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::vector<std::string> sorted_unique_values(std::vector<std::string> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (std::all_of(values.begin(), values.end(), is_integer_text)) {
    auto num = [](const std::string& s) { return mpz_class(s[0] == '+' ? s.substr(1) : s); };
    std::stable_sort(values.begin(), values.end(),
                     [&](const std::string& a, const std::string& b) { return num(a) < num(b); });
  }
  return values;
}

Dictionary::Dictionary(std::vector<std::string> values) : values_(std::move(values)) {
  for (Code c = 0; c < values_.size(); ++c) index_.emplace(values_[c], c);
}

std::optional<Code> Dictionary::find(const std::string& value) const {
  if (auto it = index_.find(value); it != index_.end()) return it->second;
  return std::nullopt;
}

VariableDomain FAQInstance::domain(VarId v) const {
  auto d = VariableDomain::explicit_range(v, dictionaries.at(v).size());
  if (!query.variables.at(v).domain) d.kind = VariableDomain::Kind::active;
  return d;
}

}  // namespace faq
