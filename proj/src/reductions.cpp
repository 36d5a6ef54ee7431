#include "faq/reductions.hpp"

#include <functional>
#include <map>
#include <set>

#include "faq/error.hpp"

namespace faq {

namespace {

std::vector<std::string> index_values(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

FAQInstance mcm_instance(const std::vector<Matrix>& chain) {
  if (chain.empty()) throw UserError("matrix chain is empty");
  std::vector<std::size_t> dims{chain[0].size()};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Matrix& m = chain[i];
    if (m.empty() || m[0].empty()) throw UserError("matrix " + std::to_string(i + 1) + " is empty");
    if (m.size() != dims.back())
      throw UserError("matrix " + std::to_string(i + 1) + " has " + std::to_string(m.size()) + " rows, expected " +
                      std::to_string(dims.back()));
    for (const auto& row : m)
      if (row.size() != m[0].size()) throw UserError("matrix " + std::to_string(i + 1) + " is ragged");
    dims.push_back(m[0].size());
  }

  const std::size_t n = chain.size();
  FAQInstance inst;
  inst.query.context = &builtin_context("rat-sum-prod");
  auto decl = [&](std::size_t i, bool is_free) {
    inst.query.variables.push_back({"x" + std::to_string(i), is_free, is_free ? "" : "sum", index_values(dims[i])});
  };
  decl(0, true);
  decl(n, true);
  for (std::size_t i = 1; i < n; ++i) decl(i, false);
  // Variable ids: x0 -> 0, xn -> 1, xi -> i + 1 for interior i.
  auto id = [&](std::size_t i) -> VarId { return i == 0 ? 0 : i == n ? 1 : static_cast<VarId>(i + 1); };

  for (std::size_t i = 0; i <= n; ++i) inst.dictionaries.emplace_back();
  for (std::size_t i = 0; i <= n; ++i) inst.dictionaries[id(i)] = Dictionary(index_values(dims[i]));

  const auto& ctx = inst.context();
  for (std::size_t k = 0; k < n; ++k) {
    const std::string name = "A" + std::to_string(k + 1);
    const std::vector<VarId> vars{id(k), id(k + 1)};
    inst.query.factors.push_back({name, vars, name + ".tsv"});
    std::vector<RawRow> rows;
    for (std::size_t r = 0; r < chain[k].size(); ++r)
      for (std::size_t c = 0; c < chain[k][r].size(); ++c)
        rows.push_back({{static_cast<Code>(r), static_cast<Code>(c)}, Value(chain[k][r][c])});
    inst.factors.push_back(Factor::build(vars, std::move(rows), ctx));
  }
  inst.query.validate();
  return inst;
}

Matrix decode_matrix(const FAQInstance& instance, const Factor& output) {
  const std::size_t rows = instance.dictionaries.at(0).size();
  const std::size_t cols = instance.dictionaries.at(1).size();
  Matrix m(rows, std::vector<mpq_class>(cols, 0));
  if (output.edge() != VarSet{0, 1}) throw InternalError("matrix output must range over both endpoints");
  for (std::size_t r = 0; r < output.size(); ++r) m[output.key(r)[0]][output.key(r)[1]] = output.value(r).rational();
  return m;
}

Matrix multiply_chain(const std::vector<Matrix>& chain) {
  Matrix acc = chain.at(0);
  for (std::size_t k = 1; k < chain.size(); ++k) {
    const Matrix& b = chain[k];
    Matrix next(acc.size(), std::vector<mpq_class>(b.at(0).size(), 0));
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        for (std::size_t l = 0; l < b[j].size(); ++l) next[i][l] += acc[i][j] * b[j][l];
    acc = std::move(next);
  }
  for (auto& row : acc)
    for (auto& x : row) x.canonicalize();
  return acc;
}

FAQInstance map_instance(const std::vector<std::size_t>& domain_sizes, std::size_t num_free,
                         const std::vector<MapFactor>& factors) {
  FAQInstance inst;
  inst.query.context = &builtin_context("max-prod");
  for (std::size_t v = 0; v < domain_sizes.size(); ++v) {
    const bool is_free = v < num_free;
    inst.query.variables.push_back(
        {"x" + std::to_string(v), is_free, is_free ? "" : "max", index_values(domain_sizes[v])});
    inst.dictionaries.emplace_back(index_values(domain_sizes[v]));
  }
  const auto& ctx = inst.context();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::string name = "P" + std::to_string(i + 1);
    inst.query.factors.push_back({name, factors[i].vars, name + ".tsv"});
    std::vector<RawRow> rows;
    for (const auto& [key, val] : factors[i].rows) rows.push_back({key, Value(val)});
    inst.factors.push_back(Factor::build(factors[i].vars, std::move(rows), ctx));
  }
  inst.query.validate();
  return inst;
}

std::vector<std::pair<std::vector<Code>, mpq_class>> map_native(const std::vector<std::size_t>& domain_sizes,
                                                                std::size_t num_free,
                                                                const std::vector<MapFactor>& factors) {
  const std::size_t n = domain_sizes.size();
  std::vector<std::map<std::vector<Code>, mpq_class>> tables(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i)
    for (const auto& [key, val] : factors[i].rows) {
      mpq_class q = val;
      q.canonicalize();
      tables[i][key] = q;
    }

  std::map<std::vector<Code>, mpq_class> best;
  std::vector<Code> x(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    if (v == n) {
      mpq_class p = 1;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        std::vector<Code> key;
        for (VarId u : factors[i].vars) key.push_back(x[u]);
        auto it = tables[i].find(key);
        p *= it == tables[i].end() ? mpq_class(0) : it->second;
      }
      if (p == 0) return;
      std::vector<Code> free(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(num_free));
      auto [it, fresh] = best.emplace(free, p);
      if (!fresh && p > it->second) it->second = p;
      return;
    }
    for (Code c = 0; c < domain_sizes[v]; ++c) {
      x[v] = c;
      rec(v + 1);
    }
  };
  rec(0);
  return {best.begin(), best.end()};
}

FAQInstance qcq_count_instance(std::size_t num_free, const std::string& quantifiers,
                               const std::vector<BoolRelation>& relations) {
  FAQInstance inst;
  inst.query.context = &builtin_context("nat-sum-prod");
  const std::vector<std::string> bits{"0", "1"};
  for (std::size_t v = 0; v < num_free; ++v) {
    inst.query.variables.push_back({"x" + std::to_string(v + 1), false, "sum", bits});
    inst.dictionaries.emplace_back(bits);
  }
  for (std::size_t k = 0; k < quantifiers.size(); ++k) {
    const char q = quantifiers[k];
    if (q != 'E' && q != 'A') throw UserError("quantifiers are 'E' or 'A'");
    inst.query.variables.push_back({"y" + std::to_string(k + 1), false, q == 'E' ? "max" : "prod", bits});
    inst.dictionaries.emplace_back(bits);
  }
  const auto& ctx = inst.context();
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const std::string name = "R" + std::to_string(i + 1);
    inst.query.factors.push_back({name, relations[i].vars, name + ".tsv"});
    std::vector<RawRow> rows;
    for (const auto& t : relations[i].tuples) rows.push_back({t, ctx.one()});
    inst.factors.push_back(Factor::build(relations[i].vars, std::move(rows), ctx));
  }
  inst.query.validate();
  return inst;
}

mpz_class qcq_count_native(std::size_t num_free, const std::string& quantifiers,
                           const std::vector<BoolRelation>& relations) {
  const std::size_t n = num_free + quantifiers.size();
  std::vector<std::set<std::vector<Code>>> tables;
  for (const auto& r : relations) tables.emplace_back(r.tuples.begin(), r.tuples.end());
  std::vector<Code> x(n, 0);
  auto holds = [&] {
    for (std::size_t i = 0; i < relations.size(); ++i) {
      std::vector<Code> key;
      for (VarId u : relations[i].vars) key.push_back(x[u]);
      if (!tables[i].count(key)) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> sat = [&](std::size_t k) -> bool {
    if (k == quantifiers.size()) return holds();
    const bool exists = quantifiers[k] == 'E';
    for (Code c = 0; c < 2; ++c) {
      x[num_free + k] = c;
      if (sat(k + 1) == exists) return exists;
    }
    return !exists;
  };
  mpz_class count = 0;
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << num_free); ++a) {
    for (std::size_t v = 0; v < num_free; ++v) x[v] = static_cast<Code>((a >> v) & 1U);
    if (sat(0)) ++count;
  }
  return count;
}

}  // namespace faq
