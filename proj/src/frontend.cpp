#include "faq/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "faq/error.hpp"

namespace faq {

namespace {

// ---------------------------------------------------------------- lexer

struct Token {
  enum class Kind { word, string, punct, end };
  Kind kind = Kind::end;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool is_punct(char c) { return c == ';' || c == ',' || c == '(' || c == ')' || c == '{' || c == '}'; }

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (is_punct(c)) {
      out.push_back({Token::Kind::punct, std::string(1, c), line, col});
      advance(1);
    } else if (c == '"') {
      Token t{Token::Kind::string, "", line, col};
      advance(1);
      while (true) {
        if (i >= src.size() || src[i] == '\n') throw ParseError(t.line, t.column, "unterminated string");
        if (src[i] == '"') break;
        if (src[i] == '\\' && i + 1 < src.size()) advance(1);
        t.text += src[i];
        advance(1);
      }
      advance(1);
      out.push_back(std::move(t));
    } else {
      Token t{Token::Kind::word, "", line, col};
      while (i < src.size() && !std::isspace(static_cast<unsigned char>(src[i])) && !is_punct(src[i]) &&
             src[i] != '"' && src[i] != '#')
        t.text += src[i], advance(1);
      out.push_back(std::move(t));
    }
  }
  out.push_back({Token::Kind::end, "", line, col});
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// ---------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  FAQQuery parse() {
    while (peek().kind != Token::Kind::end) statement();
    if (q_.context == nullptr) throw ParseError(peek().line, peek().column, "missing context declaration");
    try {
      q_.validate();
    } catch (const ParseError&) {
      throw;
    } catch (const UserError& e) {
      throw ParseError(peek().line, peek().column, e.what());
    }
    return std::move(q_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& what) { throw ParseError(t.line, t.column, what); }

  void expect(const char* punct) {
    const Token& t = next();
    if (t.kind != Token::Kind::punct || t.text != punct)
      fail(t, std::string("expected '") + punct + "'" + (t.kind == Token::Kind::end ? " before end of input" : ""));
  }

  bool accept(const char* punct) {
    if (peek().kind == Token::Kind::punct && peek().text == punct) {
      ++pos_;
      return true;
    }
    return false;
  }

  const Token& word(const char* what) {
    const Token& t = next();
    if (t.kind != Token::Kind::word) fail(t, std::string("expected ") + what);
    return t;
  }

  const Token& identifier(const char* what) {
    const Token& t = word(what);
    if (!is_identifier(t.text)) fail(t, "'" + t.text + "' is not a valid " + what);
    return t;
  }

  void statement() {
    const Token& kw = word("a statement keyword");
    if (kw.text == "context") {
      if (q_.context != nullptr) fail(kw, "context declared twice");
      const Token& name = word("context name");
      try {
        q_.context = &builtin_context(name.text);
      } catch (const UserError&) {
        fail(name, "unknown context '" + name.text + "'");
      }
      expect(";");
      return;
    }
    if (kw.text == "factor") {
      factor_statement();
      return;
    }
    if (q_.context == nullptr) fail(kw, "the context must be declared first");
    if (kw.text == "free") {
      if (seen_bound_) fail(kw, "free variables must be declared before bound variables");
      do variable(true, "");
      while (accept(","));
      expect(";");
      return;
    }
    const Aggregate* agg = q_.context->find_aggregate(kw.text);
    if (agg == nullptr) fail(kw, "unknown aggregate '" + kw.text + "' in context '" + q_.context->name() + "'");
    seen_bound_ = true;
    do variable(false, agg->name);
    while (accept(","));
    expect(";");
  }

  void variable(bool is_free, const std::string& aggregate) {
    const Token& name = identifier("variable name");
    if (q_.find_var(name.text)) fail(name, "duplicate variable '" + name.text + "'");
    if (q_.variables.size() >= kMaxVariables)
      fail(name, "queries are limited to " + std::to_string(kMaxVariables) + " variables");
    VariableDecl decl{name.text, is_free, aggregate, std::nullopt};
    if (peek().kind == Token::Kind::word && peek().text == "in") {
      ++pos_;
      expect("{");
      std::vector<std::string> values;
      do {
        const Token& v = next();
        if (v.kind != Token::Kind::word && v.kind != Token::Kind::string) fail(v, "expected a domain value");
        if (std::find(values.begin(), values.end(), v.text) != values.end())
          fail(v, "duplicate domain value '" + v.text + "'");
        values.push_back(v.text);
      } while (accept(","));
      expect("}");
      decl.domain = std::move(values);
    }
    q_.variables.push_back(std::move(decl));
  }

  void factor_statement() {
    const Token& name = identifier("factor name");
    for (const auto& f : q_.factors)
      if (f.name == name.text) fail(name, "duplicate factor '" + name.text + "'");
    FactorDecl decl{name.text, {}, name.text + ".tsv"};
    expect("(");
    do {
      const Token& v = identifier("variable name");
      auto id = q_.find_var(v.text);
      if (!id) fail(v, "undeclared variable '" + v.text + "'");
      if (std::find(decl.vars.begin(), decl.vars.end(), *id) != decl.vars.end())
        fail(v, "variable '" + v.text + "' repeated in factor '" + name.text + "'");
      decl.vars.push_back(*id);
    } while (accept(","));
    expect(")");
    if (peek().kind == Token::Kind::word && peek().text == "from") {
      ++pos_;
      const Token& path = next();
      if (path.kind != Token::Kind::string) fail(path, "expected a quoted path");
      decl.path = path.text;
    }
    expect(";");
    q_.factors.push_back(std::move(decl));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  FAQQuery q_;
  bool seen_bound_ = false;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string domain_value_text(const std::string& v) {
  const bool bare = !v.empty() && v != "in" && v != "from" &&
                    std::all_of(v.begin(), v.end(), [](char c) {
                      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
                             c == '-' || c == '+' || c == '/';
                    }) &&
                    v.find("//") == std::string::npos;
  return bare ? v : quote(v);
}

std::string var_decl_text(const VariableDecl& v) {
  std::string out = v.name;
  if (v.domain) {
    out += " in {";
    for (std::size_t i = 0; i < v.domain->size(); ++i) out += (i ? ", " : "") + domain_value_text((*v.domain)[i]);
    out += "}";
  }
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  if (line.find('\t') != std::string::npos) {
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      out.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
  } else {
    std::istringstream ss(line);
    for (std::string f; ss >> f;) out.push_back(f);
  }
  return out;
}

std::string names(const FAQQuery& q, VarSet s) {
  std::string out;
  for (VarId v : s) out += (out.empty() ? "" : ",") + q.var_name(v);
  return out;
}

}  // namespace

FAQQuery parse_query(std::string_view text) { return Parser(text).parse(); }

std::string print_query(const FAQQuery& q) {
  std::ostringstream out;
  out << "context " << (q.context ? q.context->name() : std::string("?")) << ";\n";
  std::vector<std::string> free;
  for (const auto& v : q.variables)
    if (v.is_free) free.push_back(var_decl_text(v));
  if (!free.empty()) {
    out << "free ";
    for (std::size_t i = 0; i < free.size(); ++i) out << (i ? ", " : "") << free[i];
    out << ";\n";
  }
  for (const auto& v : q.variables)
    if (!v.is_free) out << v.aggregate << ' ' << var_decl_text(v) << ";\n";
  for (const auto& f : q.factors) {
    out << "factor " << f.name << '(';
    for (std::size_t i = 0; i < f.vars.size(); ++i) out << (i ? ", " : "") << q.var_name(f.vars[i]);
    out << ") from " << quote(f.path) << ";\n";
  }
  return out.str();
}

TextTable read_tsv(std::istream& in, std::size_t arity, bool header, const std::string& source) {
  TextTable table;
  std::string line;
  std::size_t lineno = 0;
  bool skip = header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (skip) {
      skip = false;
      continue;
    }
    auto fields = split_fields(line);
    if (fields.size() != arity + 1)
      throw UserError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(arity + 1) +
                      " columns, found " + std::to_string(fields.size()));
    TextRow row;
    row.value = std::move(fields.back());
    fields.pop_back();
    row.key = std::move(fields);
    table.push_back(std::move(row));
  }
  return table;
}

TextTable read_tsv_file(const std::filesystem::path& path, std::size_t arity, bool header) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot read factor file '" + path.string() + "'");
  return read_tsv(in, arity, header, path.string());
}

FAQInstance build_instance(FAQQuery query, const std::vector<TextTable>& tables) {
  query.validate();
  if (tables.size() != query.factors.size()) throw UserError("one table per factor expected");
  const auto& ctx = *query.context;
  const std::size_t n = query.num_vars();

  std::vector<std::set<std::string>> seen(n);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& decl = query.factors[i];
    for (const auto& row : tables[i]) {
      if (row.key.size() != decl.vars.size())
        throw UserError("factor '" + decl.name + "': row arity " + std::to_string(row.key.size()) +
                        " does not match " + std::to_string(decl.vars.size()));
      for (std::size_t c = 0; c < row.key.size(); ++c) seen[decl.vars[c]].insert(row.key[c]);
    }
  }

  FAQInstance inst;
  for (VarId v = 0; v < n; ++v) {
    const auto& decl = query.variables[v];
    if (decl.domain) {
      std::set<std::string> dom(decl.domain->begin(), decl.domain->end());
      for (const auto& s : seen[v])
        if (!dom.count(s))
          throw UserError("value '" + s + "' of variable '" + decl.name + "' is outside its declared domain");
      inst.dictionaries.emplace_back(sorted_unique_values(*decl.domain));
    } else {
      inst.dictionaries.emplace_back(sorted_unique_values({seen[v].begin(), seen[v].end()}));
    }
  }

  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& decl = query.factors[i];
    std::vector<RawRow> rows;
    rows.reserve(tables[i].size());
    for (const auto& row : tables[i]) {
      RawRow raw;
      for (std::size_t c = 0; c < row.key.size(); ++c) raw.key.push_back(*inst.dictionaries[decl.vars[c]].find(row.key[c]));
      try {
        raw.value = ctx.parse_value(row.value);
      } catch (const UserError& e) {
        throw UserError("factor '" + decl.name + "': " + e.what());
      }
      rows.push_back(std::move(raw));
    }
    try {
      inst.factors.push_back(Factor::build(decl.vars, std::move(rows), ctx));
    } catch (const UserError& e) {
      throw UserError("factor '" + decl.name + "': " + e.what());
    }
  }
  inst.query = std::move(query);
  return inst;
}

FAQInstance load_instance(FAQQuery query, const std::filesystem::path& data_dir, bool header) {
  std::vector<TextTable> tables;
  for (const auto& f : query.factors) {
    std::filesystem::path p(f.path);
    if (p.is_relative()) p = data_dir / p;
    tables.push_back(read_tsv_file(p, f.vars.size(), header));
  }
  return build_instance(std::move(query), tables);
}

std::string format_output(const FAQInstance& instance, const Factor& output) {
  const auto& ctx = instance.context();
  std::string out;
  if (output.arity() == 0) {
    out = ctx.format_value(output.empty() ? ctx.zero() : output.value(0));
    return out + "\n";
  }
  for (std::size_t r = 0; r < output.size(); ++r) {
    auto key = output.key(r);
    for (std::size_t c = 0; c < key.size(); ++c) {
      out += instance.dictionaries.at(output.vars()[c]).decode(key[c]);
      out += '\t';
    }
    out += ctx.format_value(output.value(r));
    out += '\n';
  }
  return out;
}

void write_instance(const FAQInstance& instance, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream q(dir / "query.faq");
    if (!q) throw UserError("cannot write to '" + dir.string() + "'");
    q << print_query(instance.query);
  }
  const auto& ctx = instance.context();
  for (std::size_t i = 0; i < instance.factors.size(); ++i) {
    const auto& decl = instance.query.factors[i];
    const auto& f = instance.factors[i];
    std::ofstream out(dir / decl.path);
    if (!out) throw UserError("cannot write '" + (dir / decl.path).string() + "'");
    for (std::size_t r = 0; r < f.size(); ++r) {
      auto key = f.key(r);
      for (VarId v : decl.vars) out << instance.dictionaries[v].decode(key[static_cast<std::size_t>(f.column_of(v))]) << '\t';
      out << ctx.format_value(f.value(r)) << '\n';
    }
  }
}

std::string emit_plan(const FAQQuery& query, const EngineTrace& trace) {
  std::ostringstream out;
  const auto& ctx = *query.context;
  const VarSet free = query.free_vars();
  std::size_t proj = 0, consts = 0, rule = 0;

  // The last step becomes the output rule when its factor is all that remains.
  std::string merged;
  if (!trace.steps.empty()) {
    const auto& last = trace.steps.back();
    if (last.mode == EliminationMode::semiring && !last.output.empty() && last.output_vars == free &&
        trace.final_participants.size() == 1 && trace.final_participants[0].factor == last.output &&
        trace.scalar == ctx.one())
      merged = last.output;
  }

  auto valued = [&](const std::string& name, VarSet vars, std::size_t k) {
    return name + "[" + names(query, vars) + "] = v" + std::to_string(k);
  };

  for (const auto& step : trace.steps) {
    const std::string var = query.var_name(step.var);
    if (step.mode == EliminationMode::semiring) {
      ++rule;
      const std::string s = "s" + std::to_string(rule);
      std::string head;
      if (step.output == merged && !merged.empty())
        head = "output[" + names(query, step.output_vars) + "] = " + s;
      else if (!step.output.empty())
        head = step.output + "[" + names(query, step.output_vars) + "] = " + s;
      else
        head = "c" + std::to_string(++consts) + "[] = " + s;
      if (step.participants.empty()) {
        out << head << " <- agg<<" << s << " = " << step.aggregate << "(1)>> " << var << " in Dom(" << var << ").\n";
        continue;
      }
      std::vector<std::string> body;
      std::string product;
      std::size_t k = 0;
      for (const auto& p : step.participants) {
        if (p.role == TraceParticipant::Role::projection) {
          const std::string pname = "proj" + std::to_string(++proj);
          out << pname << "(" << names(query, p.vars) << ") <- " << p.factor << "(" << names(query, p.source_vars)
              << ").\n";
          body.push_back(pname + "(" + names(query, p.vars) + ")");
        } else {
          ++k;
          body.push_back(valued(p.factor, p.vars, k));
          product += (product.empty() ? "v" : "*v") + std::to_string(k);
        }
      }
      out << head << " <- agg<<" << s << " = " << step.aggregate << "(" << product << ")>> ";
      for (std::size_t i = 0; i < body.size(); ++i) out << (i ? ", " : "") << body[i];
      out << ".\n";
    } else {
      for (const auto& rw : step.rewrites) {
        ++rule;
        const std::string s = "s" + std::to_string(rule);
        const std::string target =
            rw.output.empty() ? "c" + std::to_string(++consts) + "[]" : rw.output + "[" + names(query, rw.output_vars) + "]";
        if (rw.powered)
          out << target << " = " << s << " <- " << valued(rw.input, rw.input_vars, 1) << ", " << s << " = v1^"
              << rw.exponent << ".\n";
        else
          out << target << " = " << s << " <- agg<<" << s << " = " << step.aggregate << "(v1)>> "
              << valued(rw.input, rw.input_vars, 1) << ", " << var << " in Dom(" << var << ").\n";
      }
    }
  }

  if (merged.empty()) {
    std::vector<std::string> body;
    std::string product;
    std::size_t k = 0;
    for (const auto& p : trace.final_participants) {
      if (p.role == TraceParticipant::Role::domain) {
        body.push_back(query.var_name(*p.vars.begin()) + " in Dom(" + query.var_name(*p.vars.begin()) + ")");
        continue;
      }
      ++k;
      body.push_back(valued(p.factor, p.vars, k));
      product += (product.empty() ? "v" : "*v") + std::to_string(k);
    }
    if (trace.scalar != ctx.one() || product.empty())
      product = ctx.format_value(trace.scalar) + (product.empty() ? "" : "*" + product);
    out << "output[" << names(query, free) << "] = t <- ";
    for (const auto& b : body) out << b << ", ";
    out << "t = " << product << ".\n";
  }
  return out.str();
}

VariableOrdering parse_ordering(const FAQQuery& query, std::string_view list) {
  std::vector<VarId> listed;
  std::string item;
  auto flush = [&] {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    std::string name = b == std::string::npos ? "" : item.substr(b, e - b + 1);
    item.clear();
    if (name.empty()) throw UserError("empty name in ordering");
    auto id = query.find_var(name);
    if (!id) throw UserError("unknown variable '" + name + "' in ordering");
    listed.push_back(*id);
  };
  for (char c : list) {
    if (c == ',' || c == '|')
      flush();
    else
      item += c;
  }
  flush();

  VariableOrdering sigma;
  sigma.num_free = query.num_free();
  if (listed.size() + sigma.num_free == query.num_vars() &&
      std::none_of(listed.begin(), listed.end(), [&](VarId v) { return query.variables[v].is_free; })) {
    sigma.order = query.free_vars().to_vector();
    sigma.order.insert(sigma.order.end(), listed.begin(), listed.end());
  } else {
    sigma.order = std::move(listed);
  }
  validate_ordering(query, sigma);
  return sigma;
}

std::string format_ordering(const FAQQuery& query, const VariableOrdering& sigma) {
  std::string out;
  for (std::size_t i = 0; i < sigma.order.size(); ++i) {
    if (i == sigma.num_free) out += i ? " | " : "| ";
    else if (i) out += ",";
    out += query.var_name(sigma.order[i]);
  }
  return out;
}

}  // namespace faq
