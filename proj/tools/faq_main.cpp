// faq: command-line driver for the FAQ engine.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "faq/engine.hpp"
#include "faq/error.hpp"
#include "faq/frontend.hpp"
#include "faq/optimizer.hpp"
#include "faq/oracle.hpp"
#include "faq/reductions.hpp"

namespace fs = std::filesystem;
using namespace faq;

namespace {

struct Options {
  std::string query;
  std::string data;
  std::string out;
  std::string order = "auto";
  std::string mode = "greedy";
  std::size_t cap = 10'000;
  bool stats = false;
  bool no_projections = false;
  bool no_shortcut = false;
  bool header = false;
  std::uint64_t seed = 1;
  std::string demo;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FAQQuery load_query(const Options& o) {
  try {
    return parse_query(read_file(o.query));
  } catch (const ParseError& e) {
    throw UserError(o.query + ": " + e.what());
  }
}

fs::path data_dir(const Options& o) {
  if (!o.data.empty()) return o.data;
  fs::path parent = fs::path(o.query).parent_path();
  return parent.empty() ? fs::path(".") : parent;
}

void write_text(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out);
  if (!out) throw UserError("cannot write '" + o.out + "'");
  out << text;
}

OptimizerMode parse_mode(const std::string& m) {
  if (m == "exact") return OptimizerMode::exact;
  if (m == "greedy") return OptimizerMode::greedy;
  throw UserError("--mode must be exact or greedy");
}

VariableOrdering choose_ordering(const Options& o, const FAQQuery& q) {
  if (o.order == "auto" || o.order == "exact") {
    OptimizerOptions opt;
    opt.mode = o.order == "exact" ? OptimizerMode::exact : parse_mode(o.mode);
    opt.cap = o.cap;
    auto res = optimize_ordering(q, opt);
    if (res.fell_back) std::cerr << "warning: more than " << o.cap << " orderings; used the greedy ordering\n";
    return res.sigma;
  }
  return parse_ordering(q, o.order);
}

EngineOptions engine_options(const Options& o) {
  EngineOptions e;
  if (o.no_projections) e.projections = ProjectionPolicy::never;
  e.idempotence_shortcut = !o.no_shortcut;
  return e;
}

const char* mode_name(EliminationMode m) { return m == EliminationMode::semiring ? "semiring" : "product"; }

void print_stats(const FAQQuery& q, const VariableOrdering& sigma, const EngineTrace& trace) {
  auto& err = std::cerr;
  err << "# ordering " << format_ordering(q, sigma) << "  faqw " << faqw_of_ordering(q, sigma).get_str() << '\n';
  err << "# step\tvar\tmode\t|U|\tparticipants\texpanded\toutput\n";
  std::size_t i = 0;
  for (const auto& s : trace.steps) {
    err << "# " << ++i << '\t' << q.var_name(s.var) << '\t' << mode_name(s.mode) << '\t' << s.U.size() << '\t';
    for (std::size_t k = 0; k < s.participants.size(); ++k)
      err << (k ? "," : "") << s.participants[k].factor << ':' << s.participants[k].size;
    if (s.participants.empty()) err << '-';
    err << '\t' << s.expanded_bindings << '\t' << (s.output.empty() ? "-" : s.output) << ':' << s.output_size << '\n';
  }
  err << "# final\t-\tjoin\t" << q.free_vars().size() << '\t';
  for (std::size_t k = 0; k < trace.final_participants.size(); ++k)
    err << (k ? "," : "") << trace.final_participants[k].factor << ':' << trace.final_participants[k].size;
  if (trace.final_participants.empty()) err << '-';
  err << '\t' << trace.final_expanded_bindings << "\toutput\n";
}

int cmd_run(const Options& o) {
  auto inst = load_instance(load_query(o), data_dir(o), o.header);
  auto sigma = choose_ordering(o, inst.query);
  auto res = run_insideout(inst, sigma, engine_options(o));
  write_text(o, format_output(inst, res.output));
  if (o.stats) print_stats(inst.query, sigma, res.trace);
  return 0;
}

int cmd_oracle(const Options& o) {
  auto inst = load_instance(load_query(o), data_dir(o), o.header);
  write_text(o, format_output(inst, brute_force_eval(inst)));
  return 0;
}

int cmd_plan(const Options& o) {
  auto inst = load_instance(load_query(o), data_dir(o), o.header);
  auto sigma = choose_ordering(o, inst.query);
  auto res = run_insideout(inst, sigma, engine_options(o));
  write_text(o, "// ordering " + format_ordering(inst.query, sigma) + "\n" + emit_plan(inst.query, res.trace));
  return 0;
}

std::string profile_table(const FAQQuery& q, const WidthProfile& p) {
  std::ostringstream out;
  out << "step\tvar\tmode\tU\trho\n";
  std::size_t i = 0;
  for (const auto& s : p.steps)
    out << ++i << '\t' << q.var_name(s.var) << '\t' << mode_name(s.mode) << '\t' << q.format_vars(s.U) << '\t'
        << s.rho.get_str() << '\n';
  return out.str();
}

int cmd_optimize(const Options& o) {
  auto q = load_query(o);
  OptimizerOptions opt;
  opt.mode = parse_mode(o.mode);
  opt.cap = o.cap;
  if (o.no_projections) opt.projections = ProjectionPolicy::never;
  auto res = optimize_ordering(q, opt);
  if (res.fell_back) std::cerr << "warning: more than " << o.cap << " orderings; used the greedy ordering\n";
  std::ostringstream out;
  out << "ordering\t" << format_ordering(q, res.sigma) << '\n';
  out << "width\t" << res.width.get_str() << '\n';
  out << "mode\t" << (res.fell_back ? "greedy (cap exceeded)" : o.mode) << '\n';
  out << "candidates\t" << res.candidates << '\n';
  out << profile_table(q, res.profile);
  write_text(o, out.str());
  return 0;
}

int cmd_analyze(const Options& o) {
  auto q = load_query(o);
  std::ostringstream out;
  out << "context\t" << q.context->name() << '\n';
  out << "variables\t" << q.num_vars() << " (" << q.num_free() << " free)\n";
  for (const auto& f : q.factors) {
    out << "edge\t" << f.name << '(';
    for (std::size_t i = 0; i < f.vars.size(); ++i) out << (i ? "," : "") << q.var_name(f.vars[i]);
    out << ")\n";
  }
  auto poset = build_precedence_poset(q);
  for (auto [u, v] : poset.covers()) out << "precedes\t" << q.var_name(u) << " < " << q.var_name(v) << '\n';

  auto sigma = o.order == "auto" || o.order == "exact" ? identity_ordering(q) : parse_ordering(q, o.order);
  auto profile = width_profile(q, sigma);
  out << "ordering\t" << format_ordering(q, sigma) << '\n';
  out << "faqw\t" << profile.width.get_str() << '\n';
  out << profile_table(q, profile);
  auto td = tree_decomposition_from_ordering(q.hypergraph(), sigma.order);
  for (std::size_t b = 0; b < td.bags.size(); ++b)
    out << "bag\t" << b << '\t' << q.format_vars(td.bags[b]) << '\t' << td.bag_width[b].get_str() << '\n';
  for (auto [a, b] : td.tree_edges) out << "tree\t" << a << " - " << b << '\n';

  OptimizerOptions greedy;
  out << "greedy\t" << optimize_ordering(q, greedy).width.get_str() << '\n';
  OptimizerOptions exact;
  exact.mode = OptimizerMode::exact;
  exact.cap = o.cap;
  auto ex = optimize_ordering(q, exact);
  out << "exact\t" << (ex.fell_back ? "skipped (cap exceeded)" : ex.width.get_str()) << '\n';
  write_text(o, out.str());
  return 0;
}

std::string mcm_expected(const FAQInstance& inst, const Matrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      if (m[i][j] != 0)
        out += inst.dictionaries[0].decode(static_cast<Code>(i)) + "\t" +
               inst.dictionaries[1].decode(static_cast<Code>(j)) + "\t" + Value(m[i][j]).str() + "\n";
  return out;
}

int cmd_demo(const Options& o) {
  if (o.out.empty()) throw UserError("demo needs -o <directory>");
  std::mt19937_64 rng(o.seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  FAQInstance inst;
  std::string expected;
  if (o.demo == "mcm") {
    const int n = pick(2, 4);
    std::vector<std::size_t> dims;
    for (int i = 0; i <= n; ++i) dims.push_back(static_cast<std::size_t>(pick(2, 4)));
    std::vector<Matrix> chain;
    for (int k = 0; k < n; ++k) {
      Matrix m(dims[k], std::vector<mpq_class>(dims[k + 1]));
      for (auto& row : m)
        for (auto& x : row) x = pick(-3, 9);
      chain.push_back(std::move(m));
    }
    inst = mcm_instance(chain);
    expected = mcm_expected(inst, multiply_chain(chain));
  } else if (o.demo == "map") {
    std::vector<std::size_t> dom{2, 3, 2, 3};
    std::vector<MapFactor> fs{{{0, 1}, {}}, {{1, 2}, {}}, {{2, 3}, {}}};
    for (auto& f : fs)
      for (Code a = 0; a < dom[f.vars[0]]; ++a)
        for (Code b = 0; b < dom[f.vars[1]]; ++b) f.rows.push_back({{a, b}, mpq_class(pick(0, 8), 4)});
    inst = map_instance(dom, 1, fs);
    for (const auto& [key, val] : map_native(dom, 1, fs))
      expected += std::to_string(key[0]) + "\t" + Value(val).str() + "\n";
  } else if (o.demo == "qcq") {
    std::vector<BoolRelation> rels{{{0, 2}, {}}, {{1, 2, 3}, {}}};
    for (auto& r : rels)
      for (Code t = 0; t < (1U << r.vars.size()); ++t)
        if (pick(0, 2) > 0) {
          std::vector<Code> tuple;
          for (std::size_t i = 0; i < r.vars.size(); ++i) tuple.push_back((t >> i) & 1U);
          r.tuples.push_back(tuple);
        }
    inst = qcq_count_instance(2, "EA", rels);
    expected = qcq_count_native(2, "EA", rels).get_str() + "\n";
  } else {
    throw UserError("demo must be one of mcm, map, qcq");
  }
  write_instance(inst, o.out);
  std::ofstream(fs::path(o.out) / "expected.tsv") << expected;
  std::cout << "wrote " << (fs::path(o.out) / "query.faq").string() << " and " << inst.factors.size()
            << " factor files; expected answer in expected.tsv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional aggregate queries: InsideOut evaluation, width analysis and ordering search"};
  app.require_subcommand(1);
  Options o;

  auto add_query = [&](CLI::App* sub) { sub->add_option("-q,--query", o.query, "query file")->required(); };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("-d,--data", o.data, "directory holding the factor files (default: the query's)");
    sub->add_flag("--header", o.header, "factor files start with a header row");
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", o.out, "output file (default stdout)"); };
  auto add_order = [&](CLI::App* sub) {
    sub->add_option("--order", o.order, "auto, exact, or a comma-separated variable list");
    sub->add_option("--mode", o.mode, "optimizer mode for --order auto: exact or greedy");
    sub->add_option("--cap", o.cap, "limit on orderings enumerated in exact mode");
  };
  auto add_engine = [&](CLI::App* sub) {
    sub->add_flag("--no-projections", o.no_projections, "disable indicator projections");
    sub->add_flag("--no-shortcut", o.no_shortcut, "disable the idempotent power shortcut");
  };

  auto* run = app.add_subcommand("run", "evaluate a query with InsideOut");
  add_query(run), add_data(run), add_out(run), add_order(run), add_engine(run);
  run->add_flag("--stats", o.stats, "per-step statistics on stderr");

  auto* oracle = app.add_subcommand("oracle", "evaluate a query by brute-force enumeration");
  add_query(oracle), add_data(oracle), add_out(oracle);

  auto* plan = app.add_subcommand("plan", "print the rule script of an evaluation");
  add_query(plan), add_data(plan), add_out(plan), add_order(plan), add_engine(plan);

  auto* analyze = app.add_subcommand("analyze", "widths, poset and tree decomposition (no data)");
  add_query(analyze), add_out(analyze);
  analyze->add_option("--order", o.order, "ordering to analyze (default: query order)");
  analyze->add_option("--cap", o.cap, "limit on orderings enumerated for the exact width");

  auto* optimize = app.add_subcommand("optimize", "search for a low-width variable ordering");
  add_query(optimize), add_out(optimize);
  optimize->add_option("--mode", o.mode, "exact or greedy");
  optimize->add_option("--cap", o.cap, "limit on orderings enumerated in exact mode");
  optimize->add_flag("--no-projections", o.no_projections, "cost subqueries without projections");

  auto* demo = app.add_subcommand("demo", "write a reduction instance: mcm, map or qcq");
  demo->add_option("kind", o.demo, "mcm, map or qcq")->required();
  demo->add_option("-o,--out", o.out, "output directory")->required();
  demo->add_option("--seed", o.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run) return cmd_run(o);
    if (*oracle) return cmd_oracle(o);
    if (*plan) return cmd_plan(o);
    if (*analyze) return cmd_analyze(o);
    if (*optimize) return cmd_optimize(o);
    if (*demo) return cmd_demo(o);
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  } catch (const UserError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
