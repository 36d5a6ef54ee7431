#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "faq/engine.hpp"
#include "faq/query.hpp"

namespace faq {

/// Parses the query language:
///
///   context nat-sum-prod;
///   free b, d;
///   sum a;
///   prod x in {0, 1};
///   factor R(a, b) from "R.tsv";
///
/// `#` and `//` start comments. Throws ParseError with a position.
FAQQuery parse_query(std::string_view text);

/// Canonical text; parse_query(print_query(q)) prints identically.
std::string print_query(const FAQQuery& query);

/// One data row with undecoded key columns (edge order) and value text.
struct TextRow {
  std::vector<std::string> key;
  std::string value;
};
using TextTable = std::vector<TextRow>;

/// Reads a tab-separated factor file: key columns then the value, `#`
/// comments and blank lines skipped, the first row dropped when `header`.
TextTable read_tsv(std::istream& in, std::size_t arity, bool header, const std::string& source);
TextTable read_tsv_file(const std::filesystem::path& path, std::size_t arity, bool header);

/// Builds dictionaries (declared domain values plus the values seen in the
/// data) and the encoded factors. Data outside an explicit domain is an error.
FAQInstance build_instance(FAQQuery query, const std::vector<TextTable>& tables);

/// Reads every factor file relative to `data_dir`.
FAQInstance load_instance(FAQQuery query, const std::filesystem::path& data_dir, bool header = false);

/// Output rows: decoded free-variable columns then the value, one row per
/// line, sorted by key. With no free variables, the single scalar value
/// (zero included).
std::string format_output(const FAQInstance& instance, const Factor& output);

/// Writes query.faq and one TSV per factor into `dir`.
void write_instance(const FAQInstance& instance, const std::filesystem::path& dir);

/// Rule script for an engine trace: projection rules, one aggregate rule per
/// semiring step, marginalization and power rules for product steps, and the
/// final output rule.
std::string emit_plan(const FAQQuery& query, const EngineTrace& trace);

/// Parses a comma-separated variable list into an ordering.
VariableOrdering parse_ordering(const FAQQuery& query, std::string_view list);
std::string format_ordering(const FAQQuery& query, const VariableOrdering& sigma);

}  // namespace faq
