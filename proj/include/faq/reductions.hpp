#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "faq/query.hpp"

namespace faq {

using Matrix = std::vector<std::vector<mpq_class>>;

/// Matrix chain A1 A2 ... An as a sum-product query over x0..xn with the
/// endpoints free. Domains are explicit index ranges; entries may be any
/// rationals. Throws UserError on a broken dimension chain.
FAQInstance mcm_instance(const std::vector<Matrix>& chain);
/// Dense matrix from the output factor over (x0, xn); absent entries are 0.
Matrix decode_matrix(const FAQInstance& instance, const Factor& output);
Matrix multiply_chain(const std::vector<Matrix>& chain);

/// A factor given by nonnegative rational entries over small index domains.
struct MapFactor {
  std::vector<VarId> vars;
  std::vector<std::pair<std::vector<Code>, mpq_class>> rows;
};

/// Max-product query: the first `num_free` variables are free, the rest are
/// maximized; variable v ranges over 0..domain_sizes[v]-1.
FAQInstance map_instance(const std::vector<std::size_t>& domain_sizes, std::size_t num_free,
                         const std::vector<MapFactor>& factors);
/// Exhaustive max-product, keyed by free assignment (zeros omitted).
std::vector<std::pair<std::vector<Code>, mpq_class>> map_native(const std::vector<std::size_t>& domain_sizes,
                                                                std::size_t num_free,
                                                                const std::vector<MapFactor>& factors);

/// A relation over Boolean variables given by its tuples.
struct BoolRelation {
  std::vector<VarId> vars;
  std::vector<std::vector<Code>> tuples;
};

/// Counts the assignments of the free variables x1..xf satisfying
/// Q1 y1 ... Qk yk of the conjunction of the relations, where `quantifiers`
/// holds one 'E' or 'A' per quantified variable. Variables 0..f-1 are the free
/// ones and f..f+k-1 the quantified ones, all over {0,1}. The free variables
/// are summed, existentials maximized, universals multiplied.
FAQInstance qcq_count_instance(std::size_t num_free, const std::string& quantifiers,
                               const std::vector<BoolRelation>& relations);
mpz_class qcq_count_native(std::size_t num_free, const std::string& quantifiers,
                           const std::vector<BoolRelation>& relations);

}  // namespace faq
