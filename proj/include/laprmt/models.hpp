#ifndef LAPRMT_MODELS_HPP
#define LAPRMT_MODELS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laprmt/linalg.hpp"
#include "laprmt/random.hpp"

namespace laprmt {

/// Zero-mean, unit-variance entry laws.
enum class EntryDistribution { gaussian, rademacher, uniform };

std::string_view to_string(EntryDistribution dist);
std::optional<EntryDistribution> parse_distribution(std::string_view name);

/// One draw of `dist` from `stream`. Uniform is on [-sqrt(3), sqrt(3)].
double draw(EntryDistribution dist, Stream& stream);

struct BlockSpec {
  std::size_t n = 0;
  std::size_t k = 1;

  std::size_t block_size() const noexcept { return n / k; }
  /// Throws std::invalid_argument unless k >= 1 and k divides n.
  void validate() const;
};

/// Symmetric matrix with zero diagonal and off-diagonal entries drawn from
/// `dist`, traversed row-major over i < j: (0,1), (0,2), ..., (1,2), ...
SymmetricMatrix sample_wigner_offdiag(std::size_t n, EntryDistribution dist,
                                      std::uint64_t seed);

/// L = D_X - X with D_X the row sums of X. The diagonal of X cancels, so the
/// diagonal of L is the compensated sum of the off-diagonal row entries.
SymmetricMatrix laplacian_of(const SymmetricMatrix& x);

/// laplacian_of(sample_wigner_offdiag(n, dist, seed)).
SymmetricMatrix sample_laplacian(std::size_t n, EntryDistribution dist,
                                 std::uint64_t seed);

/// Diagonal of sample_laplacian(n, dist, seed) without storing the matrix.
/// Consumes exactly the same draws in the same order.
std::vector<double> sample_laplacian_diagonal(std::size_t n,
                                              EntryDistribution dist,
                                              std::uint64_t seed);

/// The k independent blocks of a block Laplacian; block b uses
/// block_seed(seed, b).
std::vector<SymmetricMatrix> sample_laplacian_blocks(const BlockSpec& spec,
                                                     EntryDistribution dist,
                                                     std::uint64_t seed);

/// Block-diagonal assembly of sample_laplacian_blocks; block b occupies
/// indices [b*n/k, (b+1)*n/k).
SymmetricMatrix sample_block_laplacian(const BlockSpec& spec,
                                       EntryDistribution dist,
                                       std::uint64_t seed);

SymmetricMatrix block_diagonal(const std::vector<SymmetricMatrix>& blocks);

/// Plain-text dump: one row per line, space-separated, 17 significant digits.
void write_matrix(std::ostream& out, const SymmetricMatrix& m);
SymmetricMatrix read_matrix(std::istream& in);

}  // namespace laprmt

#endif  // LAPRMT_MODELS_HPP
