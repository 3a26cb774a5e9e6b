#include "laprmt/models.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace laprmt {

double Stream::gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::string_view to_string(EntryDistribution dist) {
  switch (dist) {
    case EntryDistribution::gaussian:
      return "gaussian";
    case EntryDistribution::rademacher:
      return "rademacher";
    case EntryDistribution::uniform:
      return "uniform";
  }
  return "unknown";
}

std::optional<EntryDistribution> parse_distribution(std::string_view name) {
  if (name == "gaussian") return EntryDistribution::gaussian;
  if (name == "rademacher") return EntryDistribution::rademacher;
  if (name == "uniform") return EntryDistribution::uniform;
  return std::nullopt;
}

double draw(EntryDistribution dist, Stream& stream) {
  switch (dist) {
    case EntryDistribution::gaussian:
      return stream.gaussian();
    case EntryDistribution::rademacher:
      return stream.rademacher();
    case EntryDistribution::uniform:
      return std::numbers::sqrt3 * (2.0 * stream.uniform() - 1.0);
  }
  return 0.0;
}

void BlockSpec::validate() const {
  if (k == 0) throw std::invalid_argument("block count k must be >= 1");
  if (n == 0 || n % k != 0) {
    throw std::invalid_argument("block count k=" + std::to_string(k) +
                                " does not divide n=" + std::to_string(n));
  }
}

namespace {

void require_order(std::size_t n) {
  if (n < 2) {
    throw std::invalid_argument("matrix order must be >= 2, got " + std::to_string(n));
  }
}

}  // namespace

SymmetricMatrix sample_wigner_offdiag(std::size_t n, EntryDistribution dist,
                                      std::uint64_t seed) {
  require_order(n);
  SymmetricMatrix x(n);
  Stream stream(seed);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) x.at(j, i) = draw(dist, stream);
  }
  return x;
}

SymmetricMatrix laplacian_of(const SymmetricMatrix& x) {
  if (!x.all_finite()) {
    throw std::invalid_argument("laplacian_of: matrix has non-finite entries");
  }
  const std::size_t n = x.order();
  SymmetricMatrix l(n);
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedAccumulator degree;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      degree.add(x(i, j));
    }
    auto row = l.packed_row(i);
    const auto source = x.packed_row(i);
    for (std::size_t j = 0; j < i; ++j) row[j] = -source[j];
    row[i] = degree.value();
  }
  return l;
}

SymmetricMatrix sample_laplacian(std::size_t n, EntryDistribution dist,
                                 std::uint64_t seed) {
  return laplacian_of(sample_wigner_offdiag(n, dist, seed));
}

std::vector<double> sample_laplacian_diagonal(std::size_t n,
                                              EntryDistribution dist,
                                              std::uint64_t seed) {
  require_order(n);
  std::vector<CompensatedAccumulator> degree(n);
  Stream stream(seed);
  // Row i receives its entries in increasing column order, exactly as in
  // laplacian_of: columns j < i arrive while rows j are traversed.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double value = draw(dist, stream);
      degree[i].add(value);
      degree[j].add(value);
    }
  }
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = degree[i].value();
  return diag;
}

std::vector<SymmetricMatrix> sample_laplacian_blocks(const BlockSpec& spec,
                                                     EntryDistribution dist,
                                                     std::uint64_t seed) {
  spec.validate();
  std::vector<SymmetricMatrix> blocks;
  blocks.reserve(spec.k);
  for (std::size_t b = 0; b < spec.k; ++b) {
    blocks.push_back(sample_laplacian(spec.block_size(), dist, block_seed(seed, b)));
  }
  return blocks;
}

SymmetricMatrix block_diagonal(const std::vector<SymmetricMatrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.order();
  SymmetricMatrix out(n);
  std::size_t base = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.order(); ++i) {
      for (std::size_t j = 0; j <= i; ++j) out.at(base + i, base + j) = b(i, j);
    }
    base += b.order();
  }
  return out;
}

SymmetricMatrix sample_block_laplacian(const BlockSpec& spec,
                                       EntryDistribution dist,
                                       std::uint64_t seed) {
  return block_diagonal(sample_laplacian_blocks(spec, dist, seed));
}

void write_matrix(std::ostream& out, const SymmetricMatrix& m) {
  const std::size_t n = m.order();
  char buffer[64];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto res = std::to_chars(buffer, buffer + sizeof buffer, m(i, j),
                                     std::chars_format::scientific, 16);
      if (j > 0) out << ' ';
      out.write(buffer, res.ptr - buffer);
    }
    out << '\n';
  }
}

SymmetricMatrix read_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::vector<double> row;
    double v = 0.0;
    while (fields >> v) row.push_back(v);
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  if (n == 0) throw std::invalid_argument("read_matrix: empty input");
  SymmetricMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw std::invalid_argument("read_matrix: row " + std::to_string(i) +
                                  " has wrong length");
    }
    for (std::size_t j = 0; j <= i; ++j) {
      if (rows[i][j] != rows[j][i]) {
        throw std::invalid_argument("read_matrix: matrix is not symmetric");
      }
      m.at(i, j) = rows[i][j];
    }
  }
  return m;
}

}  // namespace laprmt
