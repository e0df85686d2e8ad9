#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ifslab/errors.hpp"
#include "ifslab/rng.hpp"

namespace ifslab {

/// 1-based index of a generating map.
using Symbol = int;

namespace driver {

/// i_n = perm[(n - 1) mod N]
struct Cyclic {
  std::vector<Symbol> permutation;
};

/// Independent draws with the given probabilities, SplitMix64 stream.
struct IidRandom {
  std::uint64_t seed = 0;
  std::vector<double> weights;
};

/// All words over {1..N} concatenated in length-then-lexicographic order:
/// 1, 2, ..., N, 11, 12, ..., NN, 111, ...
struct DisjunctiveEnumeration {
  int alphabet = 2;
};

/// Finite replay; asking for more symbols than stored is an error.
struct Custom {
  std::vector<Symbol> symbols;
  int alphabet = 1;
};

}  // namespace driver

/// Immutable description of a driving sequence. Construction validates it.
class DriverSpec {
 public:
  using Kind = std::variant<driver::Cyclic, driver::IidRandom, driver::DisjunctiveEnumeration,
                            driver::Custom>;

  explicit DriverSpec(Kind kind);

  static DriverSpec cyclic(std::vector<Symbol> permutation);
  static DriverSpec cyclic_identity(int alphabet);
  static DriverSpec iid(std::uint64_t seed, std::vector<double> weights);
  static DriverSpec iid_uniform(std::uint64_t seed, int alphabet);
  static DriverSpec disjunctive(int alphabet);
  static DriverSpec custom(std::vector<Symbol> symbols, int alphabet);

  const Kind& kind() const noexcept { return kind_; }
  int alphabet() const noexcept;
  std::string name() const;

 private:
  Kind kind_;
};

/// Stateful producer of a driving sequence. Single owner; two producers
/// built from equal specs yield identical streams.
class SymbolSequence {
 public:
  explicit SymbolSequence(DriverSpec spec);

  Symbol next();
  /// Number of symbols produced so far.
  std::size_t position() const noexcept { return position_; }
  const DriverSpec& spec() const noexcept { return spec_; }

 private:
  DriverSpec spec_;
  std::size_t position_ = 0;

  // disjunctive enumeration state: current word and cursor inside it
  std::vector<Symbol> word_;
  std::size_t cursor_ = 0;

  // iid state
  SplitMix64 rng_{0};
  std::vector<double> cumulative_;
};

std::vector<Symbol> generate(const DriverSpec& spec, std::size_t n);

/// Sum of k * N^k for k = 1..m: length of the enumeration prefix that holds
/// every word of length <= m as a block.
std::size_t disjunctive_prefix_length(int m, int alphabet);

struct DisjunctivityReport {
  int window = 1;
  int alphabet = 1;
  std::uint64_t total_words = 0;
  std::uint64_t found = 0;
  std::uint64_t missing_count = 0;
  std::vector<std::vector<Symbol>> missing;  // first kMaxListedMissing, lexicographic
  std::size_t prefix_length = 0;
  std::string warning;

  bool complete() const noexcept { return missing_count == 0; }
  static constexpr std::size_t kMaxListedMissing = 20;
};

/// Scans every contiguous window of length m. Symbols must lie in
/// 1..alphabet; throws SymbolError otherwise.
DisjunctivityReport check_disjunctive(const std::vector<Symbol>& seq, int m, int alphabet);

/// Same, with the alphabet taken as the largest symbol present (at least 1).
DisjunctivityReport check_disjunctive(const std::vector<Symbol>& seq, int m);

struct RepetitivenessReport {
  int alphabet = 1;
  std::vector<std::size_t> counts;  // counts[s - 1] for symbol s
  std::vector<Symbol> unseen;

  bool all_seen() const noexcept { return unseen.empty(); }
  std::size_t count(Symbol s) const { return counts.at(static_cast<std::size_t>(s - 1)); }
};

RepetitivenessReport check_repetitive(const std::vector<Symbol>& seq, int alphabet);

}  // namespace ifslab
