#include "ifslab/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

namespace ifslab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_alphabet(int n, const char* where) {
  if (n < 1) throw ValidationError(std::string(where) + ": alphabet size must be at least 1");
}

void require_symbol(Symbol s, int alphabet, const char* where) {
  if (s < 1 || s > alphabet) {
    throw SymbolError(std::string(where) + ": symbol " + std::to_string(s) + " outside 1.." +
                      std::to_string(alphabet));
  }
}

// Guards against window tables that would not fit in memory.
constexpr std::uint64_t kMaxWindowTable = std::uint64_t{1} << 26;

std::uint64_t checked_power(int base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(base)) {
      throw ValidationError("alphabet^window overflows");
    }
    r *= static_cast<std::uint64_t>(base);
  }
  return r;
}

}  // namespace

DriverSpec::DriverSpec(Kind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const driver::Cyclic& c) {
                   const int n = static_cast<int>(c.permutation.size());
                   require_alphabet(n, "Cyclic");
                   std::vector<bool> seen(static_cast<std::size_t>(n), false);
                   for (Symbol s : c.permutation) {
                     if (s < 1 || s > n || seen[static_cast<std::size_t>(s - 1)]) {
                       throw ValidationError("Cyclic: permutation is not a bijection on 1.." +
                                             std::to_string(n));
                     }
                     seen[static_cast<std::size_t>(s - 1)] = true;
                   }
                 },
                 [](const driver::IidRandom& r) {
                   require_alphabet(static_cast<int>(r.weights.size()), "IidRandom");
                   double sum = 0.0;
                   for (double w : r.weights) {
                     if (!(w > 0.0) || !std::isfinite(w)) {
                       throw ValidationError("IidRandom: weights must be strictly positive");
                     }
                     sum += w;
                   }
                   if (std::abs(sum - 1.0) > 1e-9) {
                     throw ValidationError("IidRandom: weights must sum to 1 (got " + std::to_string(sum) + ")");
                   }
                 },
                 [](const driver::DisjunctiveEnumeration& d) {
                   require_alphabet(d.alphabet, "DisjunctiveEnumeration");
                 },
                 [](const driver::Custom& c) {
                   require_alphabet(c.alphabet, "Custom");
                   for (Symbol s : c.symbols) require_symbol(s, c.alphabet, "Custom");
                 },
             },
             kind_);
}

DriverSpec DriverSpec::cyclic(std::vector<Symbol> permutation) {
  return DriverSpec(driver::Cyclic{std::move(permutation)});
}

DriverSpec DriverSpec::cyclic_identity(int alphabet) {
  require_alphabet(alphabet, "Cyclic");
  std::vector<Symbol> p(static_cast<std::size_t>(alphabet));
  for (int i = 0; i < alphabet; ++i) p[static_cast<std::size_t>(i)] = i + 1;
  return cyclic(std::move(p));
}

DriverSpec DriverSpec::iid(std::uint64_t seed, std::vector<double> weights) {
  return DriverSpec(driver::IidRandom{seed, std::move(weights)});
}

DriverSpec DriverSpec::iid_uniform(std::uint64_t seed, int alphabet) {
  require_alphabet(alphabet, "IidRandom");
  return iid(seed, std::vector<double>(static_cast<std::size_t>(alphabet), 1.0 / alphabet));
}

DriverSpec DriverSpec::disjunctive(int alphabet) {
  return DriverSpec(driver::DisjunctiveEnumeration{alphabet});
}

DriverSpec DriverSpec::custom(std::vector<Symbol> symbols, int alphabet) {
  return DriverSpec(driver::Custom{std::move(symbols), alphabet});
}

int DriverSpec::alphabet() const noexcept {
  return std::visit(Overloaded{
                        [](const driver::Cyclic& c) { return static_cast<int>(c.permutation.size()); },
                        [](const driver::IidRandom& r) { return static_cast<int>(r.weights.size()); },
                        [](const driver::DisjunctiveEnumeration& d) { return d.alphabet; },
                        [](const driver::Custom& c) { return c.alphabet; },
                    },
                    kind_);
}

std::string DriverSpec::name() const {
  return std::visit(Overloaded{
                        [](const driver::Cyclic&) { return std::string("cyclic"); },
                        [](const driver::IidRandom&) { return std::string("iid"); },
                        [](const driver::DisjunctiveEnumeration&) { return std::string("disjunctive"); },
                        [](const driver::Custom&) { return std::string("custom"); },
                    },
                    kind_);
}

// ---------------------------------------------------------------------------

SymbolSequence::SymbolSequence(DriverSpec spec) : spec_(std::move(spec)) {
  if (const auto* r = std::get_if<driver::IidRandom>(&spec_.kind())) {
    rng_ = SplitMix64(r->seed);
    double acc = 0.0;
    for (double w : r->weights) {
      acc += w;
      cumulative_.push_back(acc);
    }
  } else if (std::holds_alternative<driver::DisjunctiveEnumeration>(spec_.kind())) {
    word_ = {1};
  }
}

Symbol SymbolSequence::next() {
  const Symbol s = std::visit(
      Overloaded{
          [&](const driver::Cyclic& c) {
            return c.permutation[position_ % c.permutation.size()];
          },
          [&](const driver::IidRandom&) {
            const double u = rng_.next_unit() * cumulative_.back();
            const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
            const auto idx = std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                      static_cast<std::ptrdiff_t>(cumulative_.size()) - 1);
            return static_cast<Symbol>(idx + 1);
          },
          [&](const driver::DisjunctiveEnumeration& d) {
            if (cursor_ == word_.size()) {
              // odometer increment; rolls over into the first word one longer
              std::size_t k = word_.size();
              while (k > 0 && word_[k - 1] == d.alphabet) {
                word_[k - 1] = 1;
                --k;
              }
              if (k == 0) word_.insert(word_.begin(), 1);
              else ++word_[k - 1];
              cursor_ = 0;
            }
            return word_[cursor_++];
          },
          [&](const driver::Custom& c) {
            if (position_ >= c.symbols.size()) {
              throw DriverExhausted("Custom driver exhausted after " + std::to_string(c.symbols.size()) +
                                    " symbols");
            }
            return c.symbols[position_];
          },
      },
      spec_.kind());
  ++position_;
  return s;
}

std::vector<Symbol> generate(const DriverSpec& spec, std::size_t n) {
  SymbolSequence seq(spec);
  std::vector<Symbol> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(seq.next());
  return out;
}

std::size_t disjunctive_prefix_length(int m, int alphabet) {
  require_alphabet(alphabet, "disjunctive_prefix_length");
  std::size_t total = 0;
  for (int k = 1; k <= m; ++k) total += static_cast<std::size_t>(k) * checked_power(alphabet, k);
  return total;
}

// ---------------------------------------------------------------------------

DisjunctivityReport check_disjunctive(const std::vector<Symbol>& seq, int m, int alphabet) {
  if (m < 1) throw ValidationError("check_disjunctive: window must be at least 1");
  require_alphabet(alphabet, "check_disjunctive");
  for (Symbol s : seq) require_symbol(s, alphabet, "check_disjunctive");

  DisjunctivityReport rep;
  rep.window = m;
  rep.alphabet = alphabet;
  rep.total_words = checked_power(alphabet, m);
  rep.prefix_length = seq.size();
  if (rep.total_words > kMaxWindowTable) {
    throw ValidationError("check_disjunctive: alphabet^window exceeds 2^26 words");
  }

  std::vector<bool> seen(rep.total_words, false);
  const auto base = static_cast<std::uint64_t>(alphabet);
  const std::uint64_t top = rep.total_words / base;  // N^(m-1)
  if (seq.size() >= static_cast<std::size_t>(m)) {
    // rolling base-N code of the current window
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      code = (code % top) * base + static_cast<std::uint64_t>(seq[i] - 1);
      if (i + 1 >= static_cast<std::size_t>(m)) seen[code] = true;
    }
  } else {
    rep.warning = "sequence length " + std::to_string(seq.size()) + " is shorter than window " +
                  std::to_string(m);
  }

  for (std::uint64_t code = 0; code < rep.total_words; ++code) {
    if (seen[code]) {
      ++rep.found;
      continue;
    }
    ++rep.missing_count;
    if (rep.missing.size() < DisjunctivityReport::kMaxListedMissing) {
      std::vector<Symbol> word(static_cast<std::size_t>(m));
      std::uint64_t c = code;
      for (int k = m - 1; k >= 0; --k) {
        word[static_cast<std::size_t>(k)] = static_cast<Symbol>(c % base) + 1;
        c /= base;
      }
      rep.missing.push_back(std::move(word));
    }
  }
  return rep;
}

DisjunctivityReport check_disjunctive(const std::vector<Symbol>& seq, int m) {
  Symbol hi = 1;
  for (Symbol s : seq) hi = std::max(hi, s);
  return check_disjunctive(seq, m, hi);
}

RepetitivenessReport check_repetitive(const std::vector<Symbol>& seq, int alphabet) {
  require_alphabet(alphabet, "check_repetitive");
  RepetitivenessReport rep;
  rep.alphabet = alphabet;
  rep.counts.assign(static_cast<std::size_t>(alphabet), 0);
  for (Symbol s : seq) {
    require_symbol(s, alphabet, "check_repetitive");
    ++rep.counts[static_cast<std::size_t>(s - 1)];
  }
  for (int s = 1; s <= alphabet; ++s) {
    if (rep.counts[static_cast<std::size_t>(s - 1)] == 0) rep.unseen.push_back(s);
  }
  return rep;
}

}  // namespace ifslab
