#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mukleene/eval.hpp"
#include "mukleene/paff.hpp"
#include "mukleene/term.hpp"

namespace mukleene::corpus {

// Closed arithmetic combinators shared across the suite.
TermPtr add_term();   // x + y
TermPtr mul_term();   // x * y
TermPtr sub_term();   // max(x - y, 0)
TermPtr dist_term();  // |x - y|

// Registry holding every oracle the generated terms may mention:
//   #phi  least-zero search, total flavor
//   #ex   zero-existence test, total flavor
//   #k3   constant 3 of type (-> N N)
OracleRegistry total_registry();

// Deterministic corpus of closed ground terms. Every term evaluates to a
// value under total_registry(), and sizes stay small enough for tree builds
// and stage sweeps.
std::vector<TermPtr> term_corpus(std::size_t n, std::uint64_t seed);

// Random closed ground term over the two-type alphabet {N, (-> N N)} with
// oracle symbols f (total) and g (partial); may diverge. budget bounds the
// node count roughly.
TermPtr random_mini_term(std::mt19937_64& rng, unsigned budget);

// Piecewise-affine corpus on [0,1]. Breakpoint denominators stay <= 32 and
// values small, so every downstream quantity is an exact rational of modest
// height. The mixed flavor throws in jump and removable discontinuities.
PAff random_paff(std::mt19937_64& rng);
PAff random_continuous_paff(std::mt19937_64& rng);
std::vector<PAff> paff_corpus(std::size_t n, std::uint64_t seed);
std::vector<PAff> continuous_paff_corpus(std::size_t n, std::uint64_t seed);

}  // namespace mukleene::corpus
