#pragma once

#include <cstdint>

#include "zoneseg/corpus.hpp"

namespace zoneseg {

// Surface lexicon family used by the template grammar. Both domains emit the
// same zones in the same order but draw greetings, closings, quote markers,
// client signatures and prose from disjoint word lists.
enum class SyntheticDomain { kA, kB };

// Builds n_emails template emails labeled with gmane15 zones, then maps them
// onto taxonomy when it is not gmane15 (through gmane15's mapping table).
// Deterministic in seed.
Corpus generate_synthetic_corpus(int n_emails, const Taxonomy& taxonomy,
                                 std::uint64_t seed,
                                 SyntheticDomain domain = SyntheticDomain::kA);

}  // namespace zoneseg
