#pragma once

#include <cstdint>
#include <iosfwd>

namespace gsim {

// Desk-scale run of the oracle suites on seeded synthetic data. Prints one
// line per suite and returns the number of failed suites.
int run_selftest(std::ostream& out, std::uint64_t seed);

}  // namespace gsim
