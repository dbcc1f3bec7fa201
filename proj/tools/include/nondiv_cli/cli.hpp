#pragma once

#include <cstdint>
#include <iosfwd>

#include "nondiv/lattice_space.hpp"

namespace nondiv::cli {

enum ExitCode : int {
  kOk = 0,
  kDisagree = 1,
  kInvalidInput = 2,
  kBudgetExceeded = 3,
  kMaxSteps = 4,
  kIncompleteSearch = 5,
};

/// Entry point behind the `nondiv` executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Random unimodular lattice used when --seed replaces --lattice: a product
/// of elementary rational shears and a signed permutation.
UnimodularLattice random_lattice(std::size_t n, std::uint64_t seed);

}  // namespace nondiv::cli
