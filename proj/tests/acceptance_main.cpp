// Acceptance suite binary: runs every acceptance criterion at its stated
// tolerance (all exact) and prints one pass/fail line per criterion.
// Exit code 0 iff everything passed.  `qtrick selftest` runs the same suite.

#include <iostream>

#include "qtrick/selftest.hpp"

int main() {
    return qtrick::run_acceptance_main(std::cout, std::cerr, qtrick::default_jobs());
}
