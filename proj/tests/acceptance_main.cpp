// Acceptance driver: runs the full criterion matrix at the committed sizes
// and prints one pass/fail line per criterion. Exit status is nonzero when
// any criterion fails.

#include <cstdio>
#include <cstdlib>

#include "barrierlab/suite.hpp"

int main(int argc, char** argv) {
    int cells = 256;
    if (argc > 1) cells = std::atoi(argv[1]);
    barrierlab::AcceptanceSuite suite(cells);
    const auto results = suite.run_all();
    bool all = true;
    for (const auto& r : results) {
        std::puts(barrierlab::criterion_line(r).c_str());
        all = all && r.pass;
    }
    std::puts(all ? "acceptance: all criteria passed" : "acceptance: FAILURES present");
    return all ? 0 : 1;
}
