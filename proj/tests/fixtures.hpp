// Shared test fixtures.
#ifndef SHOFA_TESTS_FIXTURES_HPP
#define SHOFA_TESTS_FIXTURES_HPP

#include <vector>

#include "shofa/graph.hpp"

namespace shofa::testfix {

// Five left nodes of degree 3 over four right nodes (0-indexed), shaped so
// that (1-indexed conventions in comments):
//  - support {2,4}: right nodes 1 and 3 are the leaves and peeling succeeds,
//  - {1,5}: four neighbors, exactly half of them leaves,
//  - {2,5}: the pair shares all three neighbors (leaf fraction 0, expansion
//    failure, nonempty 2-core).
inline LeftRegularGraph toy_graph() {
    return LeftRegularGraph(4, {
                                   {0, 1, 2},  // left 1
                                   {1, 2, 3},  // left 2
                                   {0, 1, 3},  // left 3
                                   {0, 1, 3},  // left 4
                                   {1, 2, 3},  // left 5
                               });
}

}  // namespace shofa::testfix

#endif
