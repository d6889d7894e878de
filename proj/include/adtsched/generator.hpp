#ifndef ADTSCHED_GENERATOR_HPP
#define ADTSCHED_GENERATOR_HPP

#include <cstdint>
#include <string>

#include "adtsched/adt.hpp"

namespace adtsched {

struct UnsatisfiableParams : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeneratorParams {
    int depth = 1;     // AND gates on the spine from root to the deep leaves
    int width = 1;     // leaves under the deepest gate
    int children = 2;  // fan-out cap per gate
    int nodes = 2;     // total node count, gates included
    std::uint64_t seed = 0;
};

// Deterministic benchmark trees: a spine of AND gates `depth` long, the
// deepest one holding `width` leaves, filler nodes attached breadth-first
// until `nodes` nodes exist (new AND gates are introduced when the open
// capacity would run out). Every node has time 1 except the first deep
// leaf, which gets width - 1. The same parameters always give the same
// tree. Throws UnsatisfiableParams when the counts cannot work out.
Adt generate_tree(const GeneratorParams& params);

// generate_tree followed by serialize, with a parameter comment header.
// Byte-identical for identical parameters.
std::string generate_tree_text(const GeneratorParams& params);

}  // namespace adtsched

#endif
