#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cctree/ast.hpp"
#include "cctree/features.hpp"

namespace cctree::synth {

// Arbitrary well-formed tree with at most `max_nodes` nodes, drawn from
// small kind/token pools so duplicate subtrees (and therefore key collapses
// under rank-mode none) actually occur.
AstNode random_tree(std::mt19937_64& rng, std::size_t max_nodes);

// Bare Java method sources whose method ASTs have 30 to 80 nodes.
std::vector<std::string> method_corpus(std::uint64_t seed, std::size_t count);

// Change records that differ by exactly one statement: either one inserted
// or one integer literal modified. Labels are all false; these records
// exercise size and invariant properties, not classification.
std::vector<ChangeRecord> single_edit_dataset(std::uint64_t seed, std::size_t count);

// Classification dataset with a planted structural pattern. Positives
// (count/5 of the records) remove a null-guard wrapped around a method
// call. Negatives split into guard removals around an assignment (which
// leave the same metric deltas as positives), pure statement insertions,
// and literal edits.
std::vector<ChangeRecord> planted_dataset(std::uint64_t seed, std::size_t count);

// `2 * per_cluster` documents over two disjoint 20-term vocabularies; the
// first `per_cluster` documents use the first vocabulary. Lengths are drawn
// from [min_len, max_len].
std::vector<TokenSequence> two_cluster_corpus(std::uint64_t seed, std::size_t per_cluster,
                                              std::size_t min_len = 30,
                                              std::size_t max_len = 60);

}  // namespace cctree::synth
