#ifndef ADTSCHED_PREPROCESS_HPP
#define ADTSCHED_PREPROCESS_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adtsched/adt.hpp"
#include "adtsched/dag.hpp"

namespace adtsched {

// One choice of which defences the defender operates. `active` holds the
// ids of the active defence leaves, sorted.
struct DefenceScenario {
    std::set<std::string> active;
};

// Map from OR gate id to the id of the chosen child, both in source tree
// terms.
using OrChoices = std::map<std::string, std::string>;

// All distinct defender choices. Subsets of defence leaves that induce the
// same operating/failed labelling of the defence subtree roots are
// deduplicated; the first subset in mask order (all-inactive first) is
// kept as representative.
std::vector<DefenceScenario> enumerate_defence_scenarios(const Adt& adt);

// True if the defence subtree rooted at `id` operates under the scenario:
// a leaf operates when active, And/Sand when all children operate, Or when
// at least one child does.
bool defence_operates(const Adt& adt, const std::string& id,
                      const DefenceScenario& scenario);

// Resolves all countering gates under the scenario and drops every defence
// subtree. NODEF with a failed defence becomes a childless Null; NODEF,
// CAND and SCAND whose attack remains necessary become a Null above the
// kept attack subtree; CAND/SCAND with an operating defence fail, and the
// failure travels up through And/Sand gates until an Or can drop the
// branch. Returns nullopt when the failure reaches the root (no attack is
// possible).
std::optional<Adt> apply_defences(const Adt& adt, const DefenceScenario& scenario);

// Splits every node of duration n*unit into a chain of n unit-time Seq
// nodes (<id>_n .. <id>_1, parent side at <id>_n) over a zero-duration
// residue <id>'. Residue kinds follow the source kind: Leaf becomes
// ZeroLeaf, And AndJoin, Or OrJoin, Sand SandJoin, Null stays Null.
// Requires an attack-only tree (no countering gates).
Dag normalize_time(const Adt& attack_tree, long long unit);

// Replaces every SandJoin residue S with children subtrees T_1..T_k by
// Null nodes <S>_1..<S>_k: <S>_i sits above the root of T_i and below the
// leaves of T_(i+1); <S>_k takes S's place under S's parent. The result is
// a DAG in general. Inner SANDs are expanded before outer ones.
void expand_sand(Dag& dag);

// One DAG per combination of OR choices, keeping only combinations whose
// critical path does not strictly exceed the target (the minimum critical
// path over all combinations when target_slots is empty). Ties are kept.
// Unreachable branches are dropped from each result.
std::vector<std::pair<OrChoices, Dag>> enumerate_or_variants(
    const Dag& dag, std::optional<int> target_slots);

struct Variant {
    DefenceScenario scenario;
    OrChoices or_choices;
    std::optional<Dag> dag;  // nullopt: no attack is possible (infeasible)
    bool infeasible() const { return !dag.has_value(); }
};

// Full pipeline: defence scenarios, defence application, time
// normalisation, SAND expansion, OR variant enumeration. target_units is
// in base time units and is converted to slots; empty means minimal.
// Variants whose DAGs are structurally identical are deduplicated (first
// kept). Infeasible scenarios yield one Variant without a DAG.
std::vector<Variant> preprocess(const Adt& adt,
                                std::optional<long long> target_units);

}  // namespace adtsched

#endif
