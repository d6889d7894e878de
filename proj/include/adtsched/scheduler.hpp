#ifndef ADTSCHED_SCHEDULER_HPP
#define ADTSCHED_SCHEDULER_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adtsched/dag.hpp"
#include "adtsched/preprocess.hpp"

namespace adtsched {

struct ScheduleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fills in DagNode::depth: the number of Seq nodes on the longest
// descending path from the node, counting the node itself when it is Seq.
// OrJoin nodes take the minimum over their children and mark the children
// not realising it (and their exclusive descendants) keep = false.
void compute_depth(Dag& dag);

// Drops the nodes pruned by compute_depth (keep = false and unreachable).
Dag prune_unkept(const Dag& dag);

// Fills in DagNode::level: the number of Seq strict ancestors, maximised
// over parents for shared nodes. The root has level 0.
void compute_level(Dag& dag);

struct Bounds {
    int slots = 0;  // depth of the root = critical path
    int low = 0;    // exclusive lower bound: ceil(n / slots) - 1
    int up = 0;     // inclusive upper bound: widest level
};

// Requires compute_depth and compute_level to have run and seq_count > 0.
Bounds compute_bounds(const Dag& dag);

// List scheduling: walks levels 0,1,... while the slot counts down from
// `slots` to 1. Ready Seq nodes are assigned by descending depth (ties by
// id) to agents 1..agents, skipping nodes with an ancestor already placed
// in the current slot; leftovers carry over. A ready node whose depth
// exceeds the remaining slots can never finish, so the attempt is
// abandoned. Returns the number of Seq nodes left unassigned (0 on
// success). Zero-duration nodes are not touched.
int schedule(Dag& dag, int slots, int agents);

// Swaps same-slot assignments so that a Seq node whose Seq parent was
// served by a different agent moves to that agent (a permutation of the
// slot's agents; assignments are never dropped).
void reshuffle_slot(Dag& dag, int slot, int num_agents);

struct UnassignedRemainder : ScheduleError {
    UnassignedRemainder() : ScheduleError("zero-duration nodes left unassigned") {}
};

// Co-locates every zero-duration node with an adjacent assigned node:
// first the residue under its Seq chain, then fixpoint passes where
// Null/OrJoin/ZeroLeaf nodes take their assigned child's pair (or the
// minimum-slot parent's pair when childless or nothing below has depth)
// and AndJoin nodes take the pair of the child occurring last, i.e. the
// assigned child with the minimum slot index. Records zero_order.
void zero_assign(Dag& dag);

struct Assignment {
    int agent = 0;
    int slot = 0;
    friend bool operator==(const Assignment& a, const Assignment& b) {
        return a.agent == b.agent && a.slot == b.slot;
    }
};

struct Schedule {
    std::map<std::string, Assignment> assignment;  // all nodes, by id
    int agents_used = 0;
    int slots = 0;
    long long makespan = 0;  // slots * unit, in base time units
};

// Minimal-agent schedule for one preprocessed DAG: bounds, then bisection
// on the agent count using schedule() feasibility, then a final run at the
// found minimum and zero_assign. Empty DAGs (no Seq node) give a zero
// schedule. The DAG keeps the final assignment.
Schedule min_schedule_dag(Dag& dag, long long unit);

struct VariantSchedule {
    Variant variant;                   // holds the scheduled DAG
    std::optional<Schedule> schedule;  // nullopt: no attack is possible
    std::optional<Bounds> bounds;
};

// Runs min_schedule_dag over every feasible variant. `jobs` > 1 schedules
// variants concurrently; the output order is the input order either way.
std::vector<VariantSchedule> min_schedule(std::vector<Variant> variants,
                                          long long unit, int jobs = 1);

}  // namespace adtsched

#endif
