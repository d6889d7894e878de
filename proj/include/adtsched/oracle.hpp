#ifndef ADTSCHED_ORACLE_HPP
#define ADTSCHED_ORACLE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adtsched/adt.hpp"
#include "adtsched/dag.hpp"
#include "adtsched/preprocess.hpp"

namespace adtsched {

enum class OutcomeStatus { Succeed, Fail };

// One terminal configuration of the game: a defence labelling plus one
// choice per attack-side OR gate, evaluated under the gate semantics
// (AND: max of child times, agents added; SAND: times added, agents
// maxed; OR: the chosen child; countering gates fold the defence in with
// zero attack-side resources). Failed outcomes carry no attack data.
struct Outcome {
    OutcomeStatus status = OutcomeStatus::Fail;
    long long acctime = 0;
    long long acccost = 0;
    int agents_upper = 0;
    std::set<std::string> attacks_used;
    std::set<std::string> defences_active;
    OrChoices or_choices;
};

bool operator==(const Outcome& a, const Outcome& b);

// Cross product of the deduplicated defence labellings and the OR
// choices, with identical outcomes deduplicated. Deterministic order.
std::vector<Outcome> enumerate_outcomes(const Adt& adt);

// Minimum acctime over succeeding outcomes; nullopt when every outcome
// fails.
std::optional<long long> min_attack_time(const Adt& adt);

struct OracleBudgetExceeded : std::runtime_error {
    OracleBudgetExceeded() : std::runtime_error("oracle search budget exceeded") {}
};

struct TraceItem {
    std::string node;
    int start_slot = 0;
    int end_slot = 0;
};

// trace[a] is agent a+1's work, ordered by slot.
using AgentTrace = std::vector<std::vector<TraceItem>>;

struct BruteForceResult {
    int agents = 0;
    AgentTrace trace;
    bool feasible = true;
};

struct SearchOptions {
    std::uint64_t budget = 10'000'000;  // expansion budget before giving up
    // Busy mode: a slot always runs min(agents, ready) tasks. Off by
    // default; the unrestricted search also explores idling.
    bool busy_only = false;
};

// Independent exhaustive check of the agent minimum: for m = 1..n, search
// over per-slot selections of at most m ready unit tasks (a task is ready
// when every Seq node below it is done), memoised on (done set, slot).
// The first feasible m is returned with a witness trace. Throws
// OracleBudgetExceeded when the budget runs out.
BruteForceResult brute_force_min_agents(const Dag& dag, int slots,
                                        const SearchOptions& opts = {});

struct VerifyEntry {
    DefenceScenario scenario;
    OrChoices or_choices;
    bool infeasible = false;
    long long makespan = 0;
    int agents_used = 0;
    int brute_agents = 0;
    int agents_upper = 0;
    bool ok = true;
    std::vector<std::string> mismatches;
};

struct VerificationReport {
    bool ok = true;
    bool timed_out = false;
    std::optional<long long> oracle_min_time;
    std::optional<long long> scheduler_min_time;
    std::vector<VerifyEntry> entries;
    std::vector<std::string> mismatches;  // cross-variant findings
};

// Cross-validates the scheduler pipeline against the oracle on one tree:
// per feasible variant the makespan must equal the fastest succeeding
// outcome of its scenario, the agent count must match the exhaustive
// minimum and stay within the outcome's upper bound; infeasible variants
// must line up with scenarios that cannot succeed; the global minima must
// agree.
VerificationReport verify(const Adt& adt, const SearchOptions& opts = {});

}  // namespace adtsched

#endif
