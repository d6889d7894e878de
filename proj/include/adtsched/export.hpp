#ifndef ADTSCHED_EXPORT_HPP
#define ADTSCHED_EXPORT_HPP

#include <string>
#include <vector>

#include "adtsched/adt.hpp"
#include "adtsched/dag.hpp"
#include "adtsched/oracle.hpp"
#include "adtsched/scheduler.hpp"

namespace adtsched {

struct DotOptions {
    bool show_depth_level = false;  // label "id d=.. l=.."
    bool show_assignment = false;   // label "id a=.. s=.."
    bool color_by_agent = false;
};

// Graphviz rendering of the source tree: attacks red, defences green,
// gate kind in the label.
std::string to_dot(const Adt& adt);

// Graphviz rendering of a preprocessed DAG. Node shapes encode the kind:
// Seq diamond, Null trapezium, AndJoin triangle, OrJoin invtriangle,
// ZeroLeaf ellipse.
std::string to_dot(const Dag& dag, const DotOptions& opts = {});

// One row per slot, highest first; one column per agent. A cell lists the
// Seq node followed by the zero-duration nodes co-located with it, space
// separated. Header: slot,agent_1,...,agent_<m>.
std::string to_schedule_csv(const Dag& dag, const Schedule& schedule);

// JSON report over all variants: scenario, or choices, status, makespan,
// agent count, costs and the full assignment. Keys are sorted; output is
// deterministic.
std::string to_json_report(const Adt& adt, long long unit,
                           const std::vector<VariantSchedule>& results);

std::string to_json_report(const VerificationReport& report);

}  // namespace adtsched

#endif
