#ifndef ADTSCHED_DAG_HPP
#define ADTSCHED_DAG_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "adtsched/adt.hpp"

namespace adtsched {

// Node kinds of the preprocessed scheduling DAG. Only Seq nodes take one
// time unit; every other kind has zero duration. SandJoin is transient:
// normalize_time produces it for SAND residues and expand_sand removes it.
enum class DagNodeKind { Seq, Null, AndJoin, OrJoin, ZeroLeaf, SandJoin };

const char* dag_node_kind_name(DagNodeKind k);

struct DagNode {
    std::string id;
    std::string origin;  // id of the source tree node this was derived from
    DagNodeKind kind = DagNodeKind::Null;
    int depth = 0;   // Seq nodes on the longest descending path, inclusive
    int level = 0;   // Seq strict ancestors (max over parents)
    int agent = 0;   // 0 = unassigned
    int slot = 0;    // 0 = unassigned; ancestors get strictly larger slots
    int zero_order = 0;  // order in which zero-duration nodes were assigned
    bool keep = true;
};

// Rooted DAG with ordered adjacency. Child order matters (SAND expansion
// and OR choices are positional). Stored by index; ids stay unique.
class Dag {
public:
    int add_node(DagNode node);
    void add_edge(int parent, int child);
    // Replaces child `old_child` of `parent` by `new_child` in place,
    // preserving the position in the child list.
    void replace_child(int parent, int old_child, int new_child);

    void set_root(int idx) { root_ = idx; }
    int root() const { return root_; }

    bool has(const std::string& id) const { return index_.count(id) != 0; }
    int index_of(const std::string& id) const;

    DagNode& node(int idx) { return nodes_[idx]; }
    const DagNode& node(int idx) const { return nodes_[idx]; }
    const std::vector<DagNode>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }

    const std::vector<int>& children(int idx) const { return children_[idx]; }
    const std::vector<int>& parents(int idx) const { return parents_[idx]; }

    // Number of Seq nodes (unit tasks).
    int seq_count() const;

    // Rebuilds the DAG keeping only the nodes for which keep_mask is true.
    // The root must be kept. Node order is preserved.
    Dag filtered(const std::vector<bool>& keep_mask) const;

    void clear_assignment();

private:
    std::vector<DagNode> nodes_;
    std::vector<std::vector<int>> children_;
    std::vector<std::vector<int>> parents_;
    std::unordered_map<std::string, int> index_;
    int root_ = -1;
};

struct DagError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CycleDetected : DagError {
    CycleDetected() : DagError("cycle detected in scheduling graph") {}
};

bool is_acyclic(const Dag& dag);

// Indices in an order where every parent precedes its children.
std::vector<int> topo_order(const Dag& dag);

// Longest root-to-bottom path counted in Seq nodes. OrJoin nodes take the
// minimum over their children, everything else the maximum.
int critical_path(const Dag& dag);

// Fingerprint for structural deduplication: ids, kinds and ordered edges.
std::string structural_key(const Dag& dag);

}  // namespace adtsched

#endif
