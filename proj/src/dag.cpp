#include "adtsched/dag.hpp"

#include <algorithm>
#include <sstream>

namespace adtsched {

const char* dag_node_kind_name(DagNodeKind k) {
    switch (k) {
        case DagNodeKind::Seq: return "Seq";
        case DagNodeKind::Null: return "Null";
        case DagNodeKind::AndJoin: return "AndJoin";
        case DagNodeKind::OrJoin: return "OrJoin";
        case DagNodeKind::ZeroLeaf: return "ZeroLeaf";
        case DagNodeKind::SandJoin: return "SandJoin";
    }
    return "?";
}

int Dag::add_node(DagNode node) {
    if (index_.count(node.id))
        throw DagError("duplicate dag node id: " + node.id);
    int idx = static_cast<int>(nodes_.size());
    index_.emplace(node.id, idx);
    nodes_.push_back(std::move(node));
    children_.emplace_back();
    parents_.emplace_back();
    return idx;
}

void Dag::add_edge(int parent, int child) {
    children_[parent].push_back(child);
    parents_[child].push_back(parent);
}

void Dag::replace_child(int parent, int old_child, int new_child) {
    auto& cs = children_[parent];
    auto it = std::find(cs.begin(), cs.end(), old_child);
    if (it == cs.end()) throw DagError("replace_child: edge not found");
    *it = new_child;
    auto& ps = parents_[old_child];
    ps.erase(std::find(ps.begin(), ps.end(), parent));
    parents_[new_child].push_back(parent);
}

int Dag::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw DagError("unknown dag node id: " + id);
    return it->second;
}

int Dag::seq_count() const {
    int n = 0;
    for (const DagNode& node : nodes_)
        if (node.kind == DagNodeKind::Seq) ++n;
    return n;
}

Dag Dag::filtered(const std::vector<bool>& keep_mask) const {
    Dag out;
    std::vector<int> remap(nodes_.size(), -1);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (keep_mask[i]) remap[i] = out.add_node(nodes_[i]);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!keep_mask[i]) continue;
        for (int c : children_[i])
            if (keep_mask[c]) out.add_edge(remap[i], remap[c]);
    }
    if (root_ < 0 || !keep_mask[root_])
        throw DagError("filtered: root was dropped");
    out.set_root(remap[root_]);
    return out;
}

void Dag::clear_assignment() {
    for (DagNode& n : nodes_) {
        n.agent = 0;
        n.slot = 0;
        n.zero_order = 0;
    }
}

std::vector<int> topo_order(const Dag& dag) {
    std::size_t n = dag.size();
    std::vector<int> indeg(n, 0), order;
    order.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        indeg[i] = static_cast<int>(dag.parents(static_cast<int>(i)).size());
    std::vector<int> queue;
    for (std::size_t i = 0; i < n; ++i)
        if (indeg[i] == 0) queue.push_back(static_cast<int>(i));
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        order.push_back(v);
        for (int c : dag.children(v))
            if (--indeg[c] == 0) queue.push_back(c);
    }
    if (order.size() != n) throw CycleDetected();
    return order;
}

bool is_acyclic(const Dag& dag) {
    try {
        topo_order(dag);
        return true;
    } catch (const CycleDetected&) {
        return false;
    }
}

int critical_path(const Dag& dag) {
    if (dag.root() < 0) return 0;
    std::vector<int> order = topo_order(dag);
    std::vector<int> depth(dag.size(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        const DagNode& node = dag.node(v);
        int best = 0;
        bool first = true;
        for (int c : dag.children(v)) {
            if (node.kind == DagNodeKind::OrJoin)
                best = first ? depth[c] : std::min(best, depth[c]);
            else
                best = std::max(best, depth[c]);
            first = false;
        }
        depth[v] = best + (node.kind == DagNodeKind::Seq ? 1 : 0);
    }
    return depth[dag.root()];
}

std::string structural_key(const Dag& dag) {
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < dag.size(); ++i) {
        const DagNode& n = dag.node(static_cast<int>(i));
        std::ostringstream line;
        line << n.id << '/' << dag_node_kind_name(n.kind) << ':';
        for (int c : dag.children(static_cast<int>(i)))
            line << dag.node(c).id << ',';
        lines.push_back(line.str());
    }
    std::sort(lines.begin(), lines.end());
    std::string out = dag.root() >= 0 ? dag.node(dag.root()).id : "";
    out += ';';
    for (const std::string& l : lines) {
        out += l;
        out += ';';
    }
    return out;
}

}  // namespace adtsched
