#include "adtsched/adt.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

namespace adtsched {

const char* gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::Leaf: return "LEAF";
        case GateKind::And: return "AND";
        case GateKind::Or: return "OR";
        case GateKind::Sand: return "SAND";
        case GateKind::Cand: return "CAND";
        case GateKind::Nodef: return "NODEF";
        case GateKind::Scand: return "SCAND";
        case GateKind::Null: return "NULL";
    }
    return "?";
}

const char* violation_rule_name(ViolationRule r) {
    switch (r) {
        case ViolationRule::BadId: return "BadId";
        case ViolationRule::UnknownRoot: return "UnknownRoot";
        case ViolationRule::UnknownChild: return "UnknownChild";
        case ViolationRule::DuplicateChild: return "DuplicateChild";
        case ViolationRule::LeafWithChildren: return "LeafWithChildren";
        case ViolationRule::ArityViolation: return "ArityViolation";
        case ViolationRule::MultipleParents: return "MultipleParents";
        case ViolationRule::UnreachableNode: return "UnreachableNode";
        case ViolationRule::Cycle: return "Cycle";
        case ViolationRule::SideMismatch: return "SideMismatch";
        case ViolationRule::MixedSides: return "MixedSides";
        case ViolationRule::CounterInDefence: return "CounterInDefence";
    }
    return "?";
}

bool Adt::add_node(AdtNode node) {
    if (index_.count(node.id)) return false;
    index_.emplace(node.id, nodes_.size());
    nodes_.push_back(std::move(node));
    return true;
}

const AdtNode& Adt::node(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw AdtError("unknown node id: " + id);
    return nodes_[it->second];
}

AdtNode& Adt::node(const std::string& id) {
    auto it = index_.find(id);
    if (it == index_.end()) throw AdtError("unknown node id: " + id);
    return nodes_[it->second];
}

bool valid_node_id(const std::string& id) {
    if (id.empty()) return false;
    auto head = [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
    };
    auto tail = [&](char c) {
        return head(c) || (c >= '0' && c <= '9') || c == '\'';
    };
    if (!head(id[0])) return false;
    return std::all_of(id.begin() + 1, id.end(), tail);
}

namespace {

bool is_counter(GateKind k) {
    return k == GateKind::Cand || k == GateKind::Nodef || k == GateKind::Scand;
}

// Walks from the root setting sides; returns false on unresolvable child.
bool assign_sides(Adt& adt, const std::string& id, Side side,
                  std::unordered_set<std::string>& seen) {
    if (!adt.has(id) || !seen.insert(id).second) return adt.has(id);
    AdtNode& n = adt.node(id);
    n.side = side;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        Side child_side = side;
        if (is_counter(n.kind) && i == 1) child_side = Side::Defence;
        if (!assign_sides(adt, n.children[i], child_side, seen)) return false;
    }
    return true;
}

}  // namespace

void derive_sides(Adt& adt) {
    std::unordered_set<std::string> seen;
    if (!adt.root().empty() && adt.has(adt.root()))
        assign_sides(adt, adt.root(), Side::Attack, seen);
}

std::vector<Violation> validate(const Adt& adt) {
    std::vector<Violation> out;
    auto flag = [&](const std::string& node, ViolationRule rule, std::string msg) {
        out.push_back({node, rule, std::move(msg)});
    };

    if (adt.root().empty() || !adt.has(adt.root()))
        flag(adt.root(), ViolationRule::UnknownRoot,
             "root '" + adt.root() + "' is not a declared node");

    std::unordered_map<std::string, int> parent_count;
    bool refs_ok = true;
    for (const AdtNode& n : adt.nodes()) {
        if (!valid_node_id(n.id))
            flag(n.id, ViolationRule::BadId, "invalid node id '" + n.id + "'");
        std::set<std::string> seen_children;
        for (const std::string& c : n.children) {
            if (!adt.has(c)) {
                flag(n.id, ViolationRule::UnknownChild,
                     "child '" + c + "' of '" + n.id + "' is not declared");
                refs_ok = false;
            } else {
                ++parent_count[c];
            }
            if (!seen_children.insert(c).second)
                flag(n.id, ViolationRule::DuplicateChild,
                     "child '" + c + "' repeated under '" + n.id + "'");
        }
        std::size_t arity = n.children.size();
        switch (n.kind) {
            case GateKind::Leaf:
                if (arity != 0)
                    flag(n.id, ViolationRule::LeafWithChildren,
                         "leaf '" + n.id + "' has children");
                break;
            case GateKind::And:
            case GateKind::Or:
            case GateKind::Sand:
                if (arity < 2)
                    flag(n.id, ViolationRule::ArityViolation,
                         std::string(gate_kind_name(n.kind)) + " gate '" + n.id +
                             "' needs at least 2 children, has " +
                             std::to_string(arity));
                break;
            case GateKind::Cand:
            case GateKind::Nodef:
            case GateKind::Scand:
                if (arity != 2)
                    flag(n.id, ViolationRule::ArityViolation,
                         std::string(gate_kind_name(n.kind)) + " gate '" + n.id +
                             "' needs exactly 2 children (attack, defence), has " +
                             std::to_string(arity));
                break;
            case GateKind::Null:
                flag(n.id, ViolationRule::BadId,
                     "node '" + n.id + "' has reserved kind NULL");
                break;
        }
        if (n.duration < 0 || n.cost < 0)
            flag(n.id, ViolationRule::BadId,
                 "node '" + n.id + "' has a negative time or cost");
    }

    for (const auto& [id, count] : parent_count)
        if (count > 1)
            flag(id, ViolationRule::MultipleParents,
                 "node '" + id + "' has " + std::to_string(count) + " parents");
    if (adt.has(adt.root()) && parent_count.count(adt.root()))
        flag(adt.root(), ViolationRule::MultipleParents,
             "root '" + adt.root() + "' is referenced as a child");

    if (!refs_ok || adt.root().empty() || !adt.has(adt.root())) return out;

    // Reachability and cycle check from the root.
    std::unordered_map<std::string, int> state;  // 0 new, 1 open, 2 done
    bool cycle = false;
    std::vector<std::pair<std::string, std::size_t>> stack;
    stack.emplace_back(adt.root(), 0);
    state[adt.root()] = 1;
    while (!stack.empty()) {
        auto& [id, next] = stack.back();
        const AdtNode& n = adt.node(id);
        if (next < n.children.size()) {
            const std::string& c = n.children[next++];
            int& st = state[c];
            if (st == 1) {
                if (!cycle) {
                    flag(c, ViolationRule::Cycle,
                         "node '" + c + "' is its own ancestor");
                    cycle = true;
                }
            } else if (st == 0) {
                st = 1;
                stack.emplace_back(c, 0);
            }
        } else {
            state[id] = 2;
            stack.pop_back();
        }
    }
    if (cycle) return out;

    for (const AdtNode& n : adt.nodes())
        if (!state.count(n.id))
            flag(n.id, ViolationRule::UnreachableNode,
                 "node '" + n.id + "' is not reachable from the root");

    // Side checks against the sides derived from the root.
    Adt derived = adt;
    derive_sides(derived);
    for (const AdtNode& n : adt.nodes()) {
        if (!state.count(n.id)) continue;
        const AdtNode& d = derived.node(n.id);
        if (n.kind == GateKind::Leaf && n.side != d.side)
            flag(n.id, ViolationRule::SideMismatch,
                 std::string("leaf '") + n.id + "' is declared " +
                     (n.side == Side::Attack ? "attack" : "defence") +
                     " but sits on the " +
                     (d.side == Side::Attack ? "attack" : "defence") + " side");
        if (is_counter(n.kind) && d.side == Side::Defence)
            flag(n.id, ViolationRule::CounterInDefence,
                 "countering gate '" + n.id + "' inside a defence subtree");
    }
    return out;
}

long long time_unit(const Adt& adt) {
    long long g = 0;
    for (const AdtNode& n : adt.nodes())
        if (n.duration > 0) g = std::gcd(g, n.duration);
    if (g == 0) throw AllZeroDurations();
    return g;
}

bool same_structure(const Adt& a, const Adt& b) {
    if (a.root() != b.root() || a.size() != b.size()) return false;
    for (const AdtNode& n : a.nodes()) {
        if (!b.has(n.id)) return false;
        const AdtNode& m = b.node(n.id);
        if (n.kind != m.kind || n.side != m.side || n.duration != m.duration ||
            n.cost != m.cost || n.children != m.children ||
            n.condition != m.condition)
            return false;
    }
    return true;
}

}  // namespace adtsched
