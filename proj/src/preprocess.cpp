#include "adtsched/preprocess.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace adtsched {

namespace {

bool is_counter(GateKind k) {
    return k == GateKind::Cand || k == GateKind::Nodef || k == GateKind::Scand;
}

// Defence leaves in declaration order.
std::vector<std::string> defence_leaves(const Adt& adt) {
    std::vector<std::string> out;
    for (const AdtNode& n : adt.nodes())
        if (n.kind == GateKind::Leaf && n.side == Side::Defence)
            out.push_back(n.id);
    return out;
}

// Roots of the defence subtrees: second child of every countering gate,
// in declaration order of the gates.
std::vector<std::string> defence_roots(const Adt& adt) {
    std::vector<std::string> out;
    for (const AdtNode& n : adt.nodes())
        if (is_counter(n.kind) && n.children.size() == 2)
            out.push_back(n.children[1]);
    return out;
}

}  // namespace

bool defence_operates(const Adt& adt, const std::string& id,
                      const DefenceScenario& scenario) {
    const AdtNode& n = adt.node(id);
    switch (n.kind) {
        case GateKind::Leaf:
            return scenario.active.count(id) != 0;
        case GateKind::And:
        case GateKind::Sand: {
            for (const std::string& c : n.children)
                if (!defence_operates(adt, c, scenario)) return false;
            return true;
        }
        case GateKind::Or: {
            for (const std::string& c : n.children)
                if (defence_operates(adt, c, scenario)) return true;
            return false;
        }
        default:
            throw AdtError("unsupported gate kind inside defence subtree: " + id);
    }
}

std::vector<DefenceScenario> enumerate_defence_scenarios(const Adt& adt) {
    std::vector<std::string> leaves = defence_leaves(adt);
    std::vector<std::string> roots = defence_roots(adt);
    std::vector<DefenceScenario> out;
    std::unordered_set<std::string> seen;
    // Masks in increasing order, so the all-inactive subset represents its
    // labelling class.
    for (std::uint64_t mask = 0; mask < (1ull << leaves.size()); ++mask) {
        DefenceScenario sc;
        for (std::size_t i = 0; i < leaves.size(); ++i)
            if (mask & (1ull << i)) sc.active.insert(leaves[i]);
        std::string key;
        for (const std::string& r : roots)
            key += defence_operates(adt, r, sc) ? '1' : '0';
        if (seen.insert(key).second) out.push_back(std::move(sc));
    }
    return out;
}

namespace {

// Result of resolving one attack-side subtree: either a kept subtree
// (nodes already added to `out`, root id returned) or a failure that
// travels upward.
struct Resolver {
    const Adt& src;
    const DefenceScenario& scenario;
    Adt out;

    // Returns the id of the kept subtree root, or nullopt on failure.
    std::optional<std::string> resolve(const std::string& id) {
        const AdtNode& n = src.node(id);
        switch (n.kind) {
            case GateKind::Leaf: {
                out.add_node(n);
                return id;
            }
            case GateKind::And:
            case GateKind::Sand: {
                AdtNode copy = n;
                copy.children.clear();
                for (const std::string& c : n.children) {
                    auto kept = resolve(c);
                    if (!kept) return std::nullopt;  // failure travels up
                    copy.children.push_back(*kept);
                }
                out.add_node(std::move(copy));
                return id;
            }
            case GateKind::Or: {
                AdtNode copy = n;
                copy.children.clear();
                for (const std::string& c : n.children) {
                    auto kept = resolve(c);
                    if (kept) copy.children.push_back(*kept);
                }
                if (copy.children.empty()) return std::nullopt;
                out.add_node(std::move(copy));
                return id;
            }
            case GateKind::Cand:
            case GateKind::Scand: {
                bool operating =
                    defence_operates(src, n.children[1], scenario);
                if (operating) return std::nullopt;
                auto kept = resolve(n.children[0]);
                if (!kept) return std::nullopt;
                AdtNode null_node;
                null_node.id = id;
                null_node.kind = GateKind::Null;
                null_node.duration = n.duration;
                null_node.cost = n.cost;
                null_node.children = {*kept};
                out.add_node(std::move(null_node));
                return id;
            }
            case GateKind::Nodef: {
                bool operating =
                    defence_operates(src, n.children[1], scenario);
                AdtNode null_node;
                null_node.id = id;
                null_node.kind = GateKind::Null;
                null_node.duration = n.duration;
                null_node.cost = n.cost;
                if (!operating) {
                    // Attack unnecessary: childless placeholder, subtrees gone.
                    out.add_node(std::move(null_node));
                    return id;
                }
                auto kept = resolve(n.children[0]);
                if (!kept) return std::nullopt;
                null_node.children = {*kept};
                out.add_node(std::move(null_node));
                return id;
            }
            case GateKind::Null:
                throw AdtError("NULL node in source tree: " + id);
        }
        throw AdtError("unreachable");
    }
};

}  // namespace

std::optional<Adt> apply_defences(const Adt& adt, const DefenceScenario& scenario) {
    Resolver r{adt, scenario, Adt{}};
    auto kept = r.resolve(adt.root());
    if (!kept) return std::nullopt;
    // Children resolved before a sibling failed are in `out` but orphaned;
    // keep only what the root reaches.
    std::unordered_set<std::string> reach;
    std::vector<std::string> stack{*kept};
    while (!stack.empty()) {
        std::string id = stack.back();
        stack.pop_back();
        if (!reach.insert(id).second) continue;
        for (const std::string& c : r.out.node(id).children) stack.push_back(c);
    }
    Adt pruned;
    for (const AdtNode& n : r.out.nodes())
        if (reach.count(n.id)) pruned.add_node(n);
    pruned.set_root(*kept);
    return pruned;
}

namespace {

DagNodeKind residue_kind(GateKind k) {
    switch (k) {
        case GateKind::Leaf: return DagNodeKind::ZeroLeaf;
        case GateKind::And: return DagNodeKind::AndJoin;
        case GateKind::Or: return DagNodeKind::OrJoin;
        case GateKind::Sand: return DagNodeKind::SandJoin;
        case GateKind::Null: return DagNodeKind::Null;
        default:
            throw AdtError("countering gate left in attack-only tree");
    }
}

}  // namespace

Dag normalize_time(const Adt& attack_tree, long long unit) {
    Dag dag;
    // Returns the index of the subtree's topmost node.
    std::function<int(const std::string&)> build =
        [&](const std::string& id) -> int {
        const AdtNode& n = attack_tree.node(id);
        long long units = unit > 0 ? n.duration / unit : 0;
        int top = -1, above = -1;
        for (long long i = units; i >= 1; --i) {
            DagNode seq;
            seq.id = id + "_" + std::to_string(i);
            seq.origin = id;
            seq.kind = DagNodeKind::Seq;
            int idx = dag.add_node(std::move(seq));
            if (above >= 0) dag.add_edge(above, idx);
            if (top < 0) top = idx;
            above = idx;
        }
        DagNode residue;
        residue.id = id + "'";
        residue.origin = id;
        residue.kind = residue_kind(n.kind);
        int res_idx = dag.add_node(std::move(residue));
        if (above >= 0) dag.add_edge(above, res_idx);
        if (top < 0) top = res_idx;
        for (const std::string& c : n.children)
            dag.add_edge(res_idx, build(c));
        return top;
    };
    dag.set_root(build(attack_tree.root()));
    return dag;
}

namespace {

// Nodes of the subtree reachable from `top` that have no children.
std::vector<int> subtree_leaves(const Dag& dag, int top) {
    std::vector<int> leaves, stack{top};
    std::unordered_set<int> seen;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (!seen.insert(v).second) continue;
        if (dag.children(v).empty()) leaves.push_back(v);
        for (int c : dag.children(v)) stack.push_back(c);
    }
    std::sort(leaves.begin(), leaves.end());
    return leaves;
}

void expand_one(Dag& dag, int sand, std::vector<bool>& keep);

// Expands SandJoin nodes below `v` first, then `v` itself if applicable.
void expand_below(Dag& dag, int v, std::vector<bool>& keep,
                  std::unordered_set<int>& done) {
    if (!done.insert(v).second) return;
    // Copy: expansion rewires edges below.
    std::vector<int> cs = dag.children(v);
    for (int c : cs) expand_below(dag, c, keep, done);
    if (dag.node(v).kind == DagNodeKind::SandJoin) expand_one(dag, v, keep);
}

void expand_one(Dag& dag, int sand, std::vector<bool>& keep) {
    std::vector<int> tops = dag.children(sand);
    std::vector<int> sand_parents = dag.parents(sand);
    const std::string base = dag.node(sand).id;
    const std::string origin = dag.node(sand).origin;
    std::size_t k = tops.size();

    std::vector<int> nulls;
    for (std::size_t i = 1; i <= k; ++i) {
        DagNode null_node;
        null_node.id = base + "_" + std::to_string(i);
        null_node.origin = origin;
        null_node.kind = DagNodeKind::Null;
        int idx = dag.add_node(std::move(null_node));
        keep.push_back(true);
        nulls.push_back(idx);
    }
    for (std::size_t i = 0; i + 1 < k; ++i) {
        dag.add_edge(nulls[i], tops[i]);
        for (int leaf : subtree_leaves(dag, tops[i + 1]))
            dag.add_edge(leaf, nulls[i]);
    }
    dag.add_edge(nulls[k - 1], tops[k - 1]);
    if (sand_parents.empty()) {
        dag.set_root(nulls[k - 1]);
    } else {
        for (int p : sand_parents) dag.replace_child(p, sand, nulls[k - 1]);
    }
    // Detach the SandJoin's old child edges and drop it.
    keep[sand] = false;
}

}  // namespace

void expand_sand(Dag& dag) {
    std::vector<bool> keep(dag.size(), true);
    std::unordered_set<int> done;
    expand_below(dag, dag.root(), keep, done);
    // Removed SandJoins still hold child edges; filtered() drops them along
    // with the nodes.
    bool any = false;
    for (bool k : keep) any |= !k;
    if (any) dag = dag.filtered(keep);
}

std::vector<std::pair<OrChoices, Dag>> enumerate_or_variants(
    const Dag& dag, std::optional<int> target_slots) {
    std::vector<int> ors;
    for (std::size_t i = 0; i < dag.size(); ++i)
        if (dag.node(static_cast<int>(i)).kind == DagNodeKind::OrJoin)
            ors.push_back(static_cast<int>(i));

    std::vector<std::pair<OrChoices, Dag>> all;
    std::vector<int> pick(ors.size(), 0);
    while (true) {
        OrChoices choices;
        for (std::size_t i = 0; i < ors.size(); ++i) {
            int chosen = dag.children(ors[i])[pick[i]];
            choices[dag.node(ors[i]).origin] = dag.node(chosen).origin;
        }
        // Reachability honouring the picks.
        std::vector<bool> reach(dag.size(), false);
        std::vector<int> stack{dag.root()};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (reach[v]) continue;
            reach[v] = true;
            if (dag.node(v).kind == DagNodeKind::OrJoin) {
                auto it = std::find(ors.begin(), ors.end(), v);
                int chosen = dag.children(v)[pick[it - ors.begin()]];
                stack.push_back(chosen);
            } else {
                for (int c : dag.children(v)) stack.push_back(c);
            }
        }
        // Drop unreached nodes and the unpicked OR edges.
        Dag variant;
        std::vector<int> remap(dag.size(), -1);
        for (std::size_t i = 0; i < dag.size(); ++i)
            if (reach[i])
                remap[i] = variant.add_node(dag.node(static_cast<int>(i)));
        for (std::size_t i = 0; i < dag.size(); ++i) {
            if (!reach[i]) continue;
            int v = static_cast<int>(i);
            if (dag.node(v).kind == DagNodeKind::OrJoin) {
                auto it = std::find(ors.begin(), ors.end(), v);
                int chosen = dag.children(v)[pick[it - ors.begin()]];
                variant.add_edge(remap[v], remap[chosen]);
            } else {
                for (int c : dag.children(v))
                    if (reach[c]) variant.add_edge(remap[v], remap[c]);
            }
        }
        variant.set_root(remap[dag.root()]);
        all.emplace_back(std::move(choices), std::move(variant));

        // Next combination.
        std::size_t i = 0;
        for (; i < ors.size(); ++i) {
            if (++pick[i] < static_cast<int>(dag.children(ors[i]).size())) break;
            pick[i] = 0;
        }
        if (i == ors.size()) break;
    }

    int min_cp = 0;
    bool first = true;
    std::vector<int> cps;
    for (auto& [choices, variant] : all) {
        int cp = critical_path(variant);
        cps.push_back(cp);
        if (first || cp < min_cp) min_cp = cp;
        first = false;
    }
    // A target below every variant's critical path would keep nothing;
    // the minimum always survives.
    int target = target_slots ? std::max(*target_slots, min_cp) : min_cp;
    std::vector<std::pair<OrChoices, Dag>> out;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (cps[i] <= target) out.push_back(std::move(all[i]));
    return out;
}

std::vector<Variant> preprocess(const Adt& adt,
                                std::optional<long long> target_units) {
    long long unit = time_unit(adt);
    std::optional<int> target_slots;
    if (target_units)
        target_slots = static_cast<int>(*target_units / unit);

    std::vector<Variant> out;
    std::unordered_set<std::string> seen_dags;
    for (const DefenceScenario& scenario : enumerate_defence_scenarios(adt)) {
        std::optional<Adt> attack = apply_defences(adt, scenario);
        if (!attack) {
            out.push_back({scenario, {}, std::nullopt});
            continue;
        }
        Dag dag = normalize_time(*attack, unit);
        expand_sand(dag);
        for (auto& [choices, variant] :
             enumerate_or_variants(dag, target_slots)) {
            if (!seen_dags.insert(structural_key(variant)).second) continue;
            out.push_back({scenario, std::move(choices), std::move(variant)});
        }
    }
    return out;
}

}  // namespace adtsched
