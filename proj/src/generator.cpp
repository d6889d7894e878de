#include "adtsched/generator.hpp"

#include <deque>
#include <sstream>

#include "adtsched/parser.hpp"

namespace adtsched {

Adt generate_tree(const GeneratorParams& p) {
    if (p.depth < 1 || p.width < 1 || p.children < 2 || p.nodes < 2)
        throw UnsatisfiableParams("need depth >= 1, width >= 1, children >= 2, nodes >= 2");
    if (p.width > p.children)
        throw UnsatisfiableParams("width exceeds the fan-out cap");
    if (p.nodes < p.depth + p.width)
        throw UnsatisfiableParams("node budget below depth + width");

    Adt adt;
    struct Gate {
        std::string id;
        int used = 0;  // children attached so far
    };

    // Spine of AND gates, then the deep leaves under the last one.
    std::vector<std::string> spine;
    for (int d = 0; d < p.depth; ++d) {
        AdtNode g;
        g.id = "g" + std::to_string(d);
        g.kind = GateKind::And;
        g.duration = 1;
        adt.add_node(g);
        spine.push_back(g.id);
        if (d > 0) adt.node(spine[d - 1]).children.push_back(g.id);
    }
    adt.set_root(spine.front());
    for (int w = 0; w < p.width; ++w) {
        AdtNode leaf;
        leaf.id = "w" + std::to_string(w);
        leaf.kind = GateKind::Leaf;
        leaf.duration = w == 0 ? p.width - 1 : 1;
        adt.add_node(leaf);
        adt.node(spine.back()).children.push_back(leaf.id);
    }

    // Fillers attached breadth-first: leaves while the open capacity can
    // still absorb the rest, extra AND gates otherwise.
    std::deque<Gate> open;
    for (int d = 0; d < p.depth; ++d)
        open.push_back(
            {spine[d], static_cast<int>(adt.node(spine[d]).children.size())});
    long long capacity = 0;
    for (const Gate& g : open) capacity += p.children - g.used;
    int remaining = p.nodes - p.depth - p.width;
    int next_leaf = 0, next_gate = p.depth;
    while (remaining > 0) {
        while (!open.empty() && open.front().used >= p.children)
            open.pop_front();
        if (open.empty())
            throw UnsatisfiableParams("no gate can take more children");
        Gate& host = open.front();
        bool need_gate = remaining > capacity;
        if (need_gate && remaining < 3)
            throw UnsatisfiableParams(
                "node budget leaves a gate without two children");
        AdtNode n;
        if (need_gate) {
            n.id = "g" + std::to_string(next_gate++);
            n.kind = GateKind::And;
            n.duration = 1;
            capacity += p.children - 1;
        } else {
            n.id = "n" + std::to_string(next_leaf++);
            n.kind = GateKind::Leaf;
            n.duration = 1;
            capacity -= 1;
        }
        adt.node(host.id).children.push_back(n.id);
        ++host.used;
        if (need_gate) open.push_back({n.id, 0});
        adt.add_node(std::move(n));
        --remaining;
    }

    // Every gate needs at least two children to be well formed; the only
    // tolerated exception is the documented degenerate depth=1, width=1
    // tree, which is a single gate over one leaf.
    for (const AdtNode& n : adt.nodes())
        if (n.kind != GateKind::Leaf && n.children.size() < 2 &&
            !(p.depth == 1 && p.width == 1))
            throw UnsatisfiableParams("gate '" + n.id +
                                      "' ends up with fewer than 2 children");
    return adt;
}

std::string generate_tree_text(const GeneratorParams& p) {
    Adt adt = generate_tree(p);
    std::ostringstream out;
    out << "# generated tree: depth=" << p.depth << " width=" << p.width
        << " children=" << p.children << " nodes=" << p.nodes
        << " seed=" << p.seed << "\n";
    out << serialize(adt);
    return out.str();
}

}  // namespace adtsched
