#include "adtsched/export.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace adtsched {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

const char* agent_color(int agent) {
    static const char* palette[] = {"lightblue",  "lightsalmon", "palegreen",
                                    "gold",       "plum",        "khaki",
                                    "lightcyan",  "mistyrose"};
    return palette[(agent - 1) % 8];
}

}  // namespace

std::string to_dot(const Adt& adt) {
    std::ostringstream out;
    out << "digraph adt {\n";
    for (const AdtNode& n : adt.nodes()) {
        std::string label = n.id;
        if (n.kind != GateKind::Leaf)
            label += std::string("\\n") + gate_kind_name(n.kind);
        if (n.duration) label += "\\nt=" + std::to_string(n.duration);
        if (n.cost) label += "\\nc=" + std::to_string(n.cost);
        out << "  " << quote(n.id) << " [label=" << quote(label)
            << (n.kind == GateKind::Leaf ? ", shape=ellipse" : ", shape=box")
            << ", color=" << (n.side == Side::Attack ? "red" : "green")
            << "];\n";
    }
    for (const AdtNode& n : adt.nodes())
        for (const std::string& c : n.children)
            out << "  " << quote(n.id) << " -> " << quote(c) << ";\n";
    out << "}\n";
    return out.str();
}

std::string to_dot(const Dag& dag, const DotOptions& opts) {
    std::ostringstream out;
    out << "digraph dag {\n";
    for (std::size_t i = 0; i < dag.size(); ++i) {
        const DagNode& n = dag.node(static_cast<int>(i));
        std::string shape;
        switch (n.kind) {
            case DagNodeKind::Seq: shape = "diamond"; break;
            case DagNodeKind::Null: shape = "trapezium"; break;
            case DagNodeKind::AndJoin: shape = "triangle"; break;
            case DagNodeKind::OrJoin: shape = "invtriangle"; break;
            case DagNodeKind::ZeroLeaf: shape = "ellipse"; break;
            case DagNodeKind::SandJoin: shape = "house"; break;
        }
        std::string label = n.id;
        if (opts.show_depth_level)
            label += " d=" + std::to_string(n.depth) +
                     " l=" + std::to_string(n.level);
        if (opts.show_assignment)
            label += " a=" + std::to_string(n.agent) +
                     " s=" + std::to_string(n.slot);
        out << "  " << quote(n.id) << " [label=" << quote(label)
            << ", shape=" << shape;
        if (opts.color_by_agent && n.agent > 0)
            out << ", style=filled, fillcolor=" << agent_color(n.agent);
        out << "];\n";
    }
    for (std::size_t i = 0; i < dag.size(); ++i)
        for (int c : dag.children(static_cast<int>(i)))
            out << "  " << quote(dag.node(static_cast<int>(i)).id) << " -> "
                << quote(dag.node(c).id) << ";\n";
    out << "}\n";
    return out.str();
}

std::string to_schedule_csv(const Dag& dag, const Schedule& schedule) {
    // cell[slot][agent] -> Seq node first, zero nodes in assignment order.
    struct Cell {
        std::string seq;
        std::vector<std::pair<int, std::string>> zeros;  // (zero_order, id)
    };
    std::vector<std::vector<Cell>> grid(
        schedule.slots + 1, std::vector<Cell>(schedule.agents_used + 1));
    for (const DagNode& n : dag.nodes()) {
        if (n.agent < 1 || n.slot < 1) continue;
        Cell& cell = grid[n.slot][n.agent];
        if (n.kind == DagNodeKind::Seq)
            cell.seq = n.id;
        else
            cell.zeros.emplace_back(n.zero_order, n.id);
    }
    std::ostringstream out;
    out << "slot";
    for (int a = 1; a <= schedule.agents_used; ++a) out << ",agent_" << a;
    out << '\n';
    for (int slot = schedule.slots; slot >= 1; --slot) {
        out << slot;
        for (int a = 1; a <= schedule.agents_used; ++a) {
            Cell& cell = grid[slot][a];
            std::sort(cell.zeros.begin(), cell.zeros.end());
            std::vector<std::string> ids;
            if (!cell.seq.empty()) ids.push_back(cell.seq);
            for (const auto& [ord, id] : cell.zeros) ids.push_back(id);
            out << ',';
            for (std::size_t i = 0; i < ids.size(); ++i) {
                if (i) out << ' ';
                out << ids[i];
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string to_json_report(const Adt& adt, long long unit,
                           const std::vector<VariantSchedule>& results) {
    using json = nlohmann::json;  // object keys sorted
    json root;
    root["tree"] = adt.root();
    root["unit_minutes"] = unit;
    json variants = json::array();
    for (const VariantSchedule& vs : results) {
        json v;
        v["defences_active"] = vs.variant.scenario.active;
        json choices = json::object();
        for (const auto& [gate, child] : vs.variant.or_choices)
            choices[gate] = child;
        v["or_choices"] = choices;
        if (vs.variant.infeasible()) {
            v["status"] = "no_attack";
        } else {
            v["status"] = "ok";
            v["makespan_minutes"] = vs.schedule->makespan;
            v["agents"] = vs.schedule->agents_used;
            v["slots"] = vs.schedule->slots;
            if (vs.bounds) {
                v["agents_lower_bound"] = vs.bounds->low;
                v["agents_upper_bound"] = vs.bounds->up;
            }
            long long attack_cost = 0;
            std::set<std::string> origins;
            const Dag& dag = *vs.variant.dag;
            for (const DagNode& n : dag.nodes())
                if (origins.insert(n.origin).second && adt.has(n.origin))
                    attack_cost += adt.node(n.origin).cost;
            v["attack_cost"] = attack_cost;
            long long defence_cost = 0;
            for (const std::string& d : vs.variant.scenario.active)
                defence_cost += adt.node(d).cost;
            v["defence_cost"] = defence_cost;
            json assignment = json::object();
            for (const auto& [id, a] : vs.schedule->assignment)
                assignment[id] = {{"agent", a.agent}, {"slot", a.slot}};
            v["assignment"] = assignment;
        }
        variants.push_back(std::move(v));
    }
    root["variants"] = variants;
    return root.dump(2) + "\n";
}

std::string to_json_report(const VerificationReport& report) {
    using json = nlohmann::json;
    json root;
    root["ok"] = report.ok;
    root["timed_out"] = report.timed_out;
    if (report.oracle_min_time) root["oracle_min_time"] = *report.oracle_min_time;
    if (report.scheduler_min_time)
        root["scheduler_min_time"] = *report.scheduler_min_time;
    root["mismatches"] = report.mismatches;
    json entries = json::array();
    for (const VerifyEntry& e : report.entries) {
        json j;
        j["defences_active"] = e.scenario.active;
        json choices = json::object();
        for (const auto& [gate, child] : e.or_choices) choices[gate] = child;
        j["or_choices"] = choices;
        j["status"] = e.infeasible ? "no_attack" : "ok";
        if (!e.infeasible) {
            j["makespan"] = e.makespan;
            j["agents_used"] = e.agents_used;
            j["exhaustive_agents"] = e.brute_agents;
            j["agents_upper"] = e.agents_upper;
        }
        j["ok"] = e.ok;
        j["mismatches"] = e.mismatches;
        entries.push_back(std::move(j));
    }
    root["variants"] = entries;
    return root.dump(2) + "\n";
}

}  // namespace adtsched
