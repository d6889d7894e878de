#include "adtsched/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <thread>

namespace adtsched {

void compute_depth(Dag& dag) {
    std::vector<int> order = topo_order(dag);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int v = *it;
        DagNode& node = dag.node(v);
        const std::vector<int>& cs = dag.children(v);
        int best = 0;
        if (!cs.empty()) {
            if (node.kind == DagNodeKind::OrJoin) {
                best = dag.node(cs[0]).depth;
                for (int c : cs) best = std::min(best, dag.node(c).depth);
                for (int c : cs)
                    if (dag.node(c).depth > best) dag.node(c).keep = false;
            } else {
                for (int c : cs) best = std::max(best, dag.node(c).depth);
            }
        }
        node.depth = best + (node.kind == DagNodeKind::Seq ? 1 : 0);
    }
}

Dag prune_unkept(const Dag& dag) {
    // A node survives if the root reaches it without passing through a
    // dropped OR branch.
    std::vector<bool> reach(dag.size(), false);
    std::vector<int> stack{dag.root()};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (reach[v]) continue;
        reach[v] = true;
        for (int c : dag.children(v))
            if (dag.node(c).keep) stack.push_back(c);
    }
    bool all = true;
    for (bool r : reach) all &= r;
    if (all) return dag;
    return dag.filtered(reach);
}

void compute_level(Dag& dag) {
    for (int v : topo_order(dag)) {
        DagNode& node = dag.node(v);
        int level = 0;
        for (int p : dag.parents(v)) {
            const DagNode& par = dag.node(p);
            level = std::max(level,
                             par.level + (par.kind == DagNodeKind::Seq ? 1 : 0));
        }
        node.level = level;
    }
}

Bounds compute_bounds(const Dag& dag) {
    int n = dag.seq_count();
    if (n == 0 || dag.root() < 0)
        throw ScheduleError("compute_bounds needs a non-empty DAG");
    Bounds b;
    b.slots = dag.node(dag.root()).depth;
    b.low = static_cast<int>((n + b.slots - 1) / b.slots) - 1;
    std::vector<int> width(dag.size() + 1, 0);
    for (const DagNode& node : dag.nodes())
        if (node.kind == DagNodeKind::Seq) ++width[node.level];
    b.up = *std::max_element(width.begin(), width.end());
    return b;
}

namespace {

// ancestors[v] as a bitset over node indices.
std::vector<std::vector<std::uint64_t>> ancestor_sets(const Dag& dag) {
    std::size_t n = dag.size();
    std::size_t words = (n + 63) / 64;
    std::vector<std::vector<std::uint64_t>> anc(n,
                                                std::vector<std::uint64_t>(words, 0));
    for (int v : topo_order(dag)) {
        for (int p : dag.parents(v)) {
            for (std::size_t w = 0; w < words; ++w) anc[v][w] |= anc[p][w];
            anc[v][p / 64] |= 1ull << (p % 64);
        }
    }
    return anc;
}

}  // namespace

int schedule(Dag& dag, int slots, int agents) {
    dag.clear_assignment();
    auto anc = ancestor_sets(dag);
    std::size_t words = anc.empty() ? 0 : anc[0].size();

    // Seq nodes grouped by level; each group pre-sorted by priority
    // (deeper first, then id).
    int max_level = 0;
    for (const DagNode& n : dag.nodes()) max_level = std::max(max_level, n.level);
    std::vector<std::vector<int>> by_level(max_level + 1);
    for (std::size_t i = 0; i < dag.size(); ++i)
        if (dag.node(static_cast<int>(i)).kind == DagNodeKind::Seq)
            by_level[dag.node(static_cast<int>(i)).level].push_back(
                static_cast<int>(i));

    auto prio = [&](int a, int b) {
        const DagNode& na = dag.node(a);
        const DagNode& nb = dag.node(b);
        if (na.depth != nb.depth) return na.depth > nb.depth;
        return na.id < nb.id;
    };

    int remaining = dag.seq_count();
    std::vector<int> ready;  // kept sorted by priority
    std::vector<std::uint64_t> placed(words, 0);
    int level = 0;
    for (int slot = slots; slot >= 1 && remaining > 0; --slot, ++level) {
        if (level <= max_level) {
            std::vector<int> fresh = by_level[level];
            std::sort(fresh.begin(), fresh.end(), prio);
            std::vector<int> merged;
            merged.reserve(ready.size() + fresh.size());
            std::merge(ready.begin(), ready.end(), fresh.begin(), fresh.end(),
                       std::back_inserter(merged), prio);
            ready = std::move(merged);
        }
        // A ready node deeper than the remaining slots can never finish.
        for (int v : ready)
            if (dag.node(v).depth > slot) return remaining;

        std::fill(placed.begin(), placed.end(), 0);
        int agent = 1;
        std::vector<int> leftover;
        int assigned_here = 0;
        for (std::size_t i = 0; i < ready.size(); ++i) {
            int v = ready[i];
            bool blocked = false;
            if (agent <= agents) {
                for (std::size_t w = 0; w < words && !blocked; ++w)
                    blocked = (anc[v][w] & placed[w]) != 0;
            }
            if (agent <= agents && !blocked) {
                DagNode& node = dag.node(v);
                node.agent = agent++;
                node.slot = slot;
                placed[v / 64] |= 1ull << (v % 64);
                --remaining;
                ++assigned_here;
            } else {
                leftover.push_back(v);
            }
        }
        ready = std::move(leftover);
        reshuffle_slot(dag, slot, assigned_here);
    }
    return remaining;
}

void reshuffle_slot(Dag& dag, int slot, int num_agents) {
    // agent -> node index holding (agent, slot). Earlier slots may have
    // used more agents than this one, so the map is not bounded by
    // num_agents.
    std::map<int, int> holder;
    for (std::size_t i = 0; i < dag.size(); ++i) {
        const DagNode& n = dag.node(static_cast<int>(i));
        if (n.slot == slot && n.agent >= 1 &&
            n.kind == DagNodeKind::Seq)
            holder[n.agent] = static_cast<int>(i);
    }
    for (int agent = 1; agent <= num_agents; ++agent) {
        auto it = holder.find(agent);
        if (it == holder.end()) continue;
        int v = it->second;
        // The chain predecessor: a sole Seq parent served by another agent.
        const std::vector<int>& ps = dag.parents(v);
        if (ps.size() != 1) continue;
        const DagNode& par = dag.node(ps[0]);
        if (par.kind != DagNodeKind::Seq || par.agent == 0 ||
            par.agent == agent)
            continue;
        int target = par.agent;
        auto jt = holder.find(target);
        int other = jt == holder.end() ? -1 : jt->second;
        dag.node(v).agent = target;
        holder[target] = v;
        if (other >= 0) {
            dag.node(other).agent = agent;
            holder[agent] = other;
        } else {
            holder.erase(agent);
        }
    }
}

void zero_assign(Dag& dag) {
    std::vector<int> zeros;
    for (std::size_t i = 0; i < dag.size(); ++i)
        if (dag.node(static_cast<int>(i)).kind != DagNodeKind::Seq)
            zeros.push_back(static_cast<int>(i));

    int order = 0;
    auto take = [&](int v, int agent, int slot) {
        DagNode& n = dag.node(v);
        n.agent = agent;
        n.slot = slot;
        n.zero_order = ++order;
    };
    auto min_slot_assigned_parent = [&](int v) -> int {
        int best = -1;
        for (int p : dag.parents(v)) {
            const DagNode& par = dag.node(p);
            if (par.agent == 0) continue;
            if (best < 0 || par.slot < dag.node(best).slot) best = p;
        }
        return best;
    };

    // Residues sit directly under their chain: inherit the pair.
    for (int v : zeros) {
        for (int p : dag.parents(v)) {
            const DagNode& par = dag.node(p);
            if (par.kind == DagNodeKind::Seq && par.agent != 0) {
                take(v, par.agent, par.slot);
                break;
            }
        }
    }

    std::vector<int> pending;
    for (int v : zeros)
        if (dag.node(v).agent == 0) pending.push_back(v);

    while (!pending.empty()) {
        std::vector<int> next;
        for (int v : pending) {
            DagNode& n = dag.node(v);
            const std::vector<int>& cs = dag.children(v);
            if (n.kind == DagNodeKind::AndJoin) {
                if (n.depth == 0) {
                    int p = min_slot_assigned_parent(v);
                    if (p >= 0) {
                        take(v, dag.node(p).agent, dag.node(p).slot);
                        continue;
                    }
                } else {
                    bool all_done = true;
                    int last = -1;  // assigned child occurring last: min slot
                    for (int c : cs) {
                        const DagNode& child = dag.node(c);
                        if (child.agent != 0) {
                            if (last < 0 || child.slot < dag.node(last).slot)
                                last = c;
                        } else if (child.depth != 0) {
                            all_done = false;
                        }
                    }
                    if (all_done && last >= 0) {
                        take(v, dag.node(last).agent, dag.node(last).slot);
                        continue;
                    }
                }
            } else {
                bool below_is_zero = cs.empty();
                if (!below_is_zero) {
                    below_is_zero = true;
                    for (int c : cs) below_is_zero &= dag.node(c).depth == 0;
                }
                int assigned_child = -1;
                for (int c : cs)
                    if (dag.node(c).agent != 0) {
                        assigned_child = c;
                        break;
                    }
                if (assigned_child >= 0) {
                    take(v, dag.node(assigned_child).agent,
                         dag.node(assigned_child).slot);
                    continue;
                }
                if (below_is_zero) {
                    int p = min_slot_assigned_parent(v);
                    if (p >= 0) {
                        take(v, dag.node(p).agent, dag.node(p).slot);
                        continue;
                    }
                }
            }
            next.push_back(v);
        }
        if (next.size() == pending.size()) throw UnassignedRemainder();
        pending = std::move(next);
    }
}

Schedule min_schedule_dag(Dag& dag, long long unit) {
    Schedule result;
    compute_depth(dag);
    dag = prune_unkept(dag);
    compute_depth(dag);  // depths over the kept graph
    compute_level(dag);
    if (dag.seq_count() == 0) {
        // Nothing takes time: the attack is immediate and needs nobody.
        for (const DagNode& n : dag.nodes())
            result.assignment[n.id] = {0, 0};
        return result;
    }
    Bounds b = compute_bounds(dag);
    int low = b.low, up = b.up;
    while (up - low > 1) {
        int mid = low + (up - low) / 2;
        if (schedule(dag, b.slots, mid) == 0)
            up = mid;
        else
            low = mid;
    }
    if (schedule(dag, b.slots, up) != 0)
        throw ScheduleError("schedule failed at the upper bound");
    zero_assign(dag);

    result.slots = b.slots;
    result.makespan = static_cast<long long>(b.slots) * unit;
    for (const DagNode& n : dag.nodes()) {
        result.assignment[n.id] = {n.agent, n.slot};
        result.agents_used = std::max(result.agents_used, n.agent);
    }
    return result;
}

std::vector<VariantSchedule> min_schedule(std::vector<Variant> variants,
                                          long long unit, int jobs) {
    std::vector<VariantSchedule> out(variants.size());
    auto work = [&](std::size_t i) {
        VariantSchedule& vs = out[i];
        vs.variant = std::move(variants[i]);
        if (vs.variant.infeasible()) return;
        Dag& dag = *vs.variant.dag;
        vs.schedule = min_schedule_dag(dag, unit);
        if (dag.seq_count() > 0) {
            Bounds b = compute_bounds(dag);
            vs.bounds = b;
        }
    };
    if (jobs <= 1 || variants.size() <= 1) {
        for (std::size_t i = 0; i < variants.size(); ++i) work(i);
        return out;
    }
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (std::size_t i = cursor.fetch_add(1); i < variants.size();
             i = cursor.fetch_add(1))
            work(i);
    };
    std::vector<std::thread> pool;
    int n_threads = std::min<int>(jobs, static_cast<int>(variants.size()));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return out;
}

}  // namespace adtsched
