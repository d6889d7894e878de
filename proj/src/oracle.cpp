#include "adtsched/oracle.hpp"

#include <algorithm>
#include <unordered_map>

#include "adtsched/scheduler.hpp"

namespace adtsched {

bool operator==(const Outcome& a, const Outcome& b) {
    return a.status == b.status && a.acctime == b.acctime &&
           a.acccost == b.acccost && a.agents_upper == b.agents_upper &&
           a.attacks_used == b.attacks_used &&
           a.defences_active == b.defences_active &&
           a.or_choices == b.or_choices;
}

namespace {

struct Eval {
    bool succeed = false;
    long long time = 0;
    long long cost = 0;
    int agents = 0;
    std::set<std::string> used;
};

Eval failed() { return {}; }

// Gate semantics over a fixed defence labelling and OR choice. Defences
// contribute nothing to the attack-side resources.
Eval eval_node(const Adt& adt, const std::string& id,
               const DefenceScenario& scenario, const OrChoices& choices) {
    const AdtNode& n = adt.node(id);
    switch (n.kind) {
        case GateKind::Leaf: {
            Eval e;
            e.succeed = true;
            e.time = n.duration;
            e.cost = n.cost;
            e.agents = 1;
            e.used.insert(id);
            return e;
        }
        case GateKind::And: {
            Eval e;
            e.succeed = true;
            e.time = n.duration;
            e.cost = n.cost;
            long long worst = 0;
            for (const std::string& c : n.children) {
                Eval ce = eval_node(adt, c, scenario, choices);
                if (!ce.succeed) return failed();
                worst = std::max(worst, ce.time);
                e.cost += ce.cost;
                e.agents += ce.agents;
                e.used.insert(ce.used.begin(), ce.used.end());
            }
            e.time += worst;
            return e;
        }
        case GateKind::Sand: {
            Eval e;
            e.succeed = true;
            e.time = n.duration;
            e.cost = n.cost;
            for (const std::string& c : n.children) {
                Eval ce = eval_node(adt, c, scenario, choices);
                if (!ce.succeed) return failed();
                e.time += ce.time;
                e.cost += ce.cost;
                e.agents = std::max(e.agents, ce.agents);
                e.used.insert(ce.used.begin(), ce.used.end());
            }
            return e;
        }
        case GateKind::Or: {
            auto it = choices.find(id);
            const std::string& chosen =
                it != choices.end() ? it->second : n.children.front();
            Eval ce = eval_node(adt, chosen, scenario, choices);
            if (!ce.succeed) return failed();
            ce.time += n.duration;
            ce.cost += n.cost;
            return ce;
        }
        case GateKind::Cand:
        case GateKind::Scand: {
            // AND/SAND of the attack with the negated defence; an
            // operating defence makes the gate fail.
            if (defence_operates(adt, n.children[1], scenario))
                return failed();
            Eval ce = eval_node(adt, n.children[0], scenario, choices);
            if (!ce.succeed) return failed();
            ce.time += n.duration;
            ce.cost += n.cost;
            return ce;
        }
        case GateKind::Nodef: {
            // OR of the attack with the negated defence: when the defence
            // is down the gate holds for free, otherwise the attack must
            // carry it.
            if (!defence_operates(adt, n.children[1], scenario)) {
                Eval e;
                e.succeed = true;
                e.time = n.duration;
                e.cost = n.cost;
                // A timed gate still occupies an agent for its own chain.
                e.agents = n.duration > 0 ? 1 : 0;
                return e;
            }
            Eval ce = eval_node(adt, n.children[0], scenario, choices);
            if (!ce.succeed) return failed();
            ce.time += n.duration;
            ce.cost += n.cost;
            return ce;
        }
        case GateKind::Null:
            throw AdtError("NULL node in oracle input: " + id);
    }
    throw AdtError("unreachable");
}

// Attack-side OR gates reachable from the root, in declaration order.
std::vector<std::string> attack_ors(const Adt& adt) {
    Adt sided = adt;
    derive_sides(sided);
    std::vector<std::string> out;
    for (const AdtNode& n : sided.nodes())
        if (n.kind == GateKind::Or && n.side == Side::Attack)
            out.push_back(n.id);
    return out;
}

}  // namespace

std::vector<Outcome> enumerate_outcomes(const Adt& adt) {
    std::vector<std::string> ors = attack_ors(adt);
    std::vector<Outcome> out;
    for (const DefenceScenario& scenario : enumerate_defence_scenarios(adt)) {
        std::vector<std::size_t> pick(ors.size(), 0);
        while (true) {
            OrChoices choices;
            for (std::size_t i = 0; i < ors.size(); ++i)
                choices[ors[i]] = adt.node(ors[i]).children[pick[i]];
            Eval e = eval_node(adt, adt.root(), scenario, choices);
            Outcome o;
            o.defences_active = scenario.active;
            o.or_choices = choices;
            if (e.succeed) {
                o.status = OutcomeStatus::Succeed;
                o.acctime = e.time;
                o.acccost = e.cost;
                o.agents_upper = e.agents;
                o.attacks_used = e.used;
            }
            if (std::find(out.begin(), out.end(), o) == out.end())
                out.push_back(std::move(o));

            std::size_t i = 0;
            for (; i < ors.size(); ++i) {
                if (++pick[i] < adt.node(ors[i]).children.size()) break;
                pick[i] = 0;
            }
            if (i == ors.size()) break;
        }
    }
    return out;
}

std::optional<long long> min_attack_time(const Adt& adt) {
    std::optional<long long> best;
    for (const Outcome& o : enumerate_outcomes(adt))
        if (o.status == OutcomeStatus::Succeed)
            if (!best || o.acctime < *best) best = o.acctime;
    return best;
}

namespace {

// Exhaustive per-slot search for a given agent count.
struct Searcher {
    const Dag& dag;
    int slots;
    int m;
    std::uint64_t* budget;
    bool busy_only;

    std::vector<int> seq;                  // Seq node indices
    std::vector<std::vector<int>> prereq;  // per task: tasks that must be done
    std::vector<int> task_of;              // node index -> task index or -1
    std::unordered_map<std::string, bool> memo;  // failed states
    std::vector<std::pair<int, int>> picked;     // (task, slot) success path

    explicit Searcher(const Dag& d, int s, int agents, std::uint64_t* b,
                      bool busy)
        : dag(d), slots(s), m(agents), budget(b), busy_only(busy) {
        task_of.assign(dag.size(), -1);
        for (std::size_t i = 0; i < dag.size(); ++i)
            if (dag.node(static_cast<int>(i)).kind == DagNodeKind::Seq) {
                task_of[i] = static_cast<int>(seq.size());
                seq.push_back(static_cast<int>(i));
            }
        prereq.resize(seq.size());
        for (std::size_t t = 0; t < seq.size(); ++t) {
            // First Seq nodes reachable downward through zero nodes; they
            // execute earlier (lower slots).
            std::vector<int> stack(dag.children(seq[t]).begin(),
                                   dag.children(seq[t]).end());
            std::set<int> seen;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                if (!seen.insert(v).second) continue;
                if (task_of[v] >= 0)
                    prereq[t].push_back(task_of[v]);
                else
                    for (int c : dag.children(v)) stack.push_back(c);
            }
        }
    }

    std::string state_key(const std::vector<bool>& done, int slot) const {
        std::string key(seq.size() + 4, '\0');
        for (std::size_t i = 0; i < seq.size(); ++i) key[i] = done[i] ? '1' : '0';
        key[seq.size()] = static_cast<char>(slot & 0xff);
        key[seq.size() + 1] = static_cast<char>((slot >> 8) & 0xff);
        return key;
    }

    // Tasks whose prerequisites are all done, ordered by (level desc,
    // depth desc, id) so the listy pick comes first.
    std::vector<int> ready_tasks(const std::vector<bool>& done) const {
        std::vector<int> out;
        for (std::size_t t = 0; t < seq.size(); ++t) {
            if (done[t]) continue;
            bool ok = true;
            for (int q : prereq[t]) ok &= done[q];
            if (ok) out.push_back(static_cast<int>(t));
        }
        std::sort(out.begin(), out.end(), [&](int a, int b) {
            const DagNode& na = dag.node(seq[a]);
            const DagNode& nb = dag.node(seq[b]);
            if (na.level != nb.level) return na.level > nb.level;
            if (na.depth != nb.depth) return na.depth > nb.depth;
            return na.id < nb.id;
        });
        return out;
    }

    bool search(std::vector<bool>& done, int remaining, int slot) {
        if (remaining == 0) return true;
        if (slot > slots) return false;
        if (static_cast<long long>(remaining) >
            static_cast<long long>(m) * (slots - slot + 1))
            return false;
        if (*budget == 0) throw OracleBudgetExceeded();
        --*budget;
        std::string key = state_key(done, slot);
        if (memo.count(key)) return false;

        std::vector<int> ready = ready_tasks(done);
        int take_max = std::min<int>(m, static_cast<int>(ready.size()));
        int take_min = busy_only ? take_max : 0;
        // Subsets of the ready set, larger selections first, within one
        // size in priority order.
        std::vector<int> comb;
        for (int take = take_max; take >= take_min; --take) {
            comb.assign(take, 0);
            for (int i = 0; i < take; ++i) comb[i] = i;
            while (true) {
                for (int i = 0; i < take; ++i) done[ready[comb[i]]] = true;
                std::size_t mark = picked.size();
                for (int i = 0; i < take; ++i)
                    picked.emplace_back(ready[comb[i]], slot);
                if (search(done, remaining - take, slot + 1)) return true;
                picked.resize(mark);
                for (int i = 0; i < take; ++i) done[ready[comb[i]]] = false;
                // Next combination of `take` out of ready.size().
                int i = take - 1;
                while (i >= 0 &&
                       comb[i] == static_cast<int>(ready.size()) - take + i)
                    --i;
                if (i < 0) break;
                ++comb[i];
                for (int j = i + 1; j < take; ++j) comb[j] = comb[j - 1] + 1;
            }
            if (take == 0) break;
        }
        memo.emplace(std::move(key), true);
        return false;
    }
};

}  // namespace

BruteForceResult brute_force_min_agents(const Dag& dag, int slots,
                                        const SearchOptions& opts) {
    int n = dag.seq_count();
    BruteForceResult result;
    if (n == 0) {
        result.agents = 0;
        return result;
    }
    std::uint64_t budget = opts.budget;
    for (int m = 1; m <= n; ++m) {
        Searcher s(dag, slots, m, &budget, opts.busy_only);
        std::vector<bool> done(s.seq.size(), false);
        if (s.search(done, n, 1)) {
            result.agents = m;
            result.trace.assign(m, {});
            // Tasks picked at one slot go to agents 1.. in pick order.
            int cur_slot = -1, agent = 0;
            for (const auto& [task, slot] : s.picked) {
                if (slot != cur_slot) {
                    cur_slot = slot;
                    agent = 0;
                }
                result.trace[agent++].push_back(
                    {s.dag.node(s.seq[task]).id, slot, slot});
            }
            return result;
        }
    }
    result.feasible = false;
    result.agents = n;
    return result;
}

VerificationReport verify(const Adt& adt, const SearchOptions& opts) {
    VerificationReport report;
    long long unit = time_unit(adt);
    std::vector<Variant> variants = preprocess(adt, std::nullopt);
    std::vector<VariantSchedule> scheduled =
        min_schedule(std::move(variants), unit);
    std::vector<Outcome> outcomes = enumerate_outcomes(adt);
    report.oracle_min_time = min_attack_time(adt);

    auto note = [&](VerifyEntry& e, std::string msg) {
        e.ok = false;
        report.ok = false;
        e.mismatches.push_back(std::move(msg));
    };

    for (VariantSchedule& vs : scheduled) {
        VerifyEntry entry;
        entry.scenario = vs.variant.scenario;
        entry.or_choices = vs.variant.or_choices;
        entry.infeasible = vs.variant.infeasible();

        // Succeeding outcomes of the same defence labelling. The outcome
        // this variant implements is pinned down by the set of attack
        // leaves the scheduled DAG still contains; matching on the
        // variant's recorded OR choices alone is too loose, since choices
        // resolved away during pruning are not recorded.
        std::set<std::string> attacks;
        if (!entry.infeasible)
            for (const DagNode& n : vs.variant.dag->nodes())
                if (adt.has(n.origin)) {
                    const AdtNode& src = adt.node(n.origin);
                    if (src.kind == GateKind::Leaf && src.side == Side::Attack)
                        attacks.insert(n.origin);
                }
        std::vector<const Outcome*> same_scenario;
        const Outcome* matched = nullptr;
        for (const Outcome& o : outcomes) {
            if (o.defences_active != vs.variant.scenario.active) continue;
            if (o.status != OutcomeStatus::Succeed) continue;
            same_scenario.push_back(&o);
            if (entry.infeasible || o.attacks_used != attacks) continue;
            bool choices_agree = true;
            for (const auto& [gate, child] : vs.variant.or_choices) {
                auto it = o.or_choices.find(gate);
                choices_agree &= it != o.or_choices.end() && it->second == child;
            }
            // Several outcomes can share one leaf set; keep the loosest
            // agent bound among them.
            if (choices_agree &&
                (!matched || o.agents_upper > matched->agents_upper))
                matched = &o;
        }

        if (entry.infeasible) {
            if (!same_scenario.empty())
                note(entry,
                     "variant is infeasible but the oracle finds a succeeding "
                     "outcome for its scenario");
            report.entries.push_back(std::move(entry));
            continue;
        }
        entry.makespan = vs.schedule->makespan;
        entry.agents_used = vs.schedule->agents_used;
        if (!report.scheduler_min_time ||
            entry.makespan < *report.scheduler_min_time)
            report.scheduler_min_time = entry.makespan;

        if (same_scenario.empty()) {
            note(entry,
                 "variant schedules but the oracle finds no succeeding outcome "
                 "for its scenario");
        } else {
            long long fastest = same_scenario.front()->acctime;
            for (const Outcome* o : same_scenario)
                fastest = std::min(fastest, o->acctime);
            if (entry.makespan != fastest)
                note(entry, "makespan " + std::to_string(entry.makespan) +
                                " != fastest outcome " +
                                std::to_string(fastest));
        }
        if (matched) {
            entry.agents_upper = matched->agents_upper;
            if (entry.agents_used > matched->agents_upper)
                note(entry, "agents_used " + std::to_string(entry.agents_used) +
                                " above the outcome bound " +
                                std::to_string(matched->agents_upper));
        }
        try {
            SearchOptions budgeted = opts;
            BruteForceResult bf = brute_force_min_agents(
                *vs.variant.dag, vs.schedule->slots, budgeted);
            entry.brute_agents = bf.agents;
            if (!bf.feasible)
                note(entry, "exhaustive search found no schedule at all");
            else if (bf.agents != entry.agents_used)
                note(entry, "agents_used " + std::to_string(entry.agents_used) +
                                " != exhaustive minimum " +
                                std::to_string(bf.agents));
        } catch (const OracleBudgetExceeded&) {
            report.timed_out = true;
            note(entry, "exhaustive search budget exceeded");
        }
        report.entries.push_back(std::move(entry));
    }

    bool any_feasible = false;
    for (const VerifyEntry& e : report.entries) any_feasible |= !e.infeasible;
    if (any_feasible != report.oracle_min_time.has_value()) {
        report.ok = false;
        report.mismatches.push_back(
            "feasibility disagrees between scheduler and oracle");
    }
    if (report.oracle_min_time && report.scheduler_min_time &&
        *report.oracle_min_time != *report.scheduler_min_time) {
        report.ok = false;
        report.mismatches.push_back(
            "global minimum attack time disagrees: scheduler " +
            std::to_string(*report.scheduler_min_time) + ", oracle " +
            std::to_string(*report.oracle_min_time));
    }
    return report;
}

}  // namespace adtsched
