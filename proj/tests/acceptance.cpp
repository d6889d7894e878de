// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "adtsched/export.hpp"
#include "adtsched/generator.hpp"
#include "adtsched/oracle.hpp"
#include "adtsched/parser.hpp"
#include "adtsched/preprocess.hpp"
#include "adtsched/scheduler.hpp"
#include "helpers.hpp"

using namespace adtsched;
using Clock = std::chrono::steady_clock;

namespace {

struct Checker {
    std::vector<std::string> errors;

    void expect(bool cond, const std::string& what) {
        if (!cond) errors.push_back(what);
    }

    template <typename T, typename U>
    void equal(const T& got, const U& want, const std::string& what) {
        if (!(got == static_cast<T>(want))) {
            std::ostringstream msg;
            msg << what << ": got " << got << ", want " << want;
            errors.push_back(msg.str());
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Shared corpus sweep for criteria 5, 6 and 8: 200 seeded random trees,
// every variant solved and cross-checked.
struct CorpusResults {
    std::vector<std::string> oracle_errs;     // criterion 5
    std::vector<std::string> bound_errs;      // criterion 6
    std::vector<std::string> invariant_errs;  // criterion 8
    int trees = 0;
    int solved_variants = 0;
    double seconds = 0;
};

const CorpusResults& corpus() {
    static const CorpusResults results = [] {
        CorpusResults r;
        auto start = Clock::now();
        for (std::uint64_t seed = 1; seed <= 200; ++seed) {
            std::string tag = "seed " + std::to_string(seed);
            testutil::RandomTreeGen gen(seed);
            Adt adt = gen.generate();
            ++r.trees;
            try {
                VerificationReport report = verify(adt);
                if (!report.ok)
                    for (const VerifyEntry& e : report.entries)
                        for (const std::string& m : e.mismatches)
                            r.oracle_errs.push_back(tag + ": " + m);
                for (const std::string& m : report.mismatches)
                    r.oracle_errs.push_back(tag + ": " + m);
            } catch (const OracleBudgetExceeded&) {
                r.oracle_errs.push_back(tag + ": oracle budget exceeded");
                continue;
            }
            long long unit = time_unit(adt);
            for (VariantSchedule& vs :
                 min_schedule(preprocess(adt, std::nullopt), unit)) {
                if (vs.variant.infeasible() || !vs.schedule ||
                    vs.schedule->slots == 0)
                    continue;
                ++r.solved_variants;
                const Dag& dag = *vs.variant.dag;
                const Schedule& s = *vs.schedule;
                if (s.slots != critical_path(dag))
                    r.oracle_errs.push_back(tag + ": makespan is not the critical path");
                // Bound sandwich: ceil(n / slots) <= agents <= widest level.
                if (vs.bounds) {
                    if (s.agents_used <= vs.bounds->low ||
                        s.agents_used > vs.bounds->up)
                        r.bound_errs.push_back(
                            tag + ": agents " + std::to_string(s.agents_used) +
                            " outside (" + std::to_string(vs.bounds->low) +
                            ", " + std::to_string(vs.bounds->up) + "]");
                } else {
                    r.bound_errs.push_back(tag + ": bounds missing");
                }
                // One agent per normalisation chain.
                std::map<std::string, std::set<int>> chain_agents;
                for (const DagNode& n : dag.nodes())
                    if (n.kind == DagNodeKind::Seq)
                        chain_agents[n.origin].insert(n.agent);
                for (const auto& [origin, agents] : chain_agents)
                    if (agents.size() != 1)
                        r.invariant_errs.push_back(
                            tag + ": chain " + origin + " split across " +
                            std::to_string(agents.size()) + " agents");
                // Zero-duration nodes ride along with a neighbour.
                for (std::size_t i = 0; i < dag.size(); ++i) {
                    const DagNode& n = dag.node(static_cast<int>(i));
                    if (n.kind == DagNodeKind::Seq) continue;
                    bool shared = false;
                    for (int p : dag.parents(static_cast<int>(i)))
                        shared |= dag.node(p).agent == n.agent &&
                                  dag.node(p).slot == n.slot;
                    for (int c : dag.children(static_cast<int>(i)))
                        shared |= dag.node(c).agent == n.agent &&
                                  dag.node(c).slot == n.slot;
                    if (n.agent < 1 || !shared)
                        r.invariant_errs.push_back(tag + ": zero node " + n.id +
                                                   " is not co-located");
                }
            }
        }
        r.seconds = seconds_since(start);
        return r;
    }();
    return results;
}

void criterion_1(Checker& c) {
    auto start = Clock::now();
    Adt adt = testutil::load_tree("treasure_hunters.adt");
    auto results = min_schedule(preprocess(adt, std::nullopt), time_unit(adt));
    c.equal(results.size(), std::size_t{2}, "variant count");
    if (results.size() != 2) return;
    c.expect(!results[0].variant.infeasible(), "police-off variant feasible");
    if (results[0].schedule) {
        c.equal(results[0].schedule->makespan, 125, "police-off makespan");
        c.equal(results[0].schedule->agents_used, 2, "police-off agents");
    }
    c.expect(results[1].variant.infeasible(), "police-on variant blocked");
    c.expect(results[1].variant.scenario.active == std::set<std::string>{"p"},
             "police-on scenario");
    c.expect(seconds_since(start) < 1.0, "runtime under one second");
}

void criterion_2(Checker& c) {
    Adt adt = testutil::load_tree("treasure_hunters.adt");
    auto variants = preprocess(adt, std::nullopt);
    Dag dag = *variants[0].dag;
    compute_depth(dag);
    dag = prune_unkept(dag);
    compute_depth(dag);
    compute_level(dag);
    auto depth = [&](const char* id) { return dag.node(dag.index_of(id)).depth; };
    auto level = [&](const char* id) { return dag.node(dag.index_of(id)).level; };
    c.equal(depth("TS'"), 125, "depth(TS')");
    c.equal(depth("h'"), 122, "depth(h')");
    c.equal(depth("ST'"), 120, "depth(ST')");
    c.equal(depth("b_60"), 60, "depth(b_60)");
    c.equal(depth("f_120"), 120, "depth(f_120)");
    c.equal(level("b_60"), 5, "level(b_60)");
    c.equal(level("b_1"), 64, "level(b_1)");
    c.equal(level("f'"), 125, "level(f')");
}

void criterion_3(Checker& c) {
    Adt adt = testutil::load_tree("treasure_hunters.adt");
    auto variants = preprocess(adt, std::nullopt);
    Dag dag = *variants[0].dag;
    Schedule s = min_schedule_dag(dag, 1);
    c.equal(s.agents_used, 2, "agents");
    auto at = [&](const std::string& id) { return s.assignment.at(id); };
    int a1 = at("h_3").agent;
    int a2 = at("b_60").agent;
    c.expect(a1 != a2, "two distinct agents");
    struct Want {
        std::string id;
        int agent;
        int slot;
    };
    std::vector<Want> want = {
        {"h_3", a1, 125}, {"h_2", a1, 124}, {"h_1", a1, 123},
        {"ST_2", a1, 122}, {"ST_1", a1, 121},
        {"TS'", a1, 125}, {"GA'", a1, 125}, {"TF'_2", a1, 125},
        {"b'", a2, 61},   {"f'", a1, 1},
    };
    for (int i = 1; i <= 120; ++i)
        want.push_back({"f_" + std::to_string(i), a1, i});
    for (int i = 1; i <= 60; ++i)
        want.push_back({"b_" + std::to_string(i), a2, 60 + i});
    for (const Want& w : want) {
        c.equal(at(w.id).agent, w.agent, w.id + " agent");
        c.equal(at(w.id).slot, w.slot, w.id + " slot");
    }
}

void criterion_4(Checker& c) {
    Adt adt = testutil::load_tree("treasure_hunters.adt");
    auto outcomes = enumerate_outcomes(adt);
    c.equal(outcomes.size(), std::size_t{4}, "outcome count");
    std::multiset<long long> times;
    for (const Outcome& o : outcomes)
        if (o.status == OutcomeStatus::Succeed) times.insert(o.acctime);
    c.expect(times == std::multiset<long long>{125, 132},
             "successful times are {125, 132}");
}

void criterion_5(Checker& c) {
    const CorpusResults& r = corpus();
    c.equal(r.trees, 200, "corpus size");
    for (const std::string& e : r.oracle_errs) c.expect(false, e);
    c.expect(r.seconds < 60.0,
             "corpus sweep under 60 s (took " + std::to_string(r.seconds) + ")");
}

void criterion_6(Checker& c) {
    const CorpusResults& r = corpus();
    c.expect(r.solved_variants > 0, "corpus produced solved variants");
    for (const std::string& e : r.bound_errs) c.expect(false, e);
}

void criterion_7(Checker& c) {
    Adt adt = testutil::load_tree("interleaved.adt");
    auto outcomes = enumerate_outcomes(adt);
    c.equal(outcomes.size(), std::size_t{1}, "outcome count");
    if (!outcomes.empty())
        c.equal(outcomes[0].agents_upper, 3, "gate-rule agent bound");
    auto variants = preprocess(adt, std::nullopt);
    c.equal(variants.size(), std::size_t{1}, "variant count");
    Dag dag = *variants[0].dag;
    Schedule s = min_schedule_dag(dag, 1);
    c.equal(s.agents_used, 2, "scheduler agents");
    c.equal(s.slots, 5, "slots");
    BruteForceResult exhaustive = brute_force_min_agents(*variants[0].dag, 5);
    c.expect(exhaustive.feasible, "exhaustive search feasible");
    c.equal(exhaustive.agents, 2, "exhaustive minimum");
}

void criterion_8(Checker& c) {
    const CorpusResults& r = corpus();
    for (const std::string& e : r.invariant_errs) c.expect(false, e);
}

void criterion_9(Checker& c) {
    // Wider AND trees of roughly doubling size; depth stays fixed so the
    // agent count grows with n.
    std::vector<int> sizes = {124, 250, 502, 1000};
    std::vector<double> times;
    for (int nodes : sizes) {
        GeneratorParams p;
        p.depth = 4;
        p.width = 2;
        p.children = 6;
        p.nodes = nodes;
        Adt adt = generate_tree(p);
        auto variants = preprocess(adt, std::nullopt);
        auto start = Clock::now();
        Schedule s = min_schedule_dag(*variants[0].dag, 1);
        double t = seconds_since(start);
        times.push_back(t);
        c.expect(s.agents_used >= 1, "schedule solved at n=" + std::to_string(nodes));
        c.expect(t < 1.0, "n=" + std::to_string(nodes) + " under one second (" +
                              std::to_string(t) + " s)");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        double base = std::max(times[i - 1], 0.001);  // 1 ms floor
        std::ostringstream msg;
        msg << "growth " << sizes[i - 1] << "->" << sizes[i] << " nodes: "
            << times[i] << " s vs " << times[i - 1] << " s";
        c.expect(times[i] <= 5.0 * base, msg.str());
    }
}

}  // namespace

int main() {
    struct Entry {
        const char* title;
        std::function<void(Checker&)> fn;
    };
    const std::vector<Entry> criteria = {
        {"treasure hunters end-to-end: two variants, 125 min with 2 agents",
         criterion_1},
        {"depth/level annotations match the worked example", criterion_2},
        {"schedule matches the worked table up to agent renaming", criterion_3},
        {"outcome enumeration: 4 outcomes, times {125, 132}", criterion_4},
        {"scheduler agrees with the exhaustive oracle on 200 random trees",
         criterion_5},
        {"agent count sits inside the level/size bounds on the corpus",
         criterion_6},
        {"constructed instance: gate bound 3, true minimum 2", criterion_7},
        {"chain unity and zero-node co-location hold on the corpus",
         criterion_8},
        {"scaling: up to 1000 nodes, bounded growth per doubling", criterion_9},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checker c;
        auto start = Clock::now();
        try {
            criteria[i].fn(c);
        } catch (const std::exception& e) {
            c.errors.push_back(std::string("exception: ") + e.what());
        }
        double t = seconds_since(start);
        if (c.errors.empty()) {
            std::printf("[PASS] %zu. %s (%.2f s)\n", i + 1, criteria[i].title, t);
        } else {
            ++failed;
            std::printf("[FAIL] %zu. %s (%.2f s)\n", i + 1, criteria[i].title, t);
            std::size_t shown = std::min<std::size_t>(c.errors.size(), 10);
            for (std::size_t k = 0; k < shown; ++k)
                std::printf("       - %s\n", c.errors[k].c_str());
            if (shown < c.errors.size())
                std::printf("       - ... and %zu more\n",
                            c.errors.size() - shown);
        }
    }
    if (failed) std::printf("%d criteria failed\n", failed);
    return failed;
}
