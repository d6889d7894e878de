#ifndef ADTSCHED_TESTS_HELPERS_HPP
#define ADTSCHED_TESTS_HELPERS_HPP

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "adtsched/adt.hpp"
#include "adtsched/parser.hpp"

namespace testutil {

inline std::string data_file(const std::string& name) {
    return std::string(ADTSCHED_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline adtsched::Adt load_tree(const std::string& name) {
    adtsched::ParseResult r = adtsched::parse(read_file(data_file(name)));
    if (!r.ok()) throw std::runtime_error("fixture failed to parse: " + name);
    return *r.adt;
}

// Random valid trees for property tests. Small: the total attack-side
// duration is capped so the exhaustive oracle stays cheap. Countering
// gates appear only on the attack side; defence subtrees stick to
// leaf/AND/OR/SAND.
class RandomTreeGen {
public:
    explicit RandomTreeGen(std::uint64_t seed, int max_units = 12)
        : rng_(seed), max_units_(max_units) {}

    adtsched::Adt generate() {
        using namespace adtsched;
        while (true) {
            adt_ = Adt{};
            next_id_ = 0;
            units_left_ = max_units_;
            ors_left_ = 3;
            defences_left_ = 3;
            std::string root = attack_node(3);
            adt_.set_root(root);
            derive_sides(adt_);
            bool nonzero = false;
            for (const AdtNode& n : adt_.nodes()) nonzero |= n.duration > 0;
            if (nonzero && validate(adt_).empty()) return adt_;
        }
    }

private:
    std::mt19937_64 rng_;
    int max_units_;
    adtsched::Adt adt_;
    int next_id_ = 0;
    int units_left_ = 0;
    int ors_left_ = 0;
    int defences_left_ = 0;

    int roll(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }

    std::string fresh(const char* prefix) {
        return std::string(prefix) + std::to_string(next_id_++);
    }

    long long attack_duration() {
        int d = roll(0, 3);
        d = std::min(d, units_left_);
        units_left_ -= d;
        return d;
    }

    std::string attack_leaf() {
        adtsched::AdtNode n;
        n.id = fresh("a");
        n.duration = attack_duration();
        n.cost = roll(0, 50);
        adt_.add_node(n);
        return n.id;
    }

    std::string defence_subtree(int depth) {
        using namespace adtsched;
        if (depth <= 0 || defences_left_ <= 1 || roll(0, 2) == 0) {
            AdtNode n;
            n.id = fresh("d");
            n.side = Side::Defence;
            n.duration = roll(0, 2);
            n.cost = roll(0, 50);
            if (defences_left_ > 0) --defences_left_;
            adt_.add_node(n);
            return n.id;
        }
        AdtNode g;
        g.id = fresh("dg");
        g.side = Side::Defence;
        g.kind = roll(0, 2) == 0   ? GateKind::And
                 : roll(0, 1) == 0 ? GateKind::Or
                                   : GateKind::Sand;
        int kids = 2;
        for (int i = 0; i < kids; ++i)
            g.children.push_back(defence_subtree(depth - 1));
        adt_.add_node(g);
        return g.id;
    }

    std::string attack_node(int depth) {
        using namespace adtsched;
        if (depth <= 0 || units_left_ <= 1 || roll(0, 99) < 40)
            return attack_leaf();
        int pick = roll(0, 99);
        AdtNode g;
        g.duration = roll(0, 1) == 0 ? 0 : attack_duration();
        g.cost = roll(0, 20);
        if (pick < 30) {
            g.kind = GateKind::And;
        } else if (pick < 55 && ors_left_ > 0) {
            g.kind = GateKind::Or;
            --ors_left_;
        } else if (pick < 75) {
            g.kind = GateKind::Sand;
        } else if (defences_left_ > 0) {
            int which = roll(0, 2);
            g.kind = which == 0   ? GateKind::Cand
                     : which == 1 ? GateKind::Nodef
                                  : GateKind::Scand;
        } else {
            g.kind = GateKind::And;
        }
        if (g.kind == GateKind::Cand || g.kind == GateKind::Nodef ||
            g.kind == GateKind::Scand) {
            g.id = fresh("c");
            g.children.push_back(attack_node(depth - 1));
            g.children.push_back(defence_subtree(1));
        } else {
            g.id = fresh("g");
            int kids = roll(2, 3);
            for (int i = 0; i < kids; ++i)
                g.children.push_back(attack_node(depth - 1));
        }
        adt_.add_node(g);
        return g.id;
    }
};

}  // namespace testutil

#endif
