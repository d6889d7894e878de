#ifndef ADTSCHED_ADT_HPP
#define ADTSCHED_ADT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace adtsched {

// Gate kinds of an attack-defence tree. Cand, Nodef and Scand are the
// countering gates: they take exactly two children, the first an attack
// subtree, the second a defence subtree. Null never appears in user input;
// the preprocessor uses it for zero-duration structural residues left
// behind when a countering gate has been resolved.
enum class GateKind { Leaf, And, Or, Sand, Cand, Nodef, Scand, Null };

enum class Side { Attack, Defence };

const char* gate_kind_name(GateKind k);

struct AdtNode {
    std::string id;
    GateKind kind = GateKind::Leaf;
    Side side = Side::Attack;
    long long duration = 0;  // in base time units (minutes by default)
    long long cost = 0;
    std::vector<std::string> children;  // declaration order is significant
    std::string condition;              // opaque, never evaluated
};

// A rooted attack-defence tree. Nodes are kept in insertion order; lookups
// go through an id index. The structure itself does not enforce validity,
// validate() does.
class Adt {
public:
    // Returns false if the id is already taken.
    bool add_node(AdtNode node);

    void set_root(std::string id) { root_ = std::move(id); }
    const std::string& root() const { return root_; }

    bool has(const std::string& id) const { return index_.count(id) != 0; }
    const AdtNode& node(const std::string& id) const;
    AdtNode& node(const std::string& id);

    const std::vector<AdtNode>& nodes() const { return nodes_; }
    std::vector<AdtNode>& nodes() { return nodes_; }
    std::size_t size() const { return nodes_.size(); }

private:
    std::vector<AdtNode> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
    std::string root_;
};

enum class ViolationRule {
    BadId,
    UnknownRoot,
    UnknownChild,
    DuplicateChild,
    LeafWithChildren,
    ArityViolation,
    MultipleParents,
    UnreachableNode,
    Cycle,
    SideMismatch,
    MixedSides,
    CounterInDefence,
};

const char* violation_rule_name(ViolationRule r);

struct Violation {
    std::string node;  // offending node id (may be empty for tree-level rules)
    ViolationRule rule;
    std::string message;
};

// Structural well-formedness checks. Empty result means the tree is valid.
std::vector<Violation> validate(const Adt& adt);

// Recomputes Side for every node reachable from the root: children inherit
// the parent's side except the second child of a countering gate, which
// starts a defence subtree. Requires resolvable child references.
void derive_sides(Adt& adt);

struct AdtError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AllZeroDurations : AdtError {
    AllZeroDurations() : AdtError("all durations are zero; no time unit exists") {}
};

// Greatest common divisor of all non-zero durations.
long long time_unit(const Adt& adt);

bool valid_node_id(const std::string& id);

// Structural equality: same root and the same set of nodes (id, kind, side,
// duration, cost, children order, condition). Insertion order is ignored.
bool same_structure(const Adt& a, const Adt& b);

}  // namespace adtsched

#endif
