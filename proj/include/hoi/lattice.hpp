#pragma once

// Partition lattice of variable indices and the path decompositions of total
// correlation, binding entropy and O-information along its covering edges.

#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hoi/dist.hpp"
#include "hoi/metrics.hpp"

namespace hoi {

inline constexpr std::size_t kLatticeCap = 9;
inline constexpr std::size_t kPathCap = 7;

// Set partition of {0..n-1} in canonical form: cells ordered by their
// smallest element, indices ascending inside each cell.
class Partition {
public:
    // Validates disjointness, coverage and non-empty cells; canonicalizes.
    Partition(std::size_t n, std::vector<IndexSet> cells);

    static Partition source(std::size_t n);  // (12...n)
    static Partition sink(std::size_t n);    // (1|2|...|n)
    // "13|2|4" with 1-based single-digit indices; n is inferred.
    static Partition parse(const std::string& text);

    std::size_t num_vars() const { return n_; }
    std::size_t num_cells() const { return cells_.size(); }
    const std::vector<IndexSet>& cells() const { return cells_; }

    // True if every cell of *this lies inside a cell of `coarser`.
    bool refines(const Partition& coarser) const;

    std::string to_string() const;

    auto operator<=>(const Partition&) const = default;
    bool operator==(const Partition&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<IndexSet> cells_;
};

struct LatticeEdge {
    Partition from;
    Partition to;
    std::size_t split_cell = 0;              // index into from.cells()
    std::pair<IndexSet, IndexSet> parts;     // the two halves, canonical order
};

struct LatticePath {
    std::vector<Partition> nodes;
    std::vector<LatticeEdge> edges() const;
    std::string to_string() const;  // "123 > 1|23 > 1|2|3"
};

struct EdgeWeights {
    double v_h = 0.0;  // entropy increase, I(A;B)
    double v_r = 0.0;  // residual decrease, I(A;B|rest)
    double v_s = 0.0;  // v_h - v_r, I(A;B;rest)
};

struct EdgeTerm {
    LatticeEdge edge;
    EdgeWeights weights;
    std::string description;  // "I(2;3|1)" or "I(1;23)" when nothing else remains
};

struct PathDecomposition {
    std::vector<EdgeTerm> edge_terms;
    double total_correlation = 0.0;
    double binding_entropy = 0.0;
    double o_information = 0.0;
};

// Bell(n) partitions in restricted-growth-string order. Throws TooLarge above `cap`.
std::vector<Partition> all_partitions(std::size_t n, std::size_t cap = kLatticeCap);

// True iff b is obtained from a by splitting exactly one cell in two.
bool covers(const Partition& a, const Partition& b);

// Builds the edge record for a covering pair; throws NotACoveringEdge otherwise.
LatticeEdge make_edge(const Partition& from, const Partition& to);

// Partitions covering p, in split order: cells left to right, and within a
// cell the part without the smallest element by ascending bitmask.
std::vector<Partition> refinements(const Partition& p);

// Every covering edge of the lattice, grouped by source in all_partitions order.
std::vector<LatticeEdge> covering_edges(std::size_t n, std::size_t cap = kLatticeCap);

// All source-to-sink paths, depth-first in refinements() order. Throws TooLarge above `cap`.
std::vector<LatticePath> all_paths(std::size_t n, std::size_t cap = kPathCap);

// Path that splits off order[n-1], then order[n-2], ... one variable at a time.
LatticePath assembly_path(std::size_t n, const std::vector<std::size_t>& order);

double partition_entropy(const JointTable& t, const Partition& p, const LogUnit& u);
double partition_residual(const JointTable& t, const Partition& p, const LogUnit& u);

EdgeWeights edge_weights(const JointTable& t, const LatticeEdge& e, const LogUnit& u);

// Accumulates the three weight systems along the path and cross-checks the
// totals against C, B and the O-information (InvariantViolation at 1e-9 bits).
PathDecomposition decompose_along(const JointTable& t, const LatticePath& path, const LogUnit& u);
// Same, reusing a shared entropy cache (for decomposing many paths of one table).
PathDecomposition decompose_along(SubsetEntropies& h, const LatticePath& path, const LogUnit& u);

}  // namespace hoi
