#include "hoi/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hoi/error.hpp"
#include "hoi/metrics.hpp"

namespace hoi {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void check_same_n(const Partition& p, std::size_t n, const char* what) {
    if (p.num_vars() != n) {
        throw SizeMismatch(std::string(what) + ": partition of " + std::to_string(p.num_vars()) +
                           " indices used with " + std::to_string(n) + " variables");
    }
}

double partition_entropy_nats(SubsetEntropies& h, const Partition& p) {
    double s = 0.0;
    for (const auto& c : p.cells()) s += h(c.mask());
    return s;
}

double partition_residual_nats(SubsetEntropies& h, const Partition& p) {
    const double joint = h(h.full_mask());
    double s = 0.0;
    for (const auto& c : p.cells()) s += joint - h(h.full_mask() & ~c.mask());
    return s;
}

EdgeWeights weights_nats(SubsetEntropies& h, const LatticeEdge& e) {
    EdgeWeights w;
    w.v_h = partition_entropy_nats(h, e.to) - partition_entropy_nats(h, e.from);
    w.v_r = partition_residual_nats(h, e.from) - partition_residual_nats(h, e.to);
    w.v_s = w.v_h - w.v_r;
    return w;
}

std::string describe(const LatticeEdge& e) {
    const std::size_t n = e.from.num_vars();
    const IndexSet rest = e.parts.first.united(e.parts.second).complement(n);
    std::string s = "I(" + e.parts.first.to_string() + ";" + e.parts.second.to_string();
    if (!rest.empty()) s += "|" + rest.to_string();
    return s + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::size_t n, std::vector<IndexSet> cells) : n_(n), cells_(std::move(cells)) {
    if (n == 0) throw InvalidArgument("partition: need at least one index");
    std::vector<bool> seen(n, false);
    for (const auto& c : cells_) {
        if (c.empty()) throw InvalidArgument("partition: empty cell");
        for (auto i : c) {
            if (i >= n) throw IndexOutOfRange("partition: index " + std::to_string(i + 1) + " out of range");
            if (seen[i]) throw InvalidArgument("partition: index " + std::to_string(i + 1) + " appears twice");
            seen[i] = true;
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw InvalidArgument("partition: cells do not cover every index");
    }
    std::sort(cells_.begin(), cells_.end(),
              [](const IndexSet& a, const IndexSet& b) { return a[0] < b[0]; });
}

Partition Partition::source(std::size_t n) { return Partition(n, {IndexSet::range(0, n)}); }

Partition Partition::sink(std::size_t n) {
    std::vector<IndexSet> cells;
    for (std::size_t i = 0; i < n; ++i) cells.push_back(IndexSet{i});
    return Partition(n, std::move(cells));
}

Partition Partition::parse(const std::string& text) {
    std::vector<IndexSet> cells;
    std::vector<std::size_t> cur;
    std::size_t n = 0;
    auto flush = [&] {
        if (cur.empty()) throw ParseError("partition '" + text + "': empty cell");
        cells.emplace_back(std::move(cur));
        cur.clear();
    };
    for (char ch : text) {
        if (ch == '|') {
            flush();
        } else if (ch >= '1' && ch <= '9') {
            const std::size_t i = static_cast<std::size_t>(ch - '1');
            cur.push_back(i);
            n = std::max(n, i + 1);
        } else if (ch != ' ') {
            throw ParseError("partition '" + text + "': unexpected character '" + std::string(1, ch) + "'");
        }
    }
    flush();
    return Partition(n, std::move(cells));
}

bool Partition::refines(const Partition& coarser) const {
    if (coarser.n_ != n_) return false;
    for (const auto& c : cells_) {
        const auto m = c.mask();
        bool inside = false;
        for (const auto& d : coarser.cells_) {
            if ((m & ~d.mask()) == 0) {
                inside = true;
                break;
            }
        }
        if (!inside) return false;
    }
    return true;
}

std::string Partition::to_string() const {
    std::string s;
    for (std::size_t k = 0; k < cells_.size(); ++k) {
        if (k) s += '|';
        s += cells_[k].to_string();
    }
    return s;
}

std::vector<LatticeEdge> LatticePath::edges() const {
    std::vector<LatticeEdge> out;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) out.push_back(make_edge(nodes[k], nodes[k + 1]));
    return out;
}

std::string LatticePath::to_string() const {
    std::string s;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k) s += " > ";
        s += nodes[k].to_string();
    }
    return s;
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<Partition> all_partitions(std::size_t n, std::size_t cap) {
    if (n < 1) throw InvalidArgument("all_partitions: n must be >= 1");
    if (n > cap) {
        throw TooLarge("all_partitions: n = " + std::to_string(n) + " exceeds the lattice cap of " +
                       std::to_string(cap));
    }
    std::vector<Partition> out;
    // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
    std::vector<std::size_t> a(n, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t maxv) {
        if (i == n) {
            std::vector<std::vector<std::size_t>> cells(maxv + 1);
            for (std::size_t j = 0; j < n; ++j) cells[a[j]].push_back(j);
            std::vector<IndexSet> sets;
            for (auto& c : cells) sets.emplace_back(std::move(c));
            out.emplace_back(n, std::move(sets));
            return;
        }
        for (std::size_t v = 0; v <= maxv + 1; ++v) {
            a[i] = v;
            rec(i + 1, std::max(maxv, v));
        }
    };
    rec(1, 0);
    return out;
}

bool covers(const Partition& a, const Partition& b) {
    if (a.num_vars() != b.num_vars()) throw SizeMismatch("covers: partitions of different sizes");
    return b.num_cells() == a.num_cells() + 1 && b.refines(a);
}

LatticeEdge make_edge(const Partition& from, const Partition& to) {
    if (!covers(from, to)) {
        throw NotACoveringEdge(to.to_string() + " does not cover " + from.to_string());
    }
    // Exactly one cell of `from` is absent from `to`.
    for (std::size_t k = 0; k < from.num_cells(); ++k) {
        const auto& cell = from.cells()[k];
        if (std::find(to.cells().begin(), to.cells().end(), cell) != to.cells().end()) continue;
        std::vector<IndexSet> halves;
        for (const auto& d : to.cells()) {
            if ((d.mask() & ~cell.mask()) == 0) halves.push_back(d);
        }
        return LatticeEdge{from, to, k, {halves.at(0), halves.at(1)}};
    }
    throw NotACoveringEdge("no split cell found");
}

std::vector<Partition> refinements(const Partition& p) {
    std::vector<Partition> out;
    const std::size_t n = p.num_vars();
    for (std::size_t k = 0; k < p.num_cells(); ++k) {
        const auto& cell = p.cells()[k];
        if (cell.size() < 2) continue;
        const std::uint64_t m = cell.mask();
        const std::uint64_t low = m & (~m + 1);
        const std::uint64_t free_bits = m & ~low;
        // Ascending non-empty submasks of the cell minus its smallest element,
        // excluding the whole of it (the other part must keep the smallest).
        std::vector<std::uint64_t> subs;
        for (std::uint64_t s = free_bits; s; s = (s - 1) & free_bits) subs.push_back(s);
        std::reverse(subs.begin(), subs.end());
        for (auto s : subs) {
            std::vector<IndexSet> cells;
            for (std::size_t j = 0; j < p.num_cells(); ++j) {
                if (j != k) cells.push_back(p.cells()[j]);
            }
            cells.push_back(IndexSet::from_mask(m & ~s));
            cells.push_back(IndexSet::from_mask(s));
            out.emplace_back(n, std::move(cells));
        }
    }
    return out;
}

std::vector<LatticeEdge> covering_edges(std::size_t n, std::size_t cap) {
    std::vector<LatticeEdge> out;
    for (const auto& p : all_partitions(n, cap)) {
        for (const auto& q : refinements(p)) out.push_back(make_edge(p, q));
    }
    return out;
}

std::vector<LatticePath> all_paths(std::size_t n, std::size_t cap) {
    if (n < 1) throw InvalidArgument("all_paths: n must be >= 1");
    if (n > cap) {
        throw TooLarge("all_paths: n = " + std::to_string(n) + " exceeds the path-enumeration cap of " +
                       std::to_string(cap));
    }
    std::vector<LatticePath> out;
    LatticePath cur;
    cur.nodes.push_back(Partition::source(n));
    std::function<void()> rec = [&] {
        const auto& last = cur.nodes.back();
        if (last.num_cells() == n) {
            out.push_back(cur);
            return;
        }
        for (auto& q : refinements(last)) {
            cur.nodes.push_back(std::move(q));
            rec();
            cur.nodes.pop_back();
        }
    };
    rec();
    return out;
}

LatticePath assembly_path(std::size_t n, const std::vector<std::size_t>& order) {
    if (order.size() != n) throw NotAPermutation("assembly_path: order must list every variable once");
    std::vector<bool> seen(n, false);
    for (auto i : order) {
        if (i >= n || seen[i]) throw NotAPermutation("assembly_path: order is not a permutation");
        seen[i] = true;
    }
    LatticePath path;
    for (std::size_t peeled = 0; peeled < n; ++peeled) {
        const std::size_t head = n - peeled;  // order[0..head) stay together
        std::vector<IndexSet> cells;
        cells.emplace_back(std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(head)));
        for (std::size_t k = head; k < n; ++k) cells.push_back(IndexSet{order[k]});
        path.nodes.emplace_back(n, std::move(cells));
        if (head == 1) break;
    }
    return path;
}

// ---------------------------------------------------------------------------
// Weights

double partition_entropy(const JointTable& t, const Partition& p, const LogUnit& u) {
    check_same_n(p, t.num_vars(), "partition_entropy");
    SubsetEntropies h(t);
    return u.from_nats(partition_entropy_nats(h, p));
}

double partition_residual(const JointTable& t, const Partition& p, const LogUnit& u) {
    check_same_n(p, t.num_vars(), "partition_residual");
    SubsetEntropies h(t);
    return u.from_nats(partition_residual_nats(h, p));
}

EdgeWeights edge_weights(const JointTable& t, const LatticeEdge& e, const LogUnit& u) {
    check_same_n(e.from, t.num_vars(), "edge_weights");
    const LatticeEdge checked = make_edge(e.from, e.to);
    if (checked.split_cell != e.split_cell || checked.parts != e.parts) {
        throw NotACoveringEdge("edge_weights: split record does not match the partitions");
    }
    SubsetEntropies h(t);
    const auto w = weights_nats(h, e);
    return {u.from_nats(w.v_h), u.from_nats(w.v_r), u.from_nats(w.v_s)};
}

PathDecomposition decompose_along(const JointTable& t, const LatticePath& path, const LogUnit& u) {
    SubsetEntropies h(t);
    return decompose_along(h, path, u);
}

PathDecomposition decompose_along(SubsetEntropies& h, const LatticePath& path, const LogUnit& u) {
    const std::size_t n = h.num_vars();
    if (path.nodes.empty() || path.nodes.front() != Partition::source(n) ||
        path.nodes.back() != Partition::sink(n)) {
        if (!path.nodes.empty()) check_same_n(path.nodes.front(), n, "decompose_along");
        throw InvalidArgument("decompose_along: path must run from the one-cell to the all-singletons partition");
    }
    PathDecomposition d;
    double c = 0.0, b = 0.0, w = 0.0;
    for (auto& e : path.edges()) {
        const auto wn = weights_nats(h, e);
        c += wn.v_h;
        b += wn.v_r;
        w += wn.v_s;
        d.edge_terms.push_back({e, {u.from_nats(wn.v_h), u.from_nats(wn.v_r), u.from_nats(wn.v_s)}, describe(e)});
    }

    double sum_h = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum_h += h(std::uint64_t{1} << j);
    const double joint = h(h.full_mask());
    double resid = 0.0;
    for (std::size_t j = 0; j < n; ++j) resid += joint - h(h.full_mask() & ~(std::uint64_t{1} << j));
    const double c_ref = sum_h - joint;
    const double b_ref = joint - resid;
    auto check = [](double a, double ref, const char* what) {
        if (!(std::fabs(a - ref) / kLn2 <= kIdentityToleranceBits)) {
            throw InvariantViolation(std::string("decompose_along: path total of ") + what +
                                     " disagrees with the direct value");
        }
    };
    check(c, c_ref, "v_h");
    check(b, b_ref, "v_r");
    check(w, c_ref - b_ref, "v_s");

    d.total_correlation = u.from_nats(c);
    d.binding_entropy = u.from_nats(b);
    d.o_information = u.from_nats(w);
    return d;
}

}  // namespace hoi
