#pragma once

// Dense discrete joint distributions and the entropy primitives built on them.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hoi {

// Information unit: logarithm base used when reporting a quantity.
class LogUnit {
public:
    static LogUnit bit() { return LogUnit(2.0, "bit"); }
    static LogUnit nat();
    // Base-13 unit for 13-symbol (chromatic + rest) alphabets.
    static LogUnit mut() { return LogUnit(13.0, "mut"); }
    // Throws InvalidArgument unless base > 1.
    static LogUnit with_base(double base);
    // Accepts "bit", "nat", "mut" or "base:<real>".
    static LogUnit parse(const std::string& text);

    double base() const { return base_; }
    const std::string& name() const { return name_; }

    double from_nats(double nats) const { return nats / ln_base_; }
    double to_nats(double value) const { return value * ln_base_; }
    // log_base(x)
    double log(double x) const;

private:
    LogUnit(double base, std::string name);

    double base_;
    double ln_base_;
    std::string name_;
};

// Sorted, duplicate-free set of variable indices.
class IndexSet {
public:
    IndexSet() = default;
    // Sorts the input; throws InvalidArgument on duplicates.
    IndexSet(std::initializer_list<std::size_t> indices);
    explicit IndexSet(std::vector<std::size_t> indices);

    static IndexSet range(std::size_t first, std::size_t last);  // [first, last)
    static IndexSet from_mask(std::uint64_t mask);

    std::size_t size() const { return idx_.size(); }
    bool empty() const { return idx_.empty(); }
    std::size_t operator[](std::size_t i) const { return idx_[i]; }
    auto begin() const { return idx_.begin(); }
    auto end() const { return idx_.end(); }
    const std::vector<std::size_t>& indices() const { return idx_; }

    bool contains(std::size_t i) const;
    std::uint64_t mask() const;
    // Throws IndexOutOfRange if any index >= n.
    void check_bounds(std::size_t n) const;

    IndexSet united(const IndexSet& other) const;
    bool disjoint(const IndexSet& other) const;
    // {0..n-1} minus this set.
    IndexSet complement(std::size_t n) const;

    // 1-based concatenated digits, e.g. {0,2} -> "13". Indices >= 9 are
    // wrapped in parentheses so the string stays unambiguous.
    std::string to_string() const;

    auto operator<=>(const IndexSet&) const = default;
    bool operator==(const IndexSet&) const = default;

private:
    std::vector<std::size_t> idx_;
};

// Probability mass function over a product of finite alphabets, stored densely
// in row-major mixed-radix order (last variable fastest). Immutable.
class JointTable {
public:
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t num_vars() const { return shape_.size(); }
    std::size_t size() const { return probs_.size(); }
    std::span<const double> probs() const { return probs_; }
    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t max_alphabet() const;

    double at(std::span<const std::size_t> config) const;
    std::size_t flat_index(std::span<const std::size_t> config) const;
    std::vector<std::size_t> config_of(std::size_t flat) const;

    // Same table with new labels; empty clears them.
    JointTable with_labels(std::vector<std::string> labels) const;

    bool operator==(const JointTable&) const = default;

private:
    friend JointTable make_joint(std::vector<std::size_t>, std::vector<double>,
                                 std::vector<std::string>);
    friend JointTable detail_trusted_table(std::vector<std::size_t>, std::vector<double>);

    JointTable(std::vector<std::size_t> shape, std::vector<double> probs,
               std::vector<std::string> labels)
        : shape_(std::move(shape)), probs_(std::move(probs)), labels_(std::move(labels)) {}

    std::vector<std::size_t> shape_;
    std::vector<double> probs_;
    std::vector<std::string> labels_;
};

inline constexpr double kInputNormTolerance = 1e-9;
inline constexpr double kNegativeClamp = 1e-15;
inline constexpr double kRoundingClamp = 1e-12;

// Validates and builds a table. Entries in [-1e-15, 0) are clamped to zero and
// a sum within 1e-9 of one is renormalized.
// Throws DimensionMismatch, NegativeMass, NotNormalized.
JointTable make_joint(std::vector<std::size_t> shape, std::vector<double> probs,
                      std::vector<std::string> labels = {});

// Builds from data already known to be a valid pmf (internal use by generators
// that normalize exactly). Still renormalizes to absorb rounding.
JointTable detail_trusted_table(std::vector<std::size_t> shape, std::vector<double> probs);

JointTable marginalize(const JointTable& t, const IndexSet& keep);
JointTable product(const JointTable& a, const JointTable& b);
// Reorders axes: result axis i is input axis perm[i].
JointTable permute_axes(const JointTable& t, std::span<const std::size_t> perm);

// Entropy in nats of the marginal on `vars` (the empty set has zero entropy).
double entropy_nats(const JointTable& t, const IndexSet& vars);

double entropy(const JointTable& t, const LogUnit& u);
double conditional_entropy(const JointTable& t, const IndexSet& target, const IndexSet& given,
                           const LogUnit& u);
double mutual_information(const JointTable& t, const IndexSet& a, const IndexSet& b,
                          const std::optional<IndexSet>& given, const LogUnit& u);

// -sum p log p in nats over a flat pmf, accumulated in extended precision.
double plogp_nats(std::span<const double> p);

}  // namespace hoi
