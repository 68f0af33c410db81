#include "hoi/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hoi/dist.hpp"
#include "hoi/error.hpp"
#include "hoi/estimation.hpp"
#include "hoi/experiments.hpp"
#include "hoi/generators.hpp"
#include "hoi/io.hpp"
#include "hoi/lattice.hpp"
#include "hoi/metrics.hpp"

namespace hoi {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;
constexpr int kExitInvariant = 4;

struct Globals {
    std::string unit = "bit";
    std::uint64_t seed = 1;
    std::string format;  // empty: the command's default
    std::string out;
};

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string format_or(const Globals& g, const char* fallback) {
    const std::string f = g.format.empty() ? fallback : g.format;
    if (f != "json" && f != "csv") throw InvalidArgument("--format: expected json or csv, got '" + f + "'");
    return f;
}

std::string timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// "4,2,1,3,5" (1-based) -> zero-based indices.
std::vector<std::size_t> parse_order(const std::string& text, std::size_t n) {
    std::vector<std::size_t> order;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(item, &pos);
        } catch (const std::exception&) {
            throw ParseError("--order: '" + item + "' is not an index");
        }
        if (pos != item.size() || v < 1 || v > n) {
            throw ParseError("--order: '" + item + "' is not an index in 1.." + std::to_string(n));
        }
        order.push_back(v - 1);
    }
    return order;
}

// "2..5" or "2,3,5".
std::vector<std::size_t> parse_orders(const std::string& text) {
    std::vector<std::size_t> out;
    try {
        const auto dots = text.find("..");
        if (dots != std::string::npos) {
            const std::size_t lo = std::stoul(text.substr(0, dots));
            const std::size_t hi = std::stoul(text.substr(dots + 2));
            if (lo < 1 || hi < lo) throw ParseError("");
            for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) out.push_back(std::stoul(item));
        }
    } catch (const std::exception&) {
        throw ParseError("--k: expected a range like 2..5 or a list like 2,3,5, got '" + text + "'");
    }
    if (out.empty()) throw ParseError("--k: no orders given");
    return out;
}

std::vector<std::size_t> parse_shape(const std::string& text) {
    std::vector<std::size_t> shape;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            shape.push_back(std::stoul(item));
        } catch (const std::exception&) {
            throw ParseError("--shape: '" + item + "' is not a size");
        }
    }
    if (shape.empty()) throw ParseError("--shape: empty");
    return shape;
}

std::string distribution_csv(const JointTable& t) {
    std::ostringstream os;
    for (std::size_t j = 0; j < t.num_vars(); ++j) os << (j ? "," : "") << "x" << (j + 1);
    os << ",p\n";
    for (std::size_t f = 0; f < t.size(); ++f) {
        const auto cfg = t.config_of(f);
        for (std::size_t j = 0; j < cfg.size(); ++j) os << cfg[j] << ",";
        os << num(t.probs()[f]) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsArgs {
    std::string dist;
    std::string series;
    std::string alphabet;
    double smooth = 0.0;
    std::size_t max_vars = kDefaultSubsetCap;
};

JointTable load_joint(const std::string& dist, const std::string& series, const std::string& alphabet,
                      double smooth) {
    if (!dist.empty() && !series.empty()) throw InvalidArgument("give either --dist or --series, not both");
    if (!dist.empty()) return distribution_from_json(read_file(dist));
    if (series.empty()) throw InvalidArgument("an input is required: --dist FILE or --series FILE --alphabet FILE");
    if (alphabet.empty()) throw InvalidArgument("--series needs its alphabet sidecar (--alphabet FILE)");
    return empirical_joint(series_from_csv(read_file(series), read_file(alphabet)), smooth);
}

std::string cmd_metrics(const Globals& g, const MetricsArgs& a) {
    const LogUnit u = LogUnit::parse(g.unit);
    const JointTable t = load_joint(a.dist, a.series, a.alphabet, a.smooth);
    const MetricReport r = metric_report(t, u, a.max_vars);
    if (format_or(g, "json") == "csv") return report_to_csv(r);
    return report_to_json(r).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// lattice

struct LatticeArgs {
    std::string dist;
    bool all = false;
    bool assembly = false;
    std::string order;
    bool check = false;
};

json weights_json(const EdgeWeights& w) {
    return {{"v_h", round_sig(w.v_h)}, {"v_r", round_sig(w.v_r)}, {"v_s", round_sig(w.v_s)}};
}

std::string cmd_lattice(const Globals& g, const LatticeArgs& a) {
    const LogUnit u = LogUnit::parse(g.unit);
    if (a.all && a.assembly) throw InvalidArgument("give either --all-paths or --assembly, not both");
    if (a.dist.empty()) throw InvalidArgument("--dist FILE is required");
    const JointTable t = distribution_from_json(read_file(a.dist));
    const std::size_t n = t.num_vars();

    std::vector<LatticePath> paths;
    if (a.all) {
        if (!a.order.empty()) throw InvalidArgument("--order only applies to --assembly");
        paths = all_paths(n);
    } else {
        if (n > kLatticeCap) {
            throw TooLarge("lattice: n = " + std::to_string(n) + " exceeds the lattice cap of " +
                           std::to_string(kLatticeCap));
        }
        std::vector<std::size_t> order;
        if (a.order.empty()) {
            for (std::size_t i = 0; i < n; ++i) order.push_back(i);
        } else {
            order = parse_order(a.order, n);
        }
        paths.push_back(assembly_path(n, order));
    }

    SubsetEntropies h(t);
    std::vector<PathDecomposition> decs;
    decs.reserve(paths.size());
    for (const auto& p : paths) decs.push_back(decompose_along(h, p, u));

    const double c_ref = total_correlation(t, u);
    const double b_ref = binding_entropy(t, u);
    const double w_ref = o_information(t, u);
    const double tol = u.from_nats(kIdentityToleranceBits * std::log(2.0));
    if (a.check) {
        for (std::size_t k = 0; k < decs.size(); ++k) {
            const auto& d = decs[k];
            if (std::fabs(d.total_correlation - c_ref) > tol || std::fabs(d.binding_entropy - b_ref) > tol ||
                std::fabs(d.o_information - w_ref) > tol) {
                throw InvariantViolation("lattice --check: path " + paths[k].to_string() +
                                         " totals differ from the direct values");
            }
        }
    }

    if (format_or(g, "json") == "csv") {
        std::ostringstream os;
        os << "path,step,from,to,term,v_h,v_r,v_s\n";
        for (std::size_t k = 0; k < decs.size(); ++k) {
            const auto& terms = decs[k].edge_terms;
            for (std::size_t s = 0; s < terms.size(); ++s) {
                const auto& e = terms[s];
                os << (k + 1) << "," << (s + 1) << "," << e.edge.from.to_string() << "," << e.edge.to.to_string()
                   << ",\"" << e.description << "\"," << num(e.weights.v_h) << "," << num(e.weights.v_r) << ","
                   << num(e.weights.v_s) << "\n";
            }
            os << (k + 1) << ",total,,,," << num(decs[k].total_correlation) << ","
               << num(decs[k].binding_entropy) << "," << num(decs[k].o_information) << "\n";
        }
        return os.str();
    }

    json doc;
    doc["unit"] = u.name();
    doc["unit_base"] = u.base();
    doc["n"] = n;
    doc["mode"] = a.all ? "all-paths" : "assembly";
    doc["reference"] = {{"total_correlation", round_sig(c_ref)},
                        {"binding_entropy", round_sig(b_ref)},
                        {"o_information", round_sig(w_ref)}};
    if (a.all) {
        json nodes = json::array();
        for (const auto& p : all_partitions(n)) nodes.push_back(p.to_string());
        doc["nodes"] = std::move(nodes);
        json edges = json::array();
        for (const auto& e : covering_edges(n)) {
            json row = {{"from", e.from.to_string()}, {"to", e.to.to_string()}};
            row.update(weights_json(edge_weights(t, e, u)));
            edges.push_back(std::move(row));
        }
        doc["edges"] = std::move(edges);
    }
    json jp = json::array();
    for (std::size_t k = 0; k < decs.size(); ++k) {
        json terms = json::array();
        for (const auto& e : decs[k].edge_terms) {
            json row = {{"from", e.edge.from.to_string()}, {"to", e.edge.to.to_string()}, {"term", e.description}};
            row.update(weights_json(e.weights));
            terms.push_back(std::move(row));
        }
        jp.push_back({{"path", paths[k].to_string()},
                      {"edges", std::move(terms)},
                      {"total_correlation", round_sig(decs[k].total_correlation)},
                      {"binding_entropy", round_sig(decs[k].binding_entropy)},
                      {"o_information", round_sig(decs[k].o_information)}});
    }
    doc["num_paths"] = paths.size();
    doc["paths"] = std::move(jp);
    if (a.check) doc["check"] = "passed";
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
    std::string kind;
    std::size_t n = 3;
    std::size_t m = 2;
    double eta = 0.0;
    std::string side = "upper";
    double lambda = 0.5;
    std::string shape;
    std::size_t k = 2;
    double beta = 0.1;
    std::string hamiltonian;
    bool seed_given = false;
};

std::string cmd_generate(const Globals& g, const GenerateArgs& a) {
    json prov = {{"generator", a.kind}, {"version", kVersion}};
    std::optional<JointTable> table;
    std::optional<Hamiltonian> ham;
    if (a.kind == "copy") {
        table = nary_copy(a.n, a.m);
        prov["n"] = a.n;
        prov["m"] = a.m;
    } else if (a.kind == "xor") {
        table = nary_xor(a.n, a.m);
        prov["n"] = a.n;
        prov["m"] = a.m;
    } else if (a.kind == "bsc") {
        if (a.side != "upper" && a.side != "lower") throw InvalidArgument("--side: expected upper or lower");
        table = bsc_extremal(a.n, a.eta, a.side == "upper" ? BscSide::upper : BscSide::lower);
        prov["n"] = a.n;
        prov["eta"] = a.eta;
        prov["side"] = a.side;
    } else if (a.kind == "mixture") {
        table = mixture_copy_xor(a.n, a.lambda);
        prov["n"] = a.n;
        prov["lambda"] = a.lambda;
    } else if (a.kind == "random") {
        const auto shape = a.shape.empty() ? std::vector<std::size_t>(a.n, a.m) : parse_shape(a.shape);
        table = random_simplex(shape, g.seed, 0);
        prov["shape"] = shape;
        prov["seed"] = g.seed;
    } else if (a.kind == "gibbs" || a.kind == "hamiltonian") {
        if (!a.hamiltonian.empty()) {
            if (a.kind == "hamiltonian") throw InvalidArgument("--hamiltonian FILE only applies to gibbs");
            ham = hamiltonian_from_json(read_file(a.hamiltonian));
            prov["hamiltonian"] = a.hamiltonian;
        } else {
            if (a.k < 1 || a.k > a.n) throw InvalidArgument("--k: interaction order must be in 1..n");
            ham = random_hamiltonian(a.n, a.k, g.seed, 0);
            prov["n"] = a.n;
            prov["k"] = a.k;
            prov["seed"] = g.seed;
        }
        if (a.kind == "gibbs") {
            table = gibbs(*ham, a.beta);
            prov["beta"] = a.beta;
        }
    } else {
        throw InvalidArgument("unknown generator '" + a.kind +
                              "' (expected copy, xor, bsc, mixture, random, gibbs or hamiltonian)");
    }

    const std::string fmt = format_or(g, "json");
    if (!table) {
        if (fmt == "csv") throw InvalidArgument("hamiltonian output is JSON only");
        json doc = hamiltonian_to_json(*ham);
        doc["provenance"] = std::move(prov);
        return doc.dump(2) + "\n";
    }
    if (fmt == "csv") return distribution_csv(*table);
    json doc = distribution_to_json(*table);
    doc["provenance"] = std::move(prov);
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
    std::string name;
    std::optional<std::size_t> n;
    double beta = 0.1;
    std::string k = "2..5";
    std::size_t trials = 200;
    std::optional<std::size_t> samples;
    std::size_t grid = 21;
};

std::string cmd_experiment(const Globals& g, const ExperimentArgs& a, std::ostream& err) {
    const LogUnit u = LogUnit::parse(g.unit);
    const std::string fmt = format_or(g, "csv");
    std::ostringstream os;
    json rows = json::array();
    json summary;
    json params;

    if (a.name == "hamiltonian-sweep") {
        const std::size_t n = a.n.value_or(5);
        const auto orders = parse_orders(a.k);
        for (auto k : orders) {
            if (k < 1 || k > n) throw InvalidArgument("--k: orders must lie in 1..n");
        }
        if (a.trials < 2) throw InvalidArgument("--trials: need at least 2");
        const auto sweep = hamiltonian_sweep(n, a.beta, orders, a.trials, g.seed);
        params = {{"n", n}, {"beta", a.beta}, {"k", orders}, {"trials", a.trials}};
        os << "k,trial,omega_bits,seed\n";
        for (std::size_t i = 0; i < sweep.orders.size(); ++i) {
            const auto& e = sweep.ensembles[i];
            for (std::size_t t = 0; t < e.omega_bits.size(); ++t) {
                os << sweep.orders[i] << "," << t << "," << num(e.omega_bits[t]) << "," << g.seed << "\n";
                rows.push_back({{"k", sweep.orders[i]}, {"trial", t}, {"omega_bits", round_sig(e.omega_bits[t])},
                                {"seed", g.seed}});
            }
            summary[std::to_string(sweep.orders[i])] = {{"mean", e.summary.mean},
                                                        {"sd", e.summary.sd},
                                                        {"std_error", e.summary.std_error},
                                                        {"ci_low", e.summary.ci_low},
                                                        {"ci_high", e.summary.ci_high}};
        }
    } else if (a.name == "tse-correlation") {
        const std::size_t n = a.n.value_or(3);
        const std::size_t samples = a.samples.value_or(1000);
        const auto res = tse_correlation(n, samples, g.seed, u);
        params = {{"n", n}, {"samples", samples}};
        os << "sample,tse,tse_bipartition,sum_cb,omega,seed\n";
        for (std::size_t i = 0; i < res.tse.size(); ++i) {
            os << i << "," << num(res.tse[i]) << "," << num(res.tse_bipartition[i]) << "," << num(res.sum_cb[i])
               << "," << num(res.omega[i]) << "," << g.seed << "\n";
            rows.push_back({{"sample", i}, {"tse", round_sig(res.tse[i])},
                            {"tse_bipartition", round_sig(res.tse_bipartition[i])},
                            {"sum_cb", round_sig(res.sum_cb[i])}, {"omega", round_sig(res.omega[i])},
                            {"seed", g.seed}});
        }
        summary = {{"pearson_tse_sum_cb", res.r}};
    } else if (a.name == "mixture-sweep") {
        const std::size_t n = a.n.value_or(3);
        const auto res = mixture_sweep(n, a.grid, u);
        params = {{"n", n}, {"grid", a.grid}};
        os << "lambda,tse,omega,total_correlation,binding_entropy,seed\n";
        for (std::size_t i = 0; i < res.lambda.size(); ++i) {
            os << num(res.lambda[i]) << "," << num(res.tse[i]) << "," << num(res.omega[i]) << ","
               << num(res.total_correlation[i]) << "," << num(res.binding_entropy[i]) << "," << g.seed << "\n";
            rows.push_back({{"lambda", round_sig(res.lambda[i])}, {"tse", round_sig(res.tse[i])},
                            {"omega", round_sig(res.omega[i])},
                            {"total_correlation", round_sig(res.total_correlation[i])},
                            {"binding_entropy", round_sig(res.binding_entropy[i])}, {"seed", g.seed}});
        }
        summary = {{"tse_at_0", res.tse.front()},
                   {"tse_at_1", res.tse.back()},
                   {"omega_at_0", res.omega.front()},
                   {"omega_at_1", res.omega.back()}};
    } else if (a.name == "psi-comparison") {
        const std::size_t n = a.n.value_or(4);
        const std::size_t samples = a.samples.value_or(500);
        const auto res = psi_comparison(n, samples, g.seed, u);
        params = {{"n", n}, {"samples", samples}};
        os << "sample,omega,psi_convexity";
        for (std::size_t k = 1; k < n; ++k) os << ",psi_" << k;
        os << ",seed\n";
        for (std::size_t i = 0; i < res.omega.size(); ++i) {
            os << i << "," << num(res.omega[i]) << "," << num(res.psi_convexity[i]);
            json psi = json::array();
            for (double v : res.psi[i]) {
                os << "," << num(v);
                psi.push_back(round_sig(v));
            }
            os << "," << g.seed << "\n";
            rows.push_back({{"sample", i}, {"omega", round_sig(res.omega[i])},
                            {"psi_convexity", round_sig(res.psi_convexity[i])}, {"psi", std::move(psi)},
                            {"seed", g.seed}});
        }
        summary = {{"pearson_omega_psi", res.r}};
    } else {
        throw InvalidArgument("unknown experiment '" + a.name +
                              "' (expected hamiltonian-sweep, tse-correlation, mixture-sweep or psi-comparison)");
    }

    const json provenance = {{"experiment", a.name}, {"seed", g.seed}, {"version", kVersion},
                             {"unit", u.name()},      {"parameters", params}};
    json side = {{"summary", summary}, {"provenance", provenance}};
    side["provenance"]["timestamp"] = timestamp_utc();
    err << side.dump() << "\n";

    if (fmt == "json") {
        json doc = {{"experiment", a.name}, {"parameters", params}, {"rows", std::move(rows)},
                    {"summary", summary},   {"provenance", provenance}};
        return doc.dump(2) + "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// bootstrap

struct BootstrapArgs {
    std::string series;
    std::string alphabet;
    std::size_t block_len = 0;
    std::size_t replicates = 1000;
    double smooth = 0.0;
    std::vector<std::string> metrics;
};

std::string cmd_bootstrap(const Globals& g, const BootstrapArgs& a) {
    const LogUnit u = LogUnit::parse(g.unit);
    if (a.series.empty()) throw InvalidArgument("--series FILE is required");
    if (a.alphabet.empty()) throw InvalidArgument("--series needs its alphabet sidecar (--alphabet FILE)");
    if (a.replicates < 2) throw InvalidArgument("--replicates: need at least 2");
    const SeriesTable s = series_from_csv(read_file(a.series), read_file(a.alphabet));
    BootstrapOptions opts;
    opts.block_len = a.block_len;
    opts.replicates = a.replicates;
    opts.seed = g.seed;
    opts.smoothing = a.smooth;
    const std::string fmt = format_or(g, "csv");

    if (!a.metrics.empty()) {
        std::vector<Metric> ms;
        for (const auto& name : a.metrics) ms.push_back(named_metric(name));
        const Statistic stat = [&ms](const JointTable& t, const LogUnit& unit) {
            std::vector<double> v;
            for (const auto& m : ms) v.push_back(m(t, unit));
            return v;
        };
        const auto res = circular_block_bootstrap(s, stat, opts, u);
        if (fmt == "json") {
            json rows = json::array();
            for (std::size_t i = 0; i < res.size(); ++i) {
                rows.push_back({{"metric", a.metrics[i]}, {"value", round_sig(res[i].point)},
                                {"std_error", round_sig(res[i].std_error)}});
            }
            json doc = {{"unit", u.name()},
                        {"steps", s.num_steps()},
                        {"metrics", std::move(rows)},
                        {"provenance",
                         {{"seed", g.seed}, {"block_len", res.front().block_len}, {"replicates", a.replicates},
                          {"version", kVersion}}}};
            return doc.dump(2) + "\n";
        }
        std::ostringstream os;
        os << "metric,value,se,block_len,replicates,seed\n";
        for (std::size_t i = 0; i < res.size(); ++i) {
            os << a.metrics[i] << "," << num(res[i].point) << "," << num(res[i].std_error) << "," << res[i].block_len
               << "," << res[i].replicates << "," << g.seed << "\n";
        }
        return os.str();
    }

    const auto rep = pairwise_report(s, u, opts);
    const auto pair_name = [&](const PairRow& r) {
        return std::to_string(r.i + 1) + "-" + std::to_string(r.j + 1);
    };
    if (fmt == "json") {
        json rows = json::array();
        for (const auto& r : rep.rows) {
            rows.push_back({{"pair", pair_name(r)},
                            {"channels", {s.channels()[r.i], s.channels()[r.j]}},
                            {"mi", round_sig(r.mi.point)},
                            {"mi_se", round_sig(r.mi.std_error)},
                            {"cmi", round_sig(r.cmi.point)},
                            {"cmi_se", round_sig(r.cmi.std_error)},
                            {"omega_ij", round_sig(r.omega.point)},
                            {"omega_ij_se", round_sig(r.omega.std_error)}});
        }
        json doc = {{"unit", u.name()},
                    {"steps", s.num_steps()},
                    {"pairs", std::move(rows)},
                    {"o_information", round_sig(rep.omega.point)},
                    {"o_information_se", round_sig(rep.omega.std_error)},
                    {"provenance",
                     {{"seed", g.seed}, {"block_len", rep.omega.block_len}, {"replicates", a.replicates},
                      {"version", kVersion}}}};
        return doc.dump(2) + "\n";
    }
    std::ostringstream os;
    os << "pair,mi,mi_se,cmi,cmi_se,omega_ij,omega_ij_se\n";
    for (const auto& r : rep.rows) {
        os << pair_name(r) << "," << num(r.mi.point) << "," << num(r.mi.std_error) << "," << num(r.cmi.point) << ","
           << num(r.cmi.std_error) << "," << num(r.omega.point) << "," << num(r.omega.std_error) << "\n";
    }
    os << "all,,,,," << num(rep.omega.point) << "," << num(rep.omega.std_error) << "\n";
    return os.str();
}

void write_output(const Globals& g, const std::string& text, std::ostream& out) {
    if (g.out.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw InputError("--out: cannot open '" + g.out + "' for writing");
    f << text;
    if (!f.flush()) throw InputError("--out: write to '" + g.out + "' failed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact multivariate information measures on discrete distributions", "hoi"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Globals g;
    app.add_option("--unit", g.unit, "bit | nat | mut | base:<real>")->capture_default_str();
    app.add_option("--seed", g.seed, "seed for randomized commands")->capture_default_str();
    app.add_option("--format", g.format, "json | csv (default depends on the command)");
    app.add_option("--out", g.out, "write primary output to PATH instead of stdout");

    MetricsArgs ma;
    auto* metrics = app.add_subcommand("metrics", "full metric report of a distribution or series");
    metrics->add_option("--dist", ma.dist, "distribution JSON");
    metrics->add_option("--series", ma.series, "series CSV");
    metrics->add_option("--alphabet", ma.alphabet, "alphabet sidecar JSON for --series");
    metrics->add_option("--smooth", ma.smooth, "add-lambda pseudo-counts for --series");
    metrics->add_option("--max-vars", ma.max_vars, "subset enumeration cap")->capture_default_str();

    LatticeArgs la;
    auto* lattice = app.add_subcommand("lattice", "path decompositions on the partition lattice");
    lattice->add_option("--dist", la.dist, "distribution JSON");
    lattice->add_flag("--all-paths", la.all, "decompose along every source-to-sink path");
    lattice->add_flag("--assembly", la.assembly, "decompose along one assembly path (default)");
    lattice->add_option("--order", la.order, "assembly order, 1-based, e.g. 4,2,1,3,5");
    lattice->add_flag("--check", la.check, "fail with exit 4 unless every path total matches");

    GenerateArgs ga;
    auto* generate = app.add_subcommand("generate", "write a named or random distribution");
    generate->add_option("kind", ga.kind, "copy | xor | bsc | mixture | random | gibbs | hamiltonian")->required();
    generate->add_option("--n", ga.n)->capture_default_str();
    generate->add_option("--m", ga.m)->capture_default_str();
    generate->add_option("--eta", ga.eta)->capture_default_str();
    generate->add_option("--side", ga.side, "upper | lower")->capture_default_str();
    generate->add_option("--lambda", ga.lambda)->capture_default_str();
    generate->add_option("--shape", ga.shape, "comma-separated alphabet sizes");
    generate->add_option("--k", ga.k, "interaction order")->capture_default_str();
    generate->add_option("--beta", ga.beta, "inverse temperature")->capture_default_str();
    generate->add_option("--hamiltonian", ga.hamiltonian, "Hamiltonian JSON for gibbs");

    ExperimentArgs ea;
    std::size_t exp_n = 0, exp_samples = 0;
    auto* experiment = app.add_subcommand("experiment", "batch experiments, tidy CSV output");
    experiment->add_option("name", ea.name, "hamiltonian-sweep | tse-correlation | mixture-sweep | psi-comparison")
        ->required();
    auto* exp_n_opt = experiment->add_option("--n", exp_n);
    experiment->add_option("--beta", ea.beta)->capture_default_str();
    experiment->add_option("--k", ea.k, "orders, e.g. 2..5")->capture_default_str();
    experiment->add_option("--trials", ea.trials)->capture_default_str();
    auto* exp_samples_opt = experiment->add_option("--samples", exp_samples);
    experiment->add_option("--grid", ea.grid)->capture_default_str();

    BootstrapArgs ba;
    auto* bootstrap = app.add_subcommand("bootstrap", "pairwise estimates with block-bootstrap standard errors");
    bootstrap->add_option("--series", ba.series, "series CSV");
    bootstrap->add_option("--alphabet", ba.alphabet, "alphabet sidecar JSON");
    bootstrap->add_option("--block-len", ba.block_len, "block length (default ceil(T^(1/3)))");
    bootstrap->add_option("--replicates", ba.replicates)->capture_default_str();
    bootstrap->add_option("--smooth", ba.smooth);
    bootstrap->add_option("--metric", ba.metrics, "named metric instead of the pairwise table (repeatable)");

    for (auto* sub : {metrics, lattice, generate, experiment, bootstrap}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        std::string text;
        if (*metrics) {
            text = cmd_metrics(g, ma);
        } else if (*lattice) {
            text = cmd_lattice(g, la);
        } else if (*generate) {
            text = cmd_generate(g, ga);
        } else if (*experiment) {
            if (*exp_n_opt) ea.n = exp_n;
            if (*exp_samples_opt) ea.samples = exp_samples;
            text = cmd_experiment(g, ea, err);
        } else {
            text = cmd_bootstrap(g, ba);
        }
        write_output(g, text, out);
        return kExitOk;
    } catch (const CapError& e) {
        err << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const InvariantViolation& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    }
}

}  // namespace hoi
