#include "hoi/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hoi/error.hpp"

namespace hoi {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": malformed JSON (" + e.what() + ")");
    }
}

const json& require(const json& obj, const char* key, const char* what) {
    if (!obj.is_object()) throw ParseError(std::string(what) + ": top level must be an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(std::string(what) + ": missing field '" + key + "'");
    return *it;
}

std::size_t as_count(const json& v, const std::string& field) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
        throw ParseError("field '" + field + "': expected a non-negative integer");
    }
    const auto i = v.get<long long>();
    if (i < 0) throw ParseError("field '" + field + "': expected a non-negative integer");
    return static_cast<std::size_t>(i);
}

double as_real(const json& v, const std::string& field) {
    if (!v.is_number()) throw ParseError("field '" + field + "': expected a number");
    return v.get<double>();
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

json rounded(double x) { return round_sig(x); }

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double round_sig(double x, int digits) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

// ---------------------------------------------------------------------------

JointTable distribution_from_json(const std::string& text) {
    const json doc = parse_json(text, "distribution");
    const json& shape_j = require(doc, "shape", "distribution");
    const json& probs_j = require(doc, "probs", "distribution");
    if (!shape_j.is_array()) throw ParseError("field 'shape': expected an array");
    if (!probs_j.is_array()) throw ParseError("field 'probs': expected an array");

    std::vector<std::size_t> shape;
    for (std::size_t k = 0; k < shape_j.size(); ++k) {
        shape.push_back(as_count(shape_j[k], "shape[" + std::to_string(k) + "]"));
    }
    std::vector<double> probs;
    probs.reserve(probs_j.size());
    for (std::size_t k = 0; k < probs_j.size(); ++k) {
        probs.push_back(as_real(probs_j[k], "probs[" + std::to_string(k) + "]"));
    }
    std::vector<std::string> labels;
    if (auto it = doc.find("labels"); it != doc.end() && !it->is_null()) {
        if (!it->is_array()) throw ParseError("field 'labels': expected an array of strings");
        for (const auto& l : *it) {
            if (!l.is_string()) throw ParseError("field 'labels': expected an array of strings");
            labels.push_back(l.get<std::string>());
        }
    }
    return make_joint(std::move(shape), std::move(probs), std::move(labels));
}

json distribution_to_json(const JointTable& t) {
    json doc;
    doc["shape"] = t.shape();
    doc["probs"] = std::vector<double>(t.probs().begin(), t.probs().end());
    if (!t.labels().empty()) doc["labels"] = t.labels();
    return doc;
}

Hamiltonian hamiltonian_from_json(const std::string& text) {
    const json doc = parse_json(text, "hamiltonian");
    const std::size_t n = as_count(require(doc, "n", "hamiltonian"), "n");
    if (n < 1) throw ParseError("field 'n': must be >= 1");
    const json& terms = require(doc, "terms", "hamiltonian");
    if (!terms.is_array()) throw ParseError("field 'terms': expected an array");
    Hamiltonian h(n);
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const std::string where = "terms[" + std::to_string(k) + "]";
        const json& term = terms[k];
        if (!term.is_object() || !term.contains("gamma") || !term.contains("J")) {
            throw ParseError("field '" + where + "': expected {\"gamma\":[...], \"J\":x}");
        }
        if (!term["gamma"].is_array()) throw ParseError("field '" + where + ".gamma': expected an array");
        std::vector<std::size_t> gamma;
        for (const auto& g : term["gamma"]) gamma.push_back(as_count(g, where + ".gamma"));
        h.set(IndexSet(std::move(gamma)), as_real(term["J"], where + ".J"));
    }
    return h;
}

json hamiltonian_to_json(const Hamiltonian& h) {
    json doc;
    doc["n"] = h.num_vars();
    json terms = json::array();
    for (const auto& [g, j] : h.terms()) terms.push_back({{"gamma", g.indices()}, {"J", j}});
    doc["terms"] = std::move(terms);
    return doc;
}

// ---------------------------------------------------------------------------

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    if (quoted) throw ParseError("csv: unterminated quoted field");
    out.push_back(trim(cur));
    return out;
}

SeriesTable series_from_csv(const std::string& csv_text, const std::string& alphabet_json) {
    const json doc = parse_json(alphabet_json, "alphabet");
    const json& chans = require(doc, "channels", "alphabet");
    if (!chans.is_array() || chans.empty()) throw ParseError("field 'channels': expected a non-empty array");

    std::map<std::string, std::size_t> by_name;
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> alphabets;
    std::vector<std::map<std::string, std::uint32_t>> lookup;
    for (std::size_t c = 0; c < chans.size(); ++c) {
        const std::string where = "channels[" + std::to_string(c) + "]";
        const json& ch = chans[c];
        if (!ch.is_object() || !ch.contains("name") || !ch["name"].is_string()) {
            throw ParseError("field '" + where + ".name': expected a string");
        }
        if (!ch.contains("alphabet") || !ch["alphabet"].is_array() || ch["alphabet"].empty()) {
            throw ParseError("field '" + where + ".alphabet': expected a non-empty array of strings");
        }
        const auto name = ch["name"].get<std::string>();
        if (by_name.count(name)) throw ParseError("field '" + where + ".name': duplicate channel '" + name + "'");
        by_name[name] = c;
        names.push_back(name);
        std::vector<std::string> alpha;
        std::map<std::string, std::uint32_t> lk;
        for (const auto& s : ch["alphabet"]) {
            if (!s.is_string()) throw ParseError("field '" + where + ".alphabet': symbols must be strings");
            const auto sym = s.get<std::string>();
            if (lk.count(sym)) throw ParseError("field '" + where + ".alphabet': duplicate symbol '" + sym + "'");
            lk[sym] = static_cast<std::uint32_t>(alpha.size());
            alpha.push_back(sym);
        }
        alphabets.push_back(std::move(alpha));
        lookup.push_back(std::move(lk));
    }

    std::istringstream in(csv_text);
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            header = split_csv_line(line);
            break;
        }
    }
    if (header.empty()) throw EmptySeries("series csv: missing header row");
    if (header.size() != names.size()) {
        throw ParseError("series csv: header has " + std::to_string(header.size()) +
                         " columns but the alphabet declares " + std::to_string(names.size()) + " channels");
    }
    // column -> channel
    std::vector<std::size_t> col_channel;
    std::vector<bool> used(names.size(), false);
    for (const auto& h : header) {
        auto it = by_name.find(h);
        if (it == by_name.end()) throw ParseError("series csv: column '" + h + "' not declared in the alphabet");
        if (used[it->second]) throw ParseError("series csv: column '" + h + "' repeated");
        used[it->second] = true;
        col_channel.push_back(it->second);
    }

    std::vector<std::uint32_t> data;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw ParseError("series csv line " + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " cells");
        }
        std::vector<std::uint32_t> rec(names.size());
        for (std::size_t k = 0; k < cells.size(); ++k) {
            const std::size_t c = col_channel[k];
            auto it = lookup[c].find(cells[k]);
            if (it == lookup[c].end()) {
                throw ParseError("series csv line " + std::to_string(row) + ": symbol '" + cells[k] +
                                 "' not in the alphabet of channel '" + names[c] + "'");
            }
            rec[c] = it->second;
        }
        data.insert(data.end(), rec.begin(), rec.end());
    }
    if (data.empty()) throw EmptySeries("series csv: no data rows");
    return SeriesTable(std::move(names), std::move(alphabets), std::move(data));
}

// ---------------------------------------------------------------------------

json report_to_json(const MetricReport& r) {
    json doc;
    doc["unit"] = r.unit.name();
    doc["unit_base"] = r.unit.base();
    doc["shape"] = r.shape;
    doc["H_joint"] = rounded(r.joint_entropy);
    doc["negentropy"] = rounded(r.negentropy);
    doc["total_correlation"] = rounded(r.total_correlation);
    doc["binding_entropy"] = rounded(r.binding_entropy);
    doc["o_information"] = rounded(r.o_information);
    doc["tse"] = rounded(r.tse);
    doc["sum_CB"] = rounded(r.sum_cb);
    json res = json::array();
    for (double v : r.residuals) res.push_back(rounded(v));
    doc["residuals"] = std::move(res);
    json mn = json::array();
    for (double v : r.marginal_negentropies) mn.push_back(rounded(v));
    doc["marginal_negentropies"] = std::move(mn);
    json lo = json::array();
    for (const auto& row : r.local_omega) {
        json jr = json::array();
        for (const auto& v : row) jr.push_back(v ? rounded(*v) : json(nullptr));
        lo.push_back(std::move(jr));
    }
    doc["local_omega"] = std::move(lo);
    return doc;
}

std::string report_to_csv(const MetricReport& r) {
    std::ostringstream out;
    auto num = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    out << "field,value\n";
    out << "unit," << r.unit.name() << "\n";
    out << "H_joint," << num(r.joint_entropy) << "\n";
    out << "negentropy," << num(r.negentropy) << "\n";
    out << "total_correlation," << num(r.total_correlation) << "\n";
    out << "binding_entropy," << num(r.binding_entropy) << "\n";
    out << "o_information," << num(r.o_information) << "\n";
    out << "tse," << num(r.tse) << "\n";
    out << "sum_CB," << num(r.sum_cb) << "\n";
    for (std::size_t j = 0; j < r.residuals.size(); ++j) {
        out << "residuals[" << j << "]," << num(r.residuals[j]) << "\n";
    }
    for (std::size_t j = 0; j < r.marginal_negentropies.size(); ++j) {
        out << "marginal_negentropies[" << j << "]," << num(r.marginal_negentropies[j]) << "\n";
    }
    for (std::size_t i = 0; i < r.local_omega.size(); ++i) {
        for (std::size_t j = i + 1; j < r.local_omega.size(); ++j) {
            if (r.local_omega[i][j]) {
                out << "local_omega[" << i << "][" << j << "]," << num(*r.local_omega[i][j]) << "\n";
            }
        }
    }
    return out.str();
}

}  // namespace hoi
