#include "layerscope/json_io.hpp"

#include <json.hpp>
#include <sstream>

#include "layerscope/errors.hpp"

namespace layerscope {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string &where, const std::string &what) {
    fail(ErrorCode::Parse, where + ": " + what);
}

json load(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        std::ostringstream msg;
        msg << "malformed JSON at byte " << e.byte;
        parse_fail("$", msg.str());
    }
}

const json &member(const json &doc, const std::string &where, const char *key) {
    if (!doc.is_object()) {
        parse_fail(where, "expected an object");
    }
    auto it = doc.find(key);
    if (it == doc.end()) {
        parse_fail(where, std::string("missing \"") + key + "\"");
    }
    return *it;
}

int positive_int(const json &doc, const std::string &where, const char *key) {
    const json &v = member(doc, where, key);
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 4096) {
        parse_fail(where + "." + key, "expected a positive integer");
    }
    return v.get<int>();
}

Complex entry(const json &e, const std::string &where) {
    if (e.is_number()) {
        return {e.get<double>(), 0.0};
    }
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        return {e[0].get<double>(), e[1].get<double>()};
    }
    parse_fail(where, "expected a number or [re, im]");
}

ComplexMatrix matrix(const json &m, const std::string &where, int rows, int cols) {
    if (!m.is_array() || static_cast<int>(m.size()) != rows) {
        parse_fail(where, "expected " + std::to_string(rows) + " rows");
    }
    ComplexMatrix out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const std::string row_at = where + "[" + std::to_string(i) + "]";
        const json &row = m[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols) {
            parse_fail(row_at, "expected " + std::to_string(cols) + " entries");
        }
        for (int j = 0; j < cols; ++j) {
            out(i, j) = entry(row[static_cast<size_t>(j)], row_at + "[" + std::to_string(j) + "]");
        }
    }
    return out;
}

HermitianOperator hermitian(const json &m, const std::string &where, int d) {
    const ComplexMatrix raw = matrix(m, where, d, d);
    try {
        return HermitianOperator(raw);
    } catch (const Error &e) {
        parse_fail(where, e.what());
    }
}

const json &array_member(const json &doc, const std::string &where, const char *key) {
    const json &v = member(doc, where, key);
    if (!v.is_array() || v.empty()) {
        parse_fail(where + "." + key, "expected a non-empty array");
    }
    return v;
}

Observable observable_from(const json &doc, const std::string &where) {
    const int d = positive_int(doc, where, "dim");
    const json &effects = array_member(doc, where, "effects");
    std::vector<HermitianOperator> ops;
    for (size_t x = 0; x < effects.size(); ++x) {
        ops.push_back(hermitian(effects[x], where + ".effects[" + std::to_string(x) + "]", d));
    }
    return Observable(std::move(ops));
}

Channel channel_from(const json &doc, const std::string &where, double tol) {
    const int din = positive_int(doc, where, "dim_in");
    const int dout = positive_int(doc, where, "dim_out");
    const bool has_choi = doc.contains("choi");
    const bool has_kraus = doc.contains("kraus");
    if (has_choi == has_kraus) {
        parse_fail(where, "expected exactly one of \"choi\" or \"kraus\"");
    }
    if (has_choi) {
        return Channel::from_choi(hermitian(doc["choi"], where + ".choi", din * dout), din, dout, tol);
    }
    const json &kraus = array_member(doc, where, "kraus");
    std::vector<ComplexMatrix> ks;
    for (size_t k = 0; k < kraus.size(); ++k) {
        ks.push_back(matrix(kraus[k], where + ".kraus[" + std::to_string(k) + "]", dout, din));
    }
    return Channel::from_kraus(ks, din, dout, tol);
}

Instrument instrument_from(const json &doc, const std::string &where, double tol) {
    const int d = positive_int(doc, where, "dim");
    const json &maps = array_member(doc, where, "outcome_maps");
    std::vector<HermitianOperator> ops;
    for (size_t x = 0; x < maps.size(); ++x) {
        ops.push_back(hermitian(maps[x], where + ".outcome_maps[" + std::to_string(x) + "]", d * d));
    }
    return Instrument::from_choi_maps(std::move(ops), d, tol);
}

AncillaWitness ancilla_from(const json &doc, const std::string &where, double tol) {
    Channel ch = channel_from(member(doc, where, "channel"), where + ".channel", tol);
    Observable a_prime = observable_from(member(doc, where, "a_prime"), where + ".a_prime");
    return {std::move(ch), std::move(a_prime)};
}

void add_witness(Witnesses &w, const json &doc, const std::string &where, double tol) {
    if (!doc.is_object()) {
        parse_fail(where, "expected an object");
    }
    if (doc.contains("a_prime")) {
        w.ancillas.push_back(ancilla_from(doc, where, tol));
    } else if (doc.contains("outcome_maps")) {
        w.instruments.push_back(instrument_from(doc, where, tol));
    } else {
        Channel ch = channel_from(doc, where, tol);
        if (ch.dim_out() != ch.dim_in() * ch.dim_in()) {
            parse_fail(where, "a broadcasting channel needs dim_out = dim_in^2");
        }
        w.broadcasters.emplace_back(std::move(ch));
    }
}

json matrix_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Observable parse_observable(const std::string &text) {
    return observable_from(load(text), "$");
}

Channel parse_channel(const std::string &text, double tol) {
    return channel_from(load(text), "$", tol);
}

Instrument parse_instrument(const std::string &text, double tol) {
    return instrument_from(load(text), "$", tol);
}

AncillaWitness parse_ancilla_witness(const std::string &text, double tol) {
    return ancilla_from(load(text), "$", tol);
}

Witnesses parse_witnesses(const std::string &text, double tol) {
    const json doc = load(text);
    Witnesses w;
    if (doc.is_object() && doc.contains("witnesses")) {
        const json &list = doc["witnesses"];
        if (!list.is_array()) {
            parse_fail("$.witnesses", "expected an array");
        }
        for (size_t i = 0; i < list.size(); ++i) {
            add_witness(w, list[i], "$.witnesses[" + std::to_string(i) + "]", tol);
        }
    } else {
        add_witness(w, doc, "$", tol);
    }
    return w;
}

std::string observable_to_json(const Observable &o) {
    json effects = json::array();
    for (const auto &e : o.effects()) {
        effects.push_back(matrix_json(e.matrix()));
    }
    return json{{"dim", o.dim()}, {"effects", std::move(effects)}}.dump();
}

std::string channel_to_json(const Channel &c) {
    return json{{"dim_in", c.dim_in()}, {"dim_out", c.dim_out()}, {"choi", matrix_json(c.choi().matrix())}}.dump();
}

std::string verdict_to_json(const LayerVerdict &v) {
    json doc;
    doc["strongest_layer"] = to_string(v.strongest_layer);
    doc["strict_stratum"] = v.strict_stratum ? json(to_string(*v.strict_stratum)) : json(nullptr);
    doc["certainty"] = to_string(v.certainty);
    doc["evidence"] = v.evidence;
    return doc.dump(2);
}

std::string verdict_to_text(const LayerVerdict &v) {
    std::ostringstream out;
    out << "strongest layer: " << to_string(v.strongest_layer) << "\n";
    out << "strict stratum:  " << (v.strict_stratum ? to_string(*v.strict_stratum) : "-") << "\n";
    out << "certainty:       " << to_string(v.certainty) << "\n";
    out << "evidence:\n";
    for (const auto &e : v.evidence) {
        out << "  - " << e << "\n";
    }
    return out.str();
}

}  // namespace layerscope
