#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tlfree/gibbs.hpp"
#include "tlfree/graph_model.hpp"

namespace tlfree {

using Json = nlohmann::json;

// Rationals travel as strings "p/q" so nothing is lost over the wire.
inline Json json_of(const Rational& r) { return rational_to_string(r); }

inline Rational rational_of(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    throw domain_error("expected a rational as \"p/q\" or integer");
}

// Laurent polynomial: delta-exponent -> rational coefficient.
inline Json json_of(const Laurent& l) {
    Json j = Json::object();
    for (auto& [e, v] : l.coeffs()) j[std::to_string(e)] = json_of(v);
    return j;
}

inline Laurent laurent_of(const Json& j) {
    if (!j.is_object()) throw domain_error("expected a coefficient object");
    Laurent out;
    for (auto& [key, val] : j.items()) out += Laurent::delta_pow(std::stoi(key), rational_of(val));
    return out;
}

inline Json json_of_pairs(const Pairing& p) {
    Json j = Json::array();
    for (auto& [a, b] : p) j.push_back(Json::array({a, b}));
    return j;
}

inline Pairing pairs_of(const Json& j) {
    if (!j.is_array()) throw domain_error("expected an array of point pairs");
    Pairing out;
    for (auto& e : j) {
        if (!e.is_array() || e.size() != 2) throw domain_error("pair must be a 2-element array");
        out.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    return out;
}

inline Json json_of(const TLElement& x) {
    Json terms = Json::array();
    for (auto& [d, c] : x.terms)
        terms.push_back({{"pairs", json_of_pairs(d.pairs)}, {"coeff", json_of(c)}});
    return {{"m", x.m}, {"terms", terms}};
}

inline TLElement tl_element_of(const Json& j) {
    TLElement out(j.at("m").get<int>());
    for (auto& t : j.at("terms"))
        out.add(TLDiagram(out.m, pairs_of(t.at("pairs"))), laurent_of(t.at("coeff")));
    return out;
}

// Graded element: top-level k, per-term boundary group sizes (left = k side
// points, top = 2n, right = k).
inline Json json_of(const PAElement& x) {
    Json terms = Json::array();
    for (auto& [key, c] : x.terms)
        terms.push_back({{"pairs", json_of_pairs(key.d.pairs)},
                         {"coeff", json_of(c)},
                         {"groups", {{"left", x.k}, {"top", 2 * key.n}, {"right", x.k}}}});
    return {{"k", x.k}, {"terms", terms}};
}

inline PAElement pa_element_of(const Json& j) {
    PAElement out(j.at("k").get<int>());
    for (auto& t : j.at("terms")) {
        int top = t.at("groups").at("top").get<int>();
        if (top < 0 || top % 2) throw domain_error("element term: top group must be even");
        out.add(top / 2, TLDiagram(top / 2 + out.k, pairs_of(t.at("pairs"))),
                laurent_of(t.at("coeff")));
    }
    return out;
}

inline Json json_of(const NCPartition& p) {
    Json blocks = Json::array();
    for (auto& b : p.blocks()) blocks.push_back(b);
    return {{"n", p.n()}, {"blocks", blocks}};
}

inline NCPartition partition_of(const Json& j) {
    return NCPartition(j.at("n").get<int>(),
                       j.at("blocks").get<std::vector<std::vector<int>>>());
}

inline Json json_of(const CumulantSeq& k) {
    Json j = Json::array();
    for (auto& v : k.k) j.push_back(json_of(v));
    return j;
}

inline Json json_of(const MomentSeq& m) {
    Json j = Json::array();
    for (auto& v : m.m) j.push_back(json_of(v));
    return j;
}

inline CumulantSeq cumulants_of(const Json& j) {
    if (!j.is_array()) throw domain_error("expected an array of cumulants");
    std::vector<Rational> k;
    for (auto& v : j) k.push_back(rational_of(v));
    return CumulantSeq(k);
}

inline MomentSeq moments_of(const Json& j) {
    if (!j.is_array()) throw domain_error("expected an array of moments");
    std::vector<Rational> m;
    for (auto& v : j) m.push_back(rational_of(v));
    return MomentSeq(m);
}

inline Potential potential_of(const Json& j) {
    std::vector<std::pair<std::string, TLElement>> in;
    for (auto& c : j.at("couplings"))
        in.push_back({c.at("name").get<std::string>(), tl_element_of(c.at("W"))});
    return Potential(in);
}

inline BipartiteGraph graph_of(const Json& j) {
    std::map<std::string, double> mu;
    for (auto& [v, w] : j.at("mu").items()) mu[v] = w.get<double>();
    std::vector<std::pair<std::string, std::string>> edges;
    for (auto& e : j.at("edges"))
        edges.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
    return BipartiteGraph(j.at("plus").get<std::vector<std::string>>(),
                          j.at("minus").get<std::vector<std::string>>(), edges, mu,
                          j.at("delta").get<double>());
}

inline std::vector<std::pair<int, int>> letters_of(const Json& j) {
    const Json& arr = j.is_object() ? j.at("letters") : j;
    if (!arr.is_array()) throw domain_error("expected a word as an array of letters");
    std::vector<std::pair<int, int>> out;
    for (auto& e : arr) {
        if (!e.is_array() || e.size() != 2) throw domain_error("letter must be a 2-element array");
        out.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    return out;
}

}  // namespace tlfree
