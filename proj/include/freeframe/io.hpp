#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "freeframe/basis.hpp"
#include "freeframe/element.hpp"

namespace freeframe {

using json = nlohmann::json;

// Element JSON schema:
//   {"level": n, "terms": [{"word": "...", "coeff": ...}]}
// Scalar level uses a single [re, im] pair per term; level n uses n*n pairs
// in row-major order. Round trips are bit-exact.

inline json to_json(const GroupAlgebraElement& x) {
    json terms = json::array();
    for (const auto& [w, c] : x.terms())
        terms.push_back({{"word", w.str()}, {"coeff", json::array({c.real(), c.imag()})}});
    return json{{"level", 1}, {"terms", terms}};
}

inline json to_json(const MatrixLevelElement& u) {
    if (u.level() == 1) {
        json terms = json::array();
        for (const auto& [w, m] : u.terms())
            terms.push_back({{"word", w.str()}, {"coeff", json::array({m(0, 0).real(), m(0, 0).imag()})}});
        return json{{"level", 1}, {"terms", terms}};
    }
    json terms = json::array();
    for (const auto& [w, m] : u.terms()) {
        json coeff = json::array();
        for (int i = 0; i < u.level(); ++i)
            for (int j = 0; j < u.level(); ++j)
                coeff.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        terms.push_back({{"word", w.str()}, {"coeff", coeff}});
    }
    return json{{"level", u.level()}, {"terms", terms}};
}

namespace detail {

inline complexd pair_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw input_error("coefficient entries must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline int level_of(const json& j) {
    if (!j.is_object() || !j.contains("level") || !j["level"].is_number_integer())
        throw input_error("element JSON must carry an integer \"level\"");
    int level = j["level"].get<int>();
    if (level < 1) throw input_error("element level must be positive");
    return level;
}

}  // namespace detail

inline GroupAlgebraElement scalar_element_from_json(const json& j) {
    if (detail::level_of(j) != 1) throw input_error("expected a scalar (level 1) element");
    GroupAlgebraElement x;
    for (const auto& term : j.value("terms", json::array())) {
        if (!term.contains("word") || !term["word"].is_string())
            throw input_error("element terms need a \"word\" string");
        x.add_term(Word::parse(term["word"].get<std::string>()),
                   detail::pair_from_json(term.at("coeff")));
    }
    return x;
}

inline MatrixLevelElement matrix_element_from_json(const json& j) {
    int level = detail::level_of(j);
    MatrixLevelElement u(level);
    for (const auto& term : j.value("terms", json::array())) {
        if (!term.contains("word") || !term["word"].is_string())
            throw input_error("element terms need a \"word\" string");
        Word w = Word::parse(term["word"].get<std::string>());
        const json& coeff = term.at("coeff");
        CMat m(level);
        if (level == 1) {
            m(0, 0) = detail::pair_from_json(coeff);
        } else {
            if (!coeff.is_array() || static_cast<int>(coeff.size()) != level * level)
                throw input_error("matrix coefficients need level^2 [re, im] pairs");
            for (int i = 0; i < level; ++i)
                for (int k = 0; k < level; ++k)
                    m(i, k) = detail::pair_from_json(coeff[static_cast<std::size_t>(i * level + k)]);
        }
        u.add_term(w, m);
    }
    return u;
}

// Coefficient sequences: {"level": n, "entries": [{"index": "1", "coeff": ...}]}
// Indices are emitted as decimal strings (they may exceed 2^53).

inline json to_json(const CoefficientSequence& u) {
    json entries = json::array();
    for (const auto& [i, m] : u.entries) {
        json coeff;
        if (u.level == 1) {
            coeff = json::array({m(0, 0).real(), m(0, 0).imag()});
        } else {
            coeff = json::array();
            for (int a = 0; a < u.level; ++a)
                for (int b = 0; b < u.level; ++b)
                    coeff.push_back(json::array({m(a, b).real(), m(a, b).imag()}));
        }
        entries.push_back({{"index", to_string(i)}, {"coeff", coeff}});
    }
    return json{{"level", u.level}, {"entries", entries}};
}

inline CoefficientSequence coefficient_sequence_from_json(const json& j) {
    CoefficientSequence u;
    u.level = detail::level_of(j);
    for (const auto& entry : j.value("entries", json::array())) {
        uint128 index = 0;
        const json& idx = entry.at("index");
        if (idx.is_string())
            index = parse_uint128(idx.get<std::string>());
        else if (idx.is_number_unsigned() || idx.is_number_integer())
            index = static_cast<uint128>(idx.get<std::uint64_t>());
        else
            throw input_error("entry index must be an integer or decimal string");
        if (index == 0) throw input_error("entry indices start at 1");
        const json& coeff = entry.at("coeff");
        CMat m(u.level);
        if (u.level == 1) {
            m(0, 0) = detail::pair_from_json(coeff);
        } else {
            if (!coeff.is_array() || static_cast<int>(coeff.size()) != u.level * u.level)
                throw input_error("matrix coefficients need level^2 [re, im] pairs");
            for (int a = 0; a < u.level; ++a)
                for (int b = 0; b < u.level; ++b)
                    m(a, b) = detail::pair_from_json(coeff[static_cast<std::size_t>(a * u.level + b)]);
        }
        u.entries.emplace(index, m);
    }
    return u;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw input_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace freeframe
