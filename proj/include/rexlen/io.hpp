#pragma once

// File formats: language files ("alphabet k" header, one word per line as
// whitespace-separated letter ids, "-" for the empty word), weighting files
// ("letter numerator/denominator" per line), and automata as JSON objects
// with fields states/alphabet/initial/finals/delta (+ layers for layered
// automata).

#include "automata.hpp"
#include "envelopes.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace rexlen {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Language files

inline Language read_language(std::istream& in) {
    std::string tag;
    int k = 0;
    if (!(in >> tag) || tag != "alphabet" || !(in >> k) || k < 1)
        throw IoError("language file must start with 'alphabet k'");
    std::string line;
    std::getline(in, line);
    std::vector<Word> words;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        Word w;
        std::string item;
        bool any = false;
        while (ls >> item) {
            any = true;
            if (item == "-") break;
            try {
                w.push_back(std::stoi(item));
            } catch (...) {
                throw IoError("bad letter id '" + item + "' in language file");
            }
        }
        if (any) words.push_back(std::move(w));
    }
    return Language(k, std::move(words));
}

inline void write_language(std::ostream& out, const Language& l) {
    out << "alphabet " << l.alphabet_size() << "\n";
    for (const Word& w : l.words()) {
        if (w.empty()) {
            out << "-\n";
            continue;
        }
        for (std::size_t i = 0; i < w.size(); ++i) out << (i ? " " : "") << w[i];
        out << "\n";
    }
}

inline Language read_language_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open language file " + path);
    return read_language(in);
}

inline void write_language_file(const std::string& path, const Language& l) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    write_language(out, l);
}

// ---------------------------------------------------------------------------
// Weighting files: "letter numerator/denominator" or "letter integer"

inline Weighting read_weighting(std::istream& in) {
    std::map<int, mpq_class> mu;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        int letter;
        std::string frac;
        if (!(ls >> letter)) continue;
        if (!(ls >> frac)) throw IoError("weighting line needs 'letter value'");
        try {
            mpq_class q(frac);
            q.canonicalize();
            mu[letter] = q;
        } catch (...) {
            throw IoError("bad weight '" + frac + "'");
        }
    }
    return Weighting(std::move(mu));
}

inline Weighting read_weighting_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open weighting file " + path);
    return read_weighting(in);
}

// ---------------------------------------------------------------------------
// Automata as JSON

inline nlohmann::json dfa_to_json(const DfaSpec& d) {
    nlohmann::json j;
    j["states"] = d.states;
    j["alphabet"] = d.alphabet;
    j["initial"] = d.initial;
    j["finals"] = d.finals;
    nlohmann::json delta = nlohmann::json::array();
    for (int q = 0; q < d.states; ++q)
        for (int a = 1; a <= d.alphabet; ++a)
            if (int t = d.step(q, a); t >= 0) delta.push_back({q, a, t});
    j["delta"] = std::move(delta);
    return j;
}

inline DfaSpec dfa_from_json(const nlohmann::json& j) {
    DfaSpec d;
    d.states = j.at("states").get<int>();
    d.alphabet = j.at("alphabet").get<int>();
    d.initial = j.at("initial").get<int>();
    d.finals = j.at("finals").get<std::vector<int>>();
    if (d.states < 1 || d.alphabet < 1) throw IoError("automaton needs states >= 1 and alphabet >= 1");
    if (d.initial < 0 || d.initial >= d.states) throw IoError("initial state out of range");
    for (int f : d.finals)
        if (f < 0 || f >= d.states) throw IoError("final state out of range");
    d.delta.assign(static_cast<std::size_t>(d.states), std::vector<int>(static_cast<std::size_t>(d.alphabet), -1));
    for (const auto& edge : j.at("delta")) {
        if (!edge.is_array() || edge.size() != 3) throw IoError("delta entries are [state, letter, state]");
        int q = edge[0].get<int>(), a = edge[1].get<int>(), t = edge[2].get<int>();
        if (q < 0 || q >= d.states || t < 0 || t >= d.states || a < 1 || a > d.alphabet)
            throw IoError("delta entry out of range");
        int& slot = d.delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(a - 1)];
        if (slot != -1 && slot != t) throw IoError("automaton is not deterministic");
        slot = t;
    }
    return d;
}

inline nlohmann::json layered_to_json(const LayeredNFA& a) {
    nlohmann::json j;
    int total = 0;
    std::vector<std::vector<int>> ids(a.layer_sizes.size());
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < a.layer_sizes.size(); ++l) {
        nlohmann::json layer = nlohmann::json::array();
        ids[l].resize(static_cast<std::size_t>(a.layer_sizes[l]));
        for (int s = 0; s < a.layer_sizes[l]; ++s) {
            ids[l][static_cast<std::size_t>(s)] = total;
            layer.push_back(total++);
        }
        layers.push_back(std::move(layer));
    }
    j["states"] = total;
    j["alphabet"] = a.alphabet;
    j["initial"] = ids[0][static_cast<std::size_t>(a.initial)];
    nlohmann::json finals = nlohmann::json::array();
    for (auto [l, s] : a.finals) finals.push_back(ids[static_cast<std::size_t>(l)][static_cast<std::size_t>(s)]);
    j["finals"] = std::move(finals);
    nlohmann::json delta = nlohmann::json::array();
    for (std::size_t l = 0; l + 1 < a.layer_sizes.size(); ++l)
        for (int s = 0; s < a.layer_sizes[l]; ++s)
            for (int letter = 1; letter <= a.alphabet; ++letter)
                for (int t : a.succ[l][static_cast<std::size_t>(s)][static_cast<std::size_t>(letter - 1)])
                    delta.push_back({ids[l][static_cast<std::size_t>(s)], letter,
                                     ids[l + 1][static_cast<std::size_t>(t)]});
    j["delta"] = std::move(delta);
    j["layers"] = std::move(layers);
    return j;
}

inline LayeredNFA layered_from_json(const nlohmann::json& j) {
    LayeredNFA a;
    a.alphabet = j.at("alphabet").get<int>();
    auto layers = j.at("layers").get<std::vector<std::vector<int>>>();
    if (layers.empty()) throw IoError("layered automaton needs at least one layer");
    std::map<int, std::pair<int, int>> place; // global id -> (layer, index)
    for (std::size_t l = 0; l < layers.size(); ++l) {
        a.layer_sizes.push_back(static_cast<int>(layers[l].size()));
        for (std::size_t s = 0; s < layers[l].size(); ++s) {
            if (!place.emplace(layers[l][s], std::make_pair(static_cast<int>(l), static_cast<int>(s))).second)
                throw IoError("state listed in two layers");
        }
    }
    int initial = j.at("initial").get<int>();
    auto pit = place.find(initial);
    if (pit == place.end() || pit->second.first != 0) throw IoError("initial state must sit in layer 0");
    a.initial = pit->second.second;
    for (int f : j.at("finals").get<std::vector<int>>()) {
        auto it = place.find(f);
        if (it == place.end()) throw IoError("final state not in any layer");
        a.finals.push_back(it->second);
    }
    a.succ.resize(a.layer_sizes.size() - 1);
    for (std::size_t l = 0; l + 1 < a.layer_sizes.size(); ++l)
        a.succ[l].assign(static_cast<std::size_t>(a.layer_sizes[l]),
                         std::vector<std::vector<int>>(static_cast<std::size_t>(a.alphabet)));
    for (const auto& edge : j.at("delta")) {
        if (!edge.is_array() || edge.size() != 3) throw IoError("delta entries are [state, letter, state]");
        int q = edge[0].get<int>(), letter = edge[1].get<int>(), t = edge[2].get<int>();
        auto qi = place.find(q), ti = place.find(t);
        if (qi == place.end() || ti == place.end()) throw IoError("delta references unknown state");
        if (letter < 1 || letter > a.alphabet) throw IoError("delta letter out of range");
        if (ti->second.first != qi->second.first + 1)
            throw IoError("layered automata may only step to the next layer");
        auto& v = a.succ[static_cast<std::size_t>(qi->second.first)]
                        [static_cast<std::size_t>(qi->second.second)]
                        [static_cast<std::size_t>(letter - 1)];
        if (std::find(v.begin(), v.end(), ti->second.second) == v.end()) v.push_back(ti->second.second);
    }
    for (auto& per_layer : a.succ)
        for (auto& per_state : per_layer)
            for (auto& v : per_state) std::sort(v.begin(), v.end());
    return a;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

} // namespace rexlen
