#include "fairrep/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fairrep::io {

using nlohmann::json;

namespace {

json parse_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InvalidInstance("malformed JSON");
    return j;
}

int get_int(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw InvalidInstance(std::string("missing integer field '") + key + "'");
    return j[key].get<int>();
}

}  // namespace

InstanceKind detect_kind(const std::string& text) {
    json j = parse_text(text);
    if (j.contains("kind")) return InstanceKind::Interval;
    if (j.contains("colors")) return InstanceKind::Bipartite;
    if (j.contains("edges")) return InstanceKind::EdgeSets;
    throw InvalidInstance("unrecognized instance schema");
}

VertexPartition parse_interval(const std::string& text) {
    json j = parse_text(text);
    if (!j.contains("kind") || !j["kind"].is_string())
        throw InvalidInstance("interval instance needs a 'kind'");
    std::string kind = j["kind"].get<std::string>();
    int n = get_int(j, "n");
    if (!j.contains("classes") || !j["classes"].is_array())
        throw InvalidInstance("interval instance needs 'classes'");
    std::vector<int> classes;
    for (const auto& c : j["classes"]) {
        if (!c.is_number_integer()) throw InvalidInstance("class indices must be integers");
        classes.push_back(c.get<int>() - 1);
    }
    if (static_cast<int>(classes.size()) != n)
        throw InvalidInstance("'classes' must list one class per vertex");
    if (kind == "path") return VertexPartition::path(std::move(classes));
    if (kind == "cycle") return VertexPartition::cycle(std::move(classes));
    if (kind == "power_cycle") {
        int s = j.contains("s") ? get_int(j, "s") : 2;
        return VertexPartition::power_cycle(s, std::move(classes));
    }
    throw InvalidInstance("kind must be path, cycle or power_cycle");
}

ColorMatrix parse_bipartite(const std::string& text) {
    json j = parse_text(text);
    int n = get_int(j, "n");
    int m = get_int(j, "m");
    if (!j.contains("colors") || !j["colors"].is_array())
        throw InvalidInstance("bipartite instance needs 'colors'");
    std::vector<int> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : j["colors"]) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw InvalidInstance("'colors' must be an n x n array");
        for (const auto& c : row) flat.push_back(c.get<int>() - 1);
    }
    if (static_cast<int>(flat.size()) != n * n)
        throw InvalidInstance("'colors' must be an n x n array");
    bool allow_empty = j.value("allow_empty_parts", false);
    return ColorMatrix(n, m, std::move(flat), allow_empty);
}

BipartiteEdgeSets parse_edge_sets(const std::string& text) {
    json j = parse_text(text);
    BipartiteEdgeSets es;
    es.left = get_int(j, "left");
    es.right = get_int(j, "right");
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw InvalidInstance("edges are [u, v] pairs");
        es.edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
    }
    if (j.contains("sets"))
        for (const auto& set : j["sets"]) {
            std::vector<int> ids;
            for (const auto& e : set) ids.push_back(e.get<int>() - 1);
            es.sets.push_back(std::move(ids));
        }
    if (j.contains("labels"))
        for (const auto& l : j["labels"]) es.labels.push_back(l.get<int>());
    es.validate();
    return es;
}

std::string render_interval(const VertexPartition& vp) {
    json j;
    switch (vp.kind) {
        case HostKind::Path: j["kind"] = "path"; break;
        case HostKind::Cycle: j["kind"] = "cycle"; break;
        case HostKind::PowerCycle: j["kind"] = "power_cycle"; break;
    }
    j["n"] = vp.n;
    if (vp.kind == HostKind::PowerCycle) j["s"] = vp.s;
    json classes = json::array();
    for (int c : vp.classes) classes.push_back(c + 1);
    j["classes"] = classes;
    return j.dump();
}

std::string render_bipartite(const ColorMatrix& cm) {
    json j;
    j["n"] = cm.n;
    j["m"] = cm.m;
    json rows = json::array();
    for (int i = 0; i < cm.n; ++i) {
        json row = json::array();
        for (int k = 0; k < cm.n; ++k) row.push_back(cm.color(i, k) + 1);
        rows.push_back(row);
    }
    j["colors"] = rows;
    if (cm.allow_empty_parts) j["allow_empty_parts"] = true;
    return j.dump();
}

std::string render_edge_sets(const BipartiteEdgeSets& es) {
    json j;
    j["left"] = es.left;
    j["right"] = es.right;
    json edges = json::array();
    for (auto [u, v] : es.edges) edges.push_back(json::array({u + 1, v + 1}));
    j["edges"] = edges;
    json sets = json::array();
    for (const auto& set : es.sets) {
        json ids = json::array();
        for (int e : set) ids.push_back(e + 1);
        sets.push_back(ids);
    }
    j["sets"] = sets;
    if (!es.labels.empty()) j["labels"] = es.labels;
    return j.dump();
}

namespace {

json report_to_json(const FairnessReport& rep) {
    json j;
    j["counts"] = rep.counts;
    json quotas = json::array(), deficits = json::array();
    for (const auto& q : rep.quotas) quotas.push_back(to_string(q));
    for (const auto& d : rep.deficits) deficits.push_back(to_string(d));
    j["quotas"] = quotas;
    j["deficits"] = deficits;
    j["total_deficit"] = to_string(rep.total_deficit);
    return j;
}

}  // namespace

std::string render_report(const FairnessReport& rep) { return report_to_json(rep).dump(); }

std::string render_set_solution(const IndependentSet& s, const FairnessReport& rep) {
    json j;
    json set = json::array();
    for (int p : s.members) set.push_back(p + 1);
    j["set"] = set;
    j["report"] = report_to_json(rep);
    return j.dump();
}

std::string render_perm_solution(const Permutation& p, const FairnessReport& rep) {
    json j;
    json perm = json::array();
    for (int v : p.images()) perm.push_back(v + 1);
    j["perm"] = perm;
    j["report"] = report_to_json(rep);
    return j.dump();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

}  // namespace fairrep::io
