#include "scene.hpp"

#include <fstream>
#include <numeric>

namespace qsot::cli {

namespace {

template <class T>
const T& lookup(const std::map<std::string, T>& m, const std::string& kind, const std::string& name) {
    auto it = m.find(name);
    if (it == m.end()) throw InputError("/" + kind, "no entry named '" + name + "'");
    return it->second;
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object()) throw InputError(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw InputError(where, "missing field '" + key + "'");
    return *it;
}

double number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw InputError(where, "expected a number");
    return j.get<double>();
}

std::size_t count(const Json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError(where, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::string name_of(const Json& j, const std::string& where) {
    if (!j.is_string()) throw InputError(where, "expected a name");
    return j.get<std::string>();
}

cplx entry(const Json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw InputError(where, "expected a number or a [re, im] pair");
}

AlgebraShape parse_algebra(const Json& j, const std::string& where) {
    try {
        if (j.is_array()) {
            std::vector<std::size_t> blocks;
            for (std::size_t i = 0; i < j.size(); ++i) blocks.push_back(count(j[i], at(where, i)));
            return AlgebraShape(std::move(blocks));
        }
        if (j.is_object() && j.contains("classical"))
            return AlgebraShape::classical(count(j["classical"], at(where, "classical")));
    } catch (const std::invalid_argument& e) {
        throw InputError(where, e.what());
    }
    throw InputError(where, "expected a block list or {\"classical\": n}");
}

AlgebraElement parse_blocks(const Json& obj, const AlgebraShape& shape, const std::string& where) {
    const Json& blocks = require(obj, "blocks", where);
    const std::string bw = at(where, "blocks");
    if (!blocks.is_array() || blocks.size() != shape.num_blocks())
        throw InputError(bw, "expected " + std::to_string(shape.num_blocks()) + " blocks");
    std::vector<Matrix> data;
    for (std::size_t b = 0; b < shape.num_blocks(); ++b) {
        Matrix m = parse_matrix(blocks[b], at(bw, b));
        const auto n = static_cast<Eigen::Index>(shape.block(b));
        if (m.rows() != n || m.cols() != n)
            throw InputError(at(bw, b), "block must be " + std::to_string(n) + "x" + std::to_string(n));
        data.push_back(std::move(m));
    }
    return {shape, std::move(data)};
}

AlgebraElement parse_state(const Scene& s, const Json& j, const std::string& where, double tol) {
    const std::string alg = name_of(require(j, "algebra", where), at(where, "algebra"));
    if (!s.algebras.count(alg)) throw InputError(at(where, "algebra"), "unknown algebra '" + alg + "'");
    const AlgebraShape& shape = s.algebras.at(alg);
    if (j.contains("distribution")) {
        const Json& d = j["distribution"];
        const std::string dw = at(where, "distribution");
        if (!shape.is_classical()) throw InputError(dw, "distributions need a classical algebra");
        if (!d.is_array() || d.size() != shape.num_blocks())
            throw InputError(dw, "expected " + std::to_string(shape.num_blocks()) + " probabilities");
        std::vector<double> p;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double v = number(d[i], at(dw, i));
            if (v < -tol) throw InputError(at(dw, i), "negative probability " + std::to_string(v));
            p.push_back(v);
        }
        const double total = std::accumulate(p.begin(), p.end(), 0.0);
        if (std::abs(total - 1.0) > tol) throw InputError(dw, "probabilities sum to " + std::to_string(total));
        return AlgebraElement::diagonal(shape, p);
    }
    AlgebraElement a = parse_blocks(j, shape, where);
    if (!a.is_self_adjoint(tol)) throw InputError(where, "state is not self-adjoint");
    if (std::abs(a.trace() - 1.0) > tol) throw InputError(where, "state does not have unit trace");
    return a;
}

LinearOperatorMap parse_channel(const Scene& s, const Json& j, const std::string& where, double tol) {
    const std::string kind = name_of(require(j, "kind", where), at(where, "kind"));
    auto shape_field = [&](const char* key) -> const AlgebraShape& {
        const std::string n = name_of(require(j, key, where), at(where, key));
        if (!s.algebras.count(n)) throw InputError(at(where, key), "unknown algebra '" + n + "'");
        return s.algebras.at(n);
    };
    try {
        if (kind == "identity") return LinearOperatorMap::identity(shape_field("source"));
        if (kind == "stochastic") {
            const Matrix m = parse_matrix(require(j, "matrix", where), at(where, "matrix"));
            if (m.imag().cwiseAbs().maxCoeff() > 0.0)
                throw InputError(at(where, "matrix"), "stochastic matrix must be real");
            auto ch = classical_channel(m.real(), tol);
            if (j.contains("source") && !(shape_field("source") == ch.source()))
                throw InputError(at(where, "source"), "does not match the matrix columns");
            if (j.contains("target") && !(shape_field("target") == ch.target()))
                throw InputError(at(where, "target"), "does not match the matrix rows");
            return ch;
        }
        if (kind == "unitary") {
            const AlgebraShape& src = shape_field("source");
            const AlgebraElement u = parse_blocks(j, src, where);
            if (!u.is_unitary(tol)) throw InputError(at(where, "blocks"), "not unitary");
            return ad_unitary(u, tol);
        }
        const AlgebraShape& src = shape_field("source");
        const AlgebraShape& tgt = shape_field("target");
        if (kind == "kraus") {
            const Json& ops = require(j, "operators", where);
            const std::string ow = at(where, "operators");
            if (!ops.is_array() || ops.empty()) throw InputError(ow, "expected a non-empty list of matrices");
            std::vector<Matrix> kraus;
            for (std::size_t i = 0; i < ops.size(); ++i) kraus.push_back(parse_matrix(ops[i], at(ow, i)));
            const auto hs = static_cast<Eigen::Index>(src.hilbert_dim());
            const auto ht = static_cast<Eigen::Index>(tgt.hilbert_dim());
            Matrix sum = Matrix::Zero(hs, hs);
            for (std::size_t i = 0; i < kraus.size(); ++i) {
                if (kraus[i].rows() != ht || kraus[i].cols() != hs)
                    throw InputError(at(ow, i), "Kraus operator must be " + std::to_string(ht) + "x" + std::to_string(hs));
                sum += kraus[i].adjoint() * kraus[i];
            }
            const double dev = (sum - Matrix::Identity(hs, hs)).cwiseAbs().maxCoeff();
            if (dev > tol) throw InputError(ow, "sum of K^dag K differs from the identity by " + std::to_string(dev));
            return from_kraus(src, tgt, kraus);
        }
        if (kind == "superoperator") {
            Matrix m = parse_matrix(require(j, "matrix", where), at(where, "matrix"));
            return LinearOperatorMap(src, tgt, std::move(m));
        }
    } catch (const std::invalid_argument& e) {
        throw InputError(where, e.what());
    }
    throw InputError(at(where, "kind"), "unknown channel kind '" + kind + "'");
}

StarIsomorphism parse_iso(const Scene& s, const Json& j, const std::string& where, double tol) {
    const std::string src_name = name_of(require(j, "source", where), at(where, "source"));
    if (!s.algebras.count(src_name)) throw InputError(at(where, "source"), "unknown algebra '" + src_name + "'");
    const AlgebraShape& src = s.algebras.at(src_name);
    AlgebraShape tgt = src;
    if (j.contains("target")) {
        const std::string n = name_of(j["target"], at(where, "target"));
        if (!s.algebras.count(n)) throw InputError(at(where, "target"), "unknown algebra '" + n + "'");
        tgt = s.algebras.at(n);
    }
    std::vector<std::size_t> perm(tgt.num_blocks());
    std::iota(perm.begin(), perm.end(), 0);
    if (j.contains("perm")) {
        const Json& p = j["perm"];
        if (!p.is_array()) throw InputError(at(where, "perm"), "expected a list of block indices");
        perm.clear();
        for (std::size_t i = 0; i < p.size(); ++i) perm.push_back(count(p[i], at(at(where, "perm"), i)));
    }
    std::vector<Matrix> us;
    if (j.contains("unitaries")) {
        const Json& u = j["unitaries"];
        if (!u.is_array()) throw InputError(at(where, "unitaries"), "expected a list of matrices");
        for (std::size_t i = 0; i < u.size(); ++i) us.push_back(parse_matrix(u[i], at(at(where, "unitaries"), i)));
    } else {
        for (std::size_t n : tgt.blocks())
            us.push_back(Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    }
    try {
        return StarIsomorphism(src, tgt, std::move(perm), std::move(us), tol);
    } catch (const std::invalid_argument& e) {
        throw InputError(where, e.what());
    }
}

const Json& section(const Json& doc, const char* key) {
    static const Json empty = Json::object();
    auto it = doc.find(key);
    if (it == doc.end()) return empty;
    if (!it->is_object()) throw InputError(std::string("/") + key, "expected an object of named entries");
    return *it;
}

}  // namespace

Matrix parse_matrix(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw InputError(where, "expected a non-empty array of rows");
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw InputError(at(where, r), "ragged matrix row");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = entry(j[r][c], at(at(where, r), c));
    }
    return m;
}

Json emit_matrix(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

const AlgebraShape& Scene::algebra(const std::string& n) const { return lookup(algebras, "algebras", n); }
const AlgebraElement& Scene::state(const std::string& n) const { return lookup(states, "states", n); }
const AlgebraElement& Scene::hamiltonian(const std::string& n) const { return lookup(hamiltonians, "hamiltonians", n); }
const LinearOperatorMap& Scene::channel(const std::string& n) const { return lookup(channels, "channels", n); }
const StarIsomorphism& Scene::iso(const std::string& n) const { return lookup(isos, "isos", n); }

Chain Scene::chain(const std::string& n) const {
    const auto& names = lookup(chains, "chains", n);
    std::vector<LinearOperatorMap> maps;
    for (const auto& c : names) maps.push_back(channel(c));
    try {
        return Chain(std::move(maps));
    } catch (const std::invalid_argument& e) {
        throw InputError("/chains/" + n, e.what());
    }
}

Scene parse_scene(const Json& doc, double tol) {
    if (!doc.is_object()) throw InputError("", "scene must be a JSON object");
    Scene s;
    for (const auto& [k, v] : section(doc, "algebras").items())
        s.algebras.emplace(k, parse_algebra(v, "/algebras/" + k));
    for (const auto& [k, v] : section(doc, "states").items())
        s.states.emplace(k, parse_state(s, v, "/states/" + k, tol));
    for (const auto& [k, v] : section(doc, "hamiltonians").items()) {
        const std::string where = "/hamiltonians/" + k;
        const std::string alg = name_of(require(v, "algebra", where), where + "/algebra");
        if (!s.algebras.count(alg)) throw InputError(where + "/algebra", "unknown algebra '" + alg + "'");
        AlgebraElement h = parse_blocks(v, s.algebras.at(alg), where);
        if (!h.is_self_adjoint(tol)) throw InputError(where, "Hamiltonian is not self-adjoint");
        s.hamiltonians.emplace(k, std::move(h));
    }
    for (const auto& [k, v] : section(doc, "channels").items())
        s.channels.emplace(k, parse_channel(s, v, "/channels/" + k, tol));
    for (const auto& [k, v] : section(doc, "chains").items()) {
        const std::string where = "/chains/" + k;
        if (!v.is_array() || v.empty()) throw InputError(where, "expected a non-empty list of channel names");
        std::vector<std::string> names;
        for (std::size_t i = 0; i < v.size(); ++i) {
            names.push_back(name_of(v[i], at(where, i)));
            if (!s.channels.count(names.back())) throw InputError(at(where, i), "unknown channel '" + names.back() + "'");
        }
        s.chains.emplace(k, std::move(names));
        s.chain(k);  // composability
    }
    for (const auto& [k, v] : section(doc, "isos").items()) s.isos.emplace(k, parse_iso(s, v, "/isos/" + k, tol));
    return s;
}

Scene load_scene(const std::string& path, double tol) {
    std::ifstream in(path);
    if (!in) throw InputError(path, "cannot open scene file");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path, e.what());
    }
    return parse_scene(doc, tol);
}

Json emit_scene(const Scene& s) {
    Json doc = Json::object();
    // Shapes only reachable through a channel (e.g. a stochastic matrix
    // without named endpoints) get a generated algebra entry.
    std::map<std::string, AlgebraShape> named = s.algebras;
    auto name_of_shape = [&](const AlgebraShape& shape) {
        for (const auto& [k, v] : named)
            if (v == shape) return k;
        std::string k = "algebra";
        for (std::size_t b : shape.blocks()) k += "_" + std::to_string(b);
        named.emplace(k, shape);
        return k;
    };
    auto blocks = [](const AlgebraElement& a) {
        Json out = Json::array();
        for (const auto& b : a.blocks()) out.push_back(emit_matrix(b));
        return out;
    };
    doc["algebras"] = Json::object();
    Json& states = doc["states"] = Json::object();
    for (const auto& [k, v] : s.states) states[k] = {{"algebra", name_of_shape(v.shape())}, {"blocks", blocks(v)}};
    Json& hams = doc["hamiltonians"] = Json::object();
    for (const auto& [k, v] : s.hamiltonians) hams[k] = {{"algebra", name_of_shape(v.shape())}, {"blocks", blocks(v)}};
    Json& channels = doc["channels"] = Json::object();
    for (const auto& [k, v] : s.channels)
        channels[k] = {{"kind", "superoperator"},
                       {"source", name_of_shape(v.source())},
                       {"target", name_of_shape(v.target())},
                       {"matrix", emit_matrix(v.matrix())}};
    Json& chains = doc["chains"] = Json::object();
    for (const auto& [k, v] : s.chains) chains[k] = v;
    Json& isos = doc["isos"] = Json::object();
    for (const auto& [k, v] : s.isos) {
        Json us = Json::array();
        for (const auto& u : v.unitaries()) us.push_back(emit_matrix(u));
        isos[k] = {{"source", name_of_shape(v.source())},
                   {"target", name_of_shape(v.target())},
                   {"perm", v.perm()},
                   {"unitaries", std::move(us)}};
    }
    for (const auto& [k, v] : named) doc["algebras"][k] = v.blocks();
    return doc;
}

}  // namespace qsot::cli
