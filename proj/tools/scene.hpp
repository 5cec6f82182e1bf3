// scene.hpp: JSON scene documents for the qsot command line tool

#pragma once

#include "qsot/covariance.hpp"

#include "json.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsot::cli {

using Json = nlohmann::ordered_json;

/// Malformed or invalid input. `where` is a JSON pointer into the document.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(where) {}
    const std::string& where() const { return where_; }

private:
    std::string where_;
};

struct Scene {
    std::map<std::string, AlgebraShape> algebras;
    std::map<std::string, AlgebraElement> states;
    std::map<std::string, AlgebraElement> hamiltonians;
    std::map<std::string, LinearOperatorMap> channels;
    std::map<std::string, std::vector<std::string>> chains;
    std::map<std::string, StarIsomorphism> isos;

    const AlgebraShape& algebra(const std::string& name) const;
    const AlgebraElement& state(const std::string& name) const;
    const AlgebraElement& hamiltonian(const std::string& name) const;
    const LinearOperatorMap& channel(const std::string& name) const;
    const StarIsomorphism& iso(const std::string& name) const;
    Chain chain(const std::string& name) const;
};

Scene parse_scene(const Json& doc, double tol = kDefaultTol);
Scene load_scene(const std::string& path, double tol = kDefaultTol);

/// Canonical form: algebras by block list, states and Hamiltonians by
/// blocks, channels as superoperators, isos with explicit perm and unitaries.
Json emit_scene(const Scene& scene);

Json emit_matrix(const Matrix& m);
Matrix parse_matrix(const Json& j, const std::string& where);

}  // namespace qsot::cli
