#ifndef QST_GATES_HPP
#define QST_GATES_HPP

#include <map>
#include <string>

#include "qst/types.hpp"

namespace qst {

struct UnitaryGate {
    std::string label;
    Eigen::Matrix2cd entries;
};

// Single-qubit measurement rotations, keyed by basis label. "Z" (identity),
// "X" (Hadamard) and "Y" (K gate) are always present after default
// construction; users may register more.
class GateRegistry {
public:
    GateRegistry();

    // Adds or replaces a gate. Rejects matrices with ||U^H U - I|| > 1e-8.
    void register_gate(const std::string& label, const Eigen::Matrix2cd& entries);

    bool contains(const std::string& label) const;
    const Eigen::Matrix2cd& gate(const std::string& label) const;

    std::map<std::string, UnitaryGate>::const_iterator begin() const { return gates_.begin(); }
    std::map<std::string, UnitaryGate>::const_iterator end() const { return gates_.end(); }

private:
    std::map<std::string, UnitaryGate> gates_;
};

GateRegistry default_gate_registry();

// Checks every label of a basis against the registry; throws on unknown ones.
void validate_basis(const GateRegistry& registry, const Basis& basis);

// Number of non-"Z" sites in a basis.
int rotated_site_count(const Basis& basis);

// Applies the product unitary U_{b_1} x ... x U_{b_N} to a dense state
// vector in canonical configuration order (site-by-site gate application).
ComplexVector apply_product_unitary(const GateRegistry& registry, const Basis& basis,
                                    const ComplexVector& state);

}  // namespace qst

#endif
