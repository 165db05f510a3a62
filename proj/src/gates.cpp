#include "qst/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace qst {

namespace {

double unitarity_deviation(const Eigen::Matrix2cd& u) {
    return (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace

GateRegistry::GateRegistry() {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::Matrix2cd z = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd hadamard;
    hadamard << s, s, s, -s;
    Eigen::Matrix2cd k;
    k << Complex(s, 0), Complex(0, -s), Complex(s, 0), Complex(0, s);
    register_gate("Z", z);
    register_gate("X", hadamard);
    register_gate("Y", k);
}

void GateRegistry::register_gate(const std::string& label, const Eigen::Matrix2cd& entries) {
    if (label.empty()) throw std::invalid_argument("register_gate: empty label");
    const double dev = unitarity_deviation(entries);
    if (!(dev <= 1e-8)) {
        throw std::invalid_argument("register_gate: matrix for \"" + label +
                                    "\" is not unitary (deviation " + std::to_string(dev) + ")");
    }
    gates_[label] = UnitaryGate{label, entries};
}

bool GateRegistry::contains(const std::string& label) const {
    return gates_.count(label) != 0;
}

const Eigen::Matrix2cd& GateRegistry::gate(const std::string& label) const {
    auto it = gates_.find(label);
    if (it == gates_.end()) {
        throw std::invalid_argument("gate registry: unknown label \"" + label + "\"");
    }
    return it->second.entries;
}

GateRegistry default_gate_registry() { return GateRegistry(); }

void validate_basis(const GateRegistry& registry, const Basis& basis) {
    for (const auto& label : basis) {
        if (!registry.contains(label)) {
            throw std::invalid_argument("basis: unknown gate label \"" + label + "\"");
        }
    }
}

int rotated_site_count(const Basis& basis) {
    int r = 0;
    for (const auto& label : basis) {
        if (label != "Z") ++r;
    }
    return r;
}

ComplexVector apply_product_unitary(const GateRegistry& registry, const Basis& basis,
                                    const ComplexVector& state) {
    const int n = static_cast<int>(basis.size());
    if (state.size() != (Eigen::Index(1) << n)) {
        throw std::invalid_argument("apply_product_unitary: state length != 2^N");
    }
    validate_basis(registry, basis);
    ComplexVector psi = state;
    // Site j toggles bit (n-1-j) of the canonical index.
    for (int j = 0; j < n; ++j) {
        if (basis[j] == "Z") continue;
        const Eigen::Matrix2cd& u = registry.gate(basis[j]);
        const std::int64_t stride = std::int64_t(1) << (n - 1 - j);
        for (std::int64_t base = 0; base < psi.size(); base += 2 * stride) {
            for (std::int64_t off = 0; off < stride; ++off) {
                const std::int64_t i0 = base + off;
                const std::int64_t i1 = i0 + stride;
                const Complex a = psi(i0);
                const Complex b = psi(i1);
                psi(i0) = u(0, 0) * a + u(0, 1) * b;
                psi(i1) = u(1, 0) * a + u(1, 1) * b;
            }
        }
    }
    return psi;
}

}  // namespace qst
