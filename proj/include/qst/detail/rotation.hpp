#ifndef QST_DETAIL_ROTATION_HPP
#define QST_DETAIL_ROTATION_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qst/gates.hpp"
#include "qst/types.hpp"

namespace qst::detail {

// Pre-resolved per-basis rotation: the non-"Z" sites and their gates.
struct RotationPlan {
    std::vector<int> sites;
    std::vector<Eigen::Matrix2cd> gates;

    int rotated_count() const { return static_cast<int>(sites.size()); }
};

inline RotationPlan make_rotation_plan(const GateRegistry& registry, const Basis& basis,
                                       Eigen::Index n_sites, int rotated_limit) {
    if (Eigen::Index(basis.size()) != n_sites) {
        throw std::invalid_argument("rotation: basis length " +
                                    std::to_string(basis.size()) +
                                    " does not match system size " +
                                    std::to_string(n_sites));
    }
    validate_basis(registry, basis);
    RotationPlan plan;
    for (int j = 0; j < int(basis.size()); ++j) {
        if (basis[j] != "Z") {
            plan.sites.push_back(j);
            plan.gates.push_back(registry.gate(basis[j]));
        }
    }
    if (plan.rotated_count() > rotated_limit) {
        throw std::runtime_error("rotation: " + std::to_string(plan.rotated_count()) +
                                 " rotated sites exceed limit " +
                                 std::to_string(rotated_limit));
    }
    return plan;
}

// Visits every term of the rotated sum <sigma_b|U|psi>: assignments sigma of
// the rotated sites (others pinned to sigma_b), with the product of gate
// matrix elements U(sigma_b, sigma). The callback receives (sigma, u).
template <typename F>
void for_each_rotated_term(const RotationPlan& plan, const Eigen::Ref<const Vector>& sigma_b,
                           Vector& sigma, F&& visit) {
    sigma = sigma_b;
    const int r = plan.rotated_count();
    const std::uint64_t terms = std::uint64_t{1} << r;
    for (std::uint64_t bits = 0; bits < terms; ++bits) {
        Complex u(1.0, 0.0);
        for (int t = 0; t < r; ++t) {
            const int site = plan.sites[t];
            const int out_state = sigma_b(site) != 0.0 ? 1 : 0;
            const int in_state = int((bits >> t) & 1);
            sigma(site) = double(in_state);
            u *= plan.gates[t](out_state, in_state);
        }
        visit(sigma, u);
    }
}

}  // namespace qst::detail

#endif
