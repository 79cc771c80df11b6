#pragma once

#include <utility>
#include <vector>

#include "szego/common.hpp"

namespace szego {

/// Spinor dimension 2^floor((d+1)/2).
int spinor_dimension(int d);

/// d pairwise anticommuting Hermitian n x n matrices squaring to the identity.
struct CliffordBasis {
    int d = 0;
    int n = 0;
    std::vector<CMat> alphas;

    const CMat& alpha(int k) const { return alphas[static_cast<std::size_t>(k)]; }
};

/// Block form alpha_k = [[0, sigma_k], [sigma_k^*, 0]]. The sigma blocks are
/// sigma_k = gamma_k (k < d) and sigma_d = i * id, where gamma_1..gamma_{d-1}
/// come from the Pauli doubling recursion. Entries are exactly 0, +-1, +-i.
///
/// Throws ConfigError for d < 2.
CliffordBasis build_clifford_basis(int d);

/// Replaces every alpha_k by U alpha_k U^*.
CliffordBasis conjugate_basis(const CliffordBasis& basis, const CMat& unitary);

struct CliffordReport {
    int d = 0;
    int n = 0;
    double hermiticity = 0.0;     // max_k ||alpha_k - alpha_k^*||_max
    double anticommutation = 0.0; // max_{j,k} ||{alpha_j, alpha_k} - 2 delta_jk||_max
    double tracelessness = 0.0;   // max_k |tr alpha_k|
    double gram = 0.0;            // max_{j,k} |tr(alpha_j alpha_k) - n delta_jk|
    std::pair<int, int> worst_pair{-1, -1}; // 1-based (j,k) of the anticommutation maximum
    bool passed() const
    {
        return hermiticity == 0.0 && anticommutation == 0.0 && tracelessness == 0.0 && gram == 0.0;
    }
};

/// Exact validation: passes iff every deviation is exactly zero.
CliffordReport check_clifford(const CliffordBasis& basis);

} // namespace szego
