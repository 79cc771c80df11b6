#include "szego/clifford.hpp"

#include <cmath>
#include <string>

namespace szego {

namespace {

CMat kron(const CMat& a, const CMat& b)
{
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// k Hermitian anticommuting involutions of size 2^floor(k/2).
std::vector<CMat> hermitian_generators(int k)
{
    const Complex I(0.0, 1.0);
    CMat s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, -I, I, 0;
    s3 << 1, 0, 0, -1;

    // Odd counts double: {G_j (x) s1} u {1 (x) s2, 1 (x) s3} takes m -> m + 2.
    std::vector<CMat> gens{CMat::Identity(1, 1)};
    while (static_cast<int>(gens.size()) < k) {
        const auto size = gens.front().rows();
        std::vector<CMat> next;
        for (const auto& g : gens) next.push_back(kron(g, s1));
        next.push_back(kron(CMat::Identity(size, size), s2));
        next.push_back(kron(CMat::Identity(size, size), s3));
        gens = std::move(next);
    }
    gens.resize(static_cast<std::size_t>(k));
    return gens;
}

double max_abs(const CMat& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace

int spinor_dimension(int d)
{
    return 1 << ((d + 1) / 2);
}

CliffordBasis build_clifford_basis(int d)
{
    if (d < 2) throw ConfigError("clifford basis requires d >= 2, got d = " + std::to_string(d));

    const int n = spinor_dimension(d);
    const int half = n / 2;
    const Complex I(0.0, 1.0);

    std::vector<CMat> sigmas = hermitian_generators(d - 1);
    sigmas.push_back(I * CMat::Identity(half, half));

    CliffordBasis basis;
    basis.d = d;
    basis.n = n;
    for (const auto& sigma : sigmas) {
        CMat alpha = CMat::Zero(n, n);
        alpha.topRightCorner(half, half) = sigma;
        alpha.bottomLeftCorner(half, half) = sigma.adjoint();
        basis.alphas.push_back(std::move(alpha));
    }
    return basis;
}

CliffordBasis conjugate_basis(const CliffordBasis& basis, const CMat& unitary)
{
    CliffordBasis out = basis;
    for (auto& a : out.alphas) a = unitary * a * unitary.adjoint();
    return out;
}

CliffordReport check_clifford(const CliffordBasis& basis)
{
    CliffordReport report;
    report.d = basis.d;
    report.n = basis.n;
    const auto n = static_cast<Eigen::Index>(basis.n);
    const CMat id = CMat::Identity(n, n);
    const int d = static_cast<int>(basis.alphas.size());

    for (int k = 0; k < d; ++k) {
        const CMat& a = basis.alpha(k);
        report.hermiticity = std::max(report.hermiticity, max_abs(a - a.adjoint()));
        report.tracelessness = std::max(report.tracelessness, std::abs(a.trace()));
    }
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            const CMat& aj = basis.alpha(j);
            const CMat& ak = basis.alpha(k);
            const double delta = j == k ? 1.0 : 0.0;
            const double dev = max_abs(aj * ak + ak * aj - 2.0 * delta * id);
            if (dev > report.anticommutation) {
                report.anticommutation = dev;
                report.worst_pair = {j + 1, k + 1};
            }
            const double gram = std::abs((aj * ak).trace() - Complex(delta * static_cast<double>(n)));
            report.gram = std::max(report.gram, gram);
        }
    }
    return report;
}

} // namespace szego
