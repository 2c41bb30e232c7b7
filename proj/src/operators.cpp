#include "phasesym/operators.hpp"

#include <cmath>
#include <sstream>

#include "phasesym/error.hpp"

namespace phasesym {

namespace {

std::string shape(const ComplexMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols())
        throw DimensionError(std::string(what) + ": expected a square matrix, got " + shape(m));
}

void require_same_square(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw DimensionError(std::string(what) + ": shapes " + shape(a) + " and " + shape(b) +
                             " are not conformable");
}

std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

ComplexMatrix pauli_lowering() {
    // basis (down, up): sigma^- = |down><up|
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

} // namespace

// ---- HilbertSpace ---------------------------------------------------------

HilbertSpace HilbertSpace::two_species_collective(int n_a, int n_b) {
    if (n_a < 0 || n_b < 0 || n_a + n_b == 0)
        throw ValidationError("two-species space needs non-negative atom counts with N > 0");
    HilbertSpace s;
    s.atoms = AtomKind::TwoSpeciesCollective;
    s.n_a = n_a;
    s.n_b = n_b;
    return s;
}

HilbertSpace HilbertSpace::two_species_full(int n_a, int n_b) {
    HilbertSpace s = two_species_collective(n_a, n_b);
    s.atoms = AtomKind::TwoSpeciesFull;
    return s;
}

HilbertSpace HilbertSpace::three_level_full(int n_atoms) {
    if (n_atoms < 1) throw ValidationError("three-level space needs N >= 1");
    HilbertSpace s;
    s.atoms = AtomKind::ThreeLevelFull;
    s.n_atoms = n_atoms;
    return s;
}

HilbertSpace HilbertSpace::with_cavity(int n_max) const {
    if (n_max < 1) throw ValidationError("photon cutoff n_max must be >= 1");
    HilbertSpace s = *this;
    s.photon_cutoff = n_max;
    return s;
}

SpaceKind HilbertSpace::kind() const {
    if (photon_cutoff) return SpaceKind::WithCavity;
    switch (atoms) {
    case AtomKind::TwoSpeciesCollective: return SpaceKind::TwoSpeciesCollective;
    case AtomKind::TwoSpeciesFull: return SpaceKind::TwoSpeciesFull;
    case AtomKind::ThreeLevelFull: return SpaceKind::ThreeLevelFull;
    }
    return SpaceKind::ThreeLevelFull;
}

std::size_t HilbertSpace::atomic_dimension() const {
    switch (atoms) {
    case AtomKind::TwoSpeciesCollective: return std::size_t(n_a + 1) * std::size_t(n_b + 1);
    case AtomKind::TwoSpeciesFull: return ipow(2, n_a + n_b);
    case AtomKind::ThreeLevelFull: return ipow(3, n_atoms);
    }
    return 0;
}

std::string HilbertSpace::describe() const {
    std::ostringstream os;
    switch (atoms) {
    case AtomKind::TwoSpeciesCollective: os << "two-species-collective(N_A=" << n_a << ", N_B=" << n_b << ")"; break;
    case AtomKind::TwoSpeciesFull: os << "two-species-full(N_A=" << n_a << ", N_B=" << n_b << ")"; break;
    case AtomKind::ThreeLevelFull: os << "three-level-full(N=" << n_atoms << ")"; break;
    }
    if (photon_cutoff) os << " x cavity(n_max=" << *photon_cutoff << ")";
    os << ", dim " << dimension();
    return os.str();
}

void check_budget(const HilbertSpace& space, const OperatorBudget& budget) {
    // Guard before computing the dimension to avoid overflow for absurd N.
    const int sites = space.atoms == AtomKind::TwoSpeciesFull ? space.n_a + space.n_b
                      : space.atoms == AtomKind::ThreeLevelFull ? space.n_atoms * 2
                                                                 : 0;
    if (sites > 40 || space.dimension() > budget.max_dimension)
        throw BudgetError("Hilbert space " + space.describe() + " exceeds the dense budget of " +
                          std::to_string(budget.max_dimension) + " states");
}

// ---- tensor algebra -------------------------------------------------------

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_square(a, b, "commutator");
    return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_square(a, b, "anticommutator");
    return a * b + b * a;
}

ComplexMatrix tensor_algebra(TensorOp op, const ComplexMatrix& a, const ComplexMatrix* b) {
    if (op != TensorOp::Dagger && b == nullptr)
        throw ValidationError("tensor_algebra: binary operation needs a second operand");
    switch (op) {
    case TensorOp::Kron: return kron(a, *b);
    case TensorOp::Dagger: return dagger(a);
    case TensorOp::Commutator: return commutator(a, *b);
    case TensorOp::Anticommutator: return anticommutator(a, *b);
    }
    throw ValidationError("tensor_algebra: unknown operation");
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const ComplexMatrix& m) {
    require_square(m, "hermiticity_defect");
    return max_abs(m - m.adjoint());
}

ComplexMatrix identity(std::size_t dim) { return ComplexMatrix::Identity(Eigen::Index(dim), Eigen::Index(dim)); }

// ---- spin matrices ---------------------------------------------------------

SpinMatrices spin_matrices(double j) {
    const double twice = 2.0 * j;
    if (!(j >= 0.0) || std::abs(twice - std::round(twice)) > 1e-12)
        throw ValidationError("spin_matrices: j must be a non-negative half-integer, got " + std::to_string(j));
    const int dim = int(std::lround(twice)) + 1;
    SpinMatrices s;
    s.jz = ComplexMatrix::Zero(dim, dim);
    s.jplus = ComplexMatrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double m = -j + k;
        s.jz(k, k) = m;
        if (k + 1 < dim) s.jplus(k + 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    s.jminus = s.jplus.adjoint();
    s.jx = (s.jplus + s.jminus) / 2.0;
    s.jy = (s.jplus - s.jminus) / Complex(0.0, 2.0);
    return s;
}

// ---- SU(3) -----------------------------------------------------------------

const std::array<ComplexMatrix, 8>& gell_mann_basis() {
    static const std::array<ComplexMatrix, 8> basis = [] {
        std::array<ComplexMatrix, 8> l;
        for (auto& m : l) m = ComplexMatrix::Zero(3, 3);
        const Complex i = kI;
        l[0](0, 1) = l[0](1, 0) = 1.0;
        l[1](0, 1) = -i;
        l[1](1, 0) = i;
        l[2](0, 0) = 1.0;
        l[2](1, 1) = -1.0;
        l[3](0, 2) = l[3](2, 0) = 1.0;
        l[4](0, 2) = -i;
        l[4](2, 0) = i;
        l[5](1, 2) = l[5](2, 1) = 1.0;
        l[6](1, 2) = -i;
        l[6](2, 1) = i;
        for (int k = 0; k < 7; ++k) l[k] *= 0.5;
        const double n8 = 1.0 / (2.0 * std::sqrt(3.0));
        l[7](0, 0) = n8;
        l[7](1, 1) = n8;
        l[7](2, 2) = -2.0 * n8;
        return l;
    }();
    return basis;
}

const std::array<std::array<std::array<double, 8>, 8>, 8>& su3_structure_constants() {
    static const auto table = [] {
        std::array<std::array<std::array<double, 8>, 8>, 8> f{};
        const double h = 0.5, r = std::sqrt(3.0) / 2.0;
        const struct { int a, b, c; double v; } entries[] = {
            {1, 2, 3, 1.0}, {1, 4, 7, h}, {2, 4, 6, h}, {2, 5, 7, h}, {3, 4, 5, h},
            {1, 5, 6, -h},  {3, 6, 7, -h}, {4, 5, 8, r}, {6, 7, 8, r},
        };
        for (const auto& e : entries) {
            const int a = e.a - 1, b = e.b - 1, c = e.c - 1;
            f[a][b][c] = f[b][c][a] = f[c][a][b] = e.v;
            f[b][a][c] = f[a][c][b] = f[c][b][a] = -e.v;
        }
        return f;
    }();
    return table;
}

const std::array<std::array<std::array<double, 8>, 8>, 8>& su3_symmetric_constants() {
    static const auto table = [] {
        std::array<std::array<std::array<double, 8>, 8>, 8> d{};
        const auto& l = gell_mann_basis();
        for (int a = 0; a < 8; ++a)
            for (int b = 0; b < 8; ++b)
                for (int c = 0; c < 8; ++c)
                    d[a][b][c] = 0.25 * ((l[a] * l[b] + l[b] * l[a]) * l[c]).trace().real();
        return d;
    }();
    return table;
}

ComplexMatrix three_level_projector(int row, int col) {
    if (row < 0 || row > 2 || col < 0 || col > 2)
        throw ValidationError("three_level_projector: level index out of range");
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(row, col) = 1.0;
    return m;
}

ComplexVector three_level_branch(double phi, int sign) {
    ComplexVector v = ComplexVector::Zero(3);
    v(level::B) = 1.0 / std::sqrt(2.0);
    v(level::A) = double(sign) * std::polar(1.0, -phi) / std::sqrt(2.0);
    return v;
}

ComplexMatrix tau_single(double phi) {
    const Complex e = std::polar(1.0, -phi);
    ComplexMatrix t = ComplexMatrix::Zero(3, 3);
    t(level::ground, level::ground) = 1.0;
    t(level::A, level::B) = e;
    t(level::B, level::A) = std::conj(e);
    return t;
}

// ---- collective operators ------------------------------------------------

ComplexMatrix site_operator(const ComplexMatrix& op, int site, int n_sites) {
    if (site < 0 || site >= n_sites) throw ValidationError("site_operator: site index out of range");
    const Eigen::Index d = op.rows();
    const std::size_t left = ipow(std::size_t(d), site);
    const std::size_t right = ipow(std::size_t(d), n_sites - site - 1);
    return kron(kron(identity(left), op), identity(right));
}

namespace {

void finish_two_species(TwoSpeciesOperators& o, double phi) {
    o.sa_plus = o.sa_minus.adjoint();
    o.sb_plus = o.sb_minus.adjoint();
    o.s_phi = o.sa_minus + std::polar(1.0, -phi) * o.sb_minus;
    o.s_phi_dag = o.s_phi.adjoint();
    const ComplexMatrix sds = o.s_phi_dag * o.s_phi;
    const ComplexMatrix ssd = o.s_phi * o.s_phi_dag;
    o.sz_phi = (sds - ssd) / 2.0;
    o.casimir = (ssd + sds) / 2.0 + o.sz_phi * o.sz_phi;
}

} // namespace

TwoSpeciesOperators two_species_operators(const HilbertSpace& space, double phi, const OperatorBudget& budget) {
    if (!space.is_two_species())
        throw ValidationError("two_species_operators: space " + space.describe() + " is not two-species");
    check_budget(space, budget);
    TwoSpeciesOperators o;
    if (space.atoms == AtomKind::TwoSpeciesCollective) {
        const SpinMatrices a = spin_matrices(space.n_a / 2.0);
        const SpinMatrices b = spin_matrices(space.n_b / 2.0);
        const ComplexMatrix ia = identity(std::size_t(space.n_a + 1));
        const ComplexMatrix ib = identity(std::size_t(space.n_b + 1));
        o.sa_x = kron(a.jx, ib);
        o.sa_y = kron(a.jy, ib);
        o.sa_z = kron(a.jz, ib);
        o.sa_minus = kron(a.jminus, ib);
        o.sb_x = kron(ia, b.jx);
        o.sb_y = kron(ia, b.jy);
        o.sb_z = kron(ia, b.jz);
        o.sb_minus = kron(ia, b.jminus);
    } else {
        const int n = space.n_a + space.n_b;
        const std::size_t dim = space.atomic_dimension();
        const SpinMatrices half = spin_matrices(0.5);
        const ComplexMatrix sm = pauli_lowering();
        auto sum_sites = [&](const ComplexMatrix& op, int first, int last) {
            ComplexMatrix acc = ComplexMatrix::Zero(Eigen::Index(dim), Eigen::Index(dim));
            for (int s = first; s < last; ++s) acc += site_operator(op, s, n);
            return acc;
        };
        o.sa_x = sum_sites(half.jx, 0, space.n_a);
        o.sa_y = sum_sites(half.jy, 0, space.n_a);
        o.sa_z = sum_sites(half.jz, 0, space.n_a);
        o.sa_minus = sum_sites(sm, 0, space.n_a);
        o.sb_x = sum_sites(half.jx, space.n_a, n);
        o.sb_y = sum_sites(half.jy, space.n_a, n);
        o.sb_z = sum_sites(half.jz, space.n_a, n);
        o.sb_minus = sum_sites(sm, space.n_a, n);
    }
    finish_two_species(o, phi);
    return o;
}

ThreeLevelOperators three_level_operators(const HilbertSpace& space, double phi, const OperatorBudget& budget) {
    if (space.atoms != AtomKind::ThreeLevelFull)
        throw ValidationError("three_level_operators: space " + space.describe() + " is not three-level");
    check_budget(space, budget);
    const int n = space.n_atoms;
    const std::size_t dim = space.atomic_dimension();
    auto sum_sites = [&](const ComplexMatrix& op) {
        ComplexMatrix acc = ComplexMatrix::Zero(Eigen::Index(dim), Eigen::Index(dim));
        for (int s = 0; s < n; ++s) acc += site_operator(op, s, n);
        return acc;
    };
    ThreeLevelOperators o;
    o.lambda_a = sum_sites(three_level_projector(level::ground, level::A));
    o.lambda_b = sum_sites(three_level_projector(level::ground, level::B));
    o.lambda_phi = o.lambda_a + std::polar(1.0, -phi) * o.lambda_b;
    o.n_a = sum_sites(three_level_projector(level::A, level::A));
    o.n_b = sum_sites(three_level_projector(level::B, level::B));
    o.n_0 = sum_sites(three_level_projector(level::ground, level::ground));
    o.tau_total = sum_sites(tau_single(phi));
    return o;
}

ComplexMatrix embed_atomic(const ComplexMatrix& atomic, const HilbertSpace& space) {
    if (std::size_t(atomic.rows()) != space.atomic_dimension() || atomic.rows() != atomic.cols())
        throw DimensionError("embed_atomic: operator " + shape(atomic) + " does not match " + space.describe());
    if (!space.photon_cutoff) return atomic;
    return kron(atomic, identity(space.cavity_dimension()));
}

ComplexMatrix cavity_annihilation(const HilbertSpace& space) {
    if (!space.photon_cutoff) throw ValidationError("cavity_annihilation: space has no cavity mode");
    const int nc = int(space.cavity_dimension());
    ComplexMatrix a = ComplexMatrix::Zero(nc, nc);
    for (int n = 1; n < nc; ++n) a(n - 1, n) = std::sqrt(double(n));
    return kron(identity(space.atomic_dimension()), a);
}

ComplexMatrix cavity_top_projector(const HilbertSpace& space) {
    if (!space.photon_cutoff) throw ValidationError("cavity_top_projector: space has no cavity mode");
    const int nc = int(space.cavity_dimension());
    ComplexMatrix p = ComplexMatrix::Zero(nc, nc);
    p(nc - 1, nc - 1) = 1.0;
    return kron(identity(space.atomic_dimension()), p);
}

} // namespace phasesym
