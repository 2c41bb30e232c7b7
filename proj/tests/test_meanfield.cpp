#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "phasesym/analysis.hpp"
#include "phasesym/error.hpp"
#include "phasesym/meanfield.hpp"

using namespace phasesym;

namespace {

Eigen::VectorXd random_state(MeanFieldKind kind, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 0.3);
    Eigen::VectorXd y(kind == MeanFieldKind::TwoSpecies ? 8 : 10);
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = n(rng);
    return y;
}

ModelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ModelParams p;
    p.g = 0.5 + 0.3 * u(rng);
    p.phi = 3.0 * u(rng);
    p.eta = 0.4 + 0.2 * u(rng);
    p.delta_c = 0.3 * u(rng);
    p.delta_a = 0.2 * u(rng);
    p.delta_b = 0.2 * u(rng);
    return p;
}

// Verbatim transcription of the published Gell-Mann equations (ladder coupling).
std::array<double, 8> printed_gell_mann_rhs(const std::array<double, 8>& lv, Complex a, double g, double phi,
                                            double da, double db) {
    const double l1 = lv[0], l2 = lv[1], l3 = lv[2], l4 = lv[3], l5 = lv[4], l6 = lv[5], l7 = lv[6], l8 = lv[7];
    const Complex i(0, 1), ad = std::conj(a), e = std::polar(1.0, -phi), ec = std::polar(1.0, phi);
    const double s3 = std::sqrt(3.0);
    Complex d[8];
    d[0] = -da * l2 + i * g * (l3 * (a - ad) + e * ad / 2.0 * (-i * l5 + l4) + ec * a / 2.0 * (-i * l5 - l4));
    d[1] = da * l1 + i * g * (i * l3 * (ad + a) + e * ad / 2.0 * (i * l4 + l5) + ec * a / 2.0 * (i * l4 - l5));
    d[2] = i * g * (-i * l2 * (ad + a) + l1 * (ad - a) + e * ad / 2.0 * (i * l7 - l6) + ec * a / 2.0 * (i * l7 + l6));
    d[3] = -(da - db) * l5 + i * g * (ad / 2.0 * (i * l7 + l6) + a / 2.0 * (i * l7 - l6) +
                                      ad * e / 2.0 * (-i * l2 - l1) + a * ec / 2.0 * (-i * l2 + l1));
    d[4] = (da - db) * l4 + i * g * (ad / 2.0 * (-i * l6 + l7) + a / 2.0 * (-i * l6 - l7) +
                                     ad * e / 2.0 * (i * l1 - l2) + a * ec / 2.0 * (i * l1 + l2));
    d[5] = db * l7 + i * g * (ad / 2.0 * (i * l5 - l4) + a / 2.0 * (i * l5 + l4) +
                              0.5 * (ec * a - e * ad) * (s3 * l8 - l3));
    d[6] = -db * l6 + i * g * (ad / 2.0 * (-i * l4 - l5) + a / 2.0 * (-i * l4 + l5) +
                               0.5 * (ec * a + e * ad) * (i * s3 * l8 - i * l3));
    d[7] = -i * s3 / 2.0 * g * (ad * e * (i * l7 - l6) + a * ec * (i * l7 + l6));
    std::array<double, 8> out{};
    for (int k = 0; k < 8; ++k) out[std::size_t(k)] = d[k].real();
    return out;
}

} // namespace

TEST_CASE("undriven two-species ground state is a fixed point") {
    MeanFieldState2S s;
    s.sa = s.sb = Eigen::Vector3d(0, 0, -1);
    ModelParams p;
    p.eta = 0.0;
    p.phi = 0.8;
    const auto d = std::get<MeanFieldState2S>(mf_rhs(s, p));
    CHECK(d.sa.norm() == 0.0);
    CHECK(d.sb.norm() == 0.0);
    CHECK(std::abs(d.alpha) == 0.0);
}

TEST_CASE("two-species spin lengths have zero derivative") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const ModelParams p = random_params(rng);
        const Eigen::VectorXd y = random_state(MeanFieldKind::TwoSpecies, rng);
        Eigen::VectorXd dy;
        mf_rhs_packed(MeanFieldKind::TwoSpecies, p, ThreeLevelCoupling::Lambda, y, dy);
        CHECK(std::abs(y.segment<3>(0).dot(dy.segment<3>(0))) < 1e-12);
        CHECK(std::abs(y.segment<3>(3).dot(dy.segment<3>(3))) < 1e-12);
    }
}

TEST_CASE("three-level diagonal states are fixed without field") {
    MeanFieldState3L s;
    s.lambda[2] = 0.2;
    s.lambda[7] = -0.1;
    ModelParams p;
    p.eta = 0.0;
    p.delta_a = 0.3;
    p.delta_b = -0.2;
    for (ThreeLevelCoupling c : {ThreeLevelCoupling::Lambda, ThreeLevelCoupling::Ladder}) {
        const auto d = std::get<MeanFieldState3L>(mf_rhs(s, p, c));
        for (double v : d.lambda) CHECK(v == 0.0);
    }
}

TEST_CASE("ladder coupling reproduces the published Gell-Mann equation list") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const ModelParams p = random_params(rng);
        const Eigen::VectorXd y = random_state(MeanFieldKind::ThreeLevel, rng);
        Eigen::VectorXd dy;
        mf_rhs_packed(MeanFieldKind::ThreeLevel, p, ThreeLevelCoupling::Ladder, y, dy);
        std::array<double, 8> l{};
        for (int a = 0; a < 8; ++a) l[std::size_t(a)] = y(a);
        const auto printed = printed_gell_mann_rhs(l, Complex(y(8), y(9)), p.g, p.phi, p.delta_a, p.delta_b);
        for (int a = 0; a < 8; ++a) CHECK(std::abs(dy(a) - printed[std::size_t(a)]) < 1e-12);
    }
}

TEST_CASE("Lambda coupling equals i<[H, l_a]> for the single-atom Hamiltonian") {
    std::mt19937_64 rng(31);
    const auto& gm = gell_mann_basis();
    for (int trial = 0; trial < 20; ++trial) {
        const ModelParams p = random_params(rng);
        const Eigen::VectorXd y = random_state(MeanFieldKind::ThreeLevel, rng);
        std::array<double, 8> l{};
        for (int a = 0; a < 8; ++a) l[std::size_t(a)] = y(a);
        const ComplexMatrix rho = density_from_gell_mann(l);
        const Complex alpha(y(8), y(9));
        const ComplexMatrix j = three_level_projector(level::ground, level::A) +
                                std::polar(1.0, -p.phi) * three_level_projector(level::ground, level::B);
        const ComplexMatrix h = p.delta_a * three_level_projector(level::A, level::A) +
                                p.delta_b * three_level_projector(level::B, level::B) +
                                p.g * (std::conj(alpha) * j + alpha * j.adjoint());
        Eigen::VectorXd dy;
        mf_rhs_packed(MeanFieldKind::ThreeLevel, p, ThreeLevelCoupling::Lambda, y, dy);
        for (int a = 0; a < 8; ++a) {
            const double expected = (kI * (rho * commutator(h, gm[std::size_t(a)])).trace()).real();
            CHECK(std::abs(dy(a) - expected) < 1e-12);
        }
        const Complex dalpha = -(kI * p.delta_c + p.kappa / 2) * alpha - kI * p.g * (rho * j).trace() + p.eta;
        CHECK(std::abs(Complex(dy(8), dy(9)) - dalpha) < 1e-12);
    }
}

TEST_CASE("analytic Jacobians match central finite differences") {
    std::mt19937_64 rng(37);
    for (MeanFieldKind kind : {MeanFieldKind::TwoSpecies, MeanFieldKind::ThreeLevel})
        for (ThreeLevelCoupling c : {ThreeLevelCoupling::Lambda, ThreeLevelCoupling::Ladder})
            for (int trial = 0; trial < 10; ++trial) {
                const ModelParams p = random_params(rng);
                const Eigen::VectorXd y = random_state(kind, rng);
                const Eigen::MatrixXd jac = mf_jacobian(kind, p, c, y);
                const double h = 1e-6;
                for (Eigen::Index k = 0; k < y.size(); ++k) {
                    Eigen::VectorXd yp = y, ym = y, fp, fm;
                    yp(k) += h;
                    ym(k) -= h;
                    mf_rhs_packed(kind, p, c, yp, fp);
                    mf_rhs_packed(kind, p, c, ym, fm);
                    const Eigen::VectorXd fd = (fp - fm) / (2 * h);
                    const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
                    CHECK((fd - jac.col(k)).cwiseAbs().maxCoeff() / scale < 1e-6);
                }
            }
}

TEST_CASE("initial expectations: corner cases") {
    const double s3 = std::sqrt(3.0);
    const auto ground = three_level_initial_expectations(0.0, 0.0, 0.4);
    CHECK(ground.lambda[2] == doctest::Approx(-0.5));
    CHECK(ground.lambda[7] == doctest::Approx(s3 / 6));
    for (int a : {0, 1, 3, 4, 5, 6}) CHECK(std::abs(ground.lambda[std::size_t(a)]) < 1e-15);

    const auto plus = three_level_initial_expectations(1.0, 0.0, 0.0);
    const Populations pop = populations(plus.lambda);
    CHECK(pop.n_a == doctest::Approx(0.5));
    CHECK(pop.n_b == doctest::Approx(0.5));
    CHECK(std::abs(pop.n_0) < 1e-15);

    // both mappings agree on single-branch states
    for (auto [cp, cm] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
        const auto a = three_level_initial_expectations(cp, cm, 0.9, InitialStateMapping::PureSingleAtom);
        const auto b = three_level_initial_expectations(cp, cm, 0.9, InitialStateMapping::ReducedMixture);
        for (int k = 0; k < 8; ++k) CHECK(std::abs(a.lambda[std::size_t(k)] - b.lambda[std::size_t(k)]) < 1e-15);
    }
    CHECK_THROWS_AS(three_level_initial_expectations(0.9, 0.9, 0.0), ValidationError);
}

TEST_CASE("initial expectations agree with a single-atom density-matrix oracle") {
    const double cp = 0.3, cm = -0.5, phi = 1.2;
    const double c0 = std::sqrt(1 - cp * cp - cm * cm);
    // |A>, |0>, |B> amplitudes written out by hand
    const Complex e = std::polar(1.0, -phi);
    ComplexVector psi(3);
    psi << (cp - cm) * e / std::sqrt(2.0), c0, (cp + cm) / std::sqrt(2.0);
    const ComplexMatrix rho = psi * psi.adjoint();
    const auto s = three_level_initial_expectations(cp, cm, phi);
    const auto& gm = gell_mann_basis();
    for (int a = 0; a < 8; ++a) CHECK(s.lambda[std::size_t(a)] == doctest::Approx((rho * gm[std::size_t(a)]).trace().real()));
}

TEST_CASE("pure-state Casimir values") {
    // oracle values for a single pure qutrit: c2 = 1/3 and c3 = 1/72
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int trial = 0; trial < 20; ++trial) {
        const double cp = u(rng), cm = u(rng);
        if (cp * cp + cm * cm > 1) continue;
        const auto s = three_level_initial_expectations(cp, cm, u(rng));
        CHECK(std::abs(casimir_c2(s.lambda) - 1.0 / 3) < 1e-10);
        CHECK(std::abs(casimir_c3(s.lambda) - 1.0 / 72) < 1e-10);
    }
}

TEST_CASE("dark initial state stays frozen without drive") {
    const auto dark = three_level_initial_expectations(0.0, 1.0, 0.5);
    ModelParams p;
    p.g = 0.1;
    p.phi = 0.5;
    p.eta = 0.0;
    const Trajectory t = mf_evolve(dark, p, 500.0, 101);
    for (const char* name : {"N_A", "N_B", "N_0"}) {
        const auto s = t.real_series(name);
        for (double v : s) CHECK(std::abs(v - s.front()) < 1e-10);
    }
}

TEST_CASE("two-species mean field below and above the BTC threshold") {
    MeanFieldState2S init;
    init.sa = init.sb = Eigen::Vector3d(1, 0, 0);
    ModelParams p;
    p.g = 0.1;
    ClassifierSettings settings;
    settings.t_final = 2e4;
    settings.samples = 8192;
    const DriveProbe above = classify_drive(p, init, 1.1 * p.g, settings);
    const DriveProbe below = classify_drive(p, init, 0.9 * p.g, settings);
    CHECK(above.nonstationary());
    CHECK(above.a.omega_tilde > 0.0);
    CHECK_FALSE(below.nonstationary());
    CHECK(below.a.omega_tilde == 0.0);
}

TEST_CASE("conservation monitors over long runs") {
    MeanFieldState2S init;
    init.sa = Eigen::Vector3d(0.6, 0.0, 0.8);
    init.sb = Eigen::Vector3d(1, 0, 0);
    ModelParams p;
    p.g = 0.1;
    p.eta = 0.12;
    p.phi = 0.7;
    const Trajectory t = mf_evolve(init, p, 1e4, 2001);
    CHECK(t.diagnostics.conservation_drift.at("spin_length_A") < 1e-6);
    CHECK(t.diagnostics.conservation_drift.at("spin_length_B") < 1e-6);

    ModelParams q;
    q.g = 0.1;
    q.eta = 0.05;
    q.phi = 2.0;
    const auto init3 = three_level_initial_expectations(0.4, -0.3, 0.0);
    const Trajectory t3 = mf_evolve(init3, q, 1e3 / q.g, 2001);
    CHECK(t3.diagnostics.conservation_drift.at("c2") < 1e-6);
    CHECK(t3.diagnostics.conservation_drift.at("c3") < 1e-6);
}

TEST_CASE("invalid mean-field states are rejected") {
    MeanFieldState2S s;
    s.sa = Eigen::Vector3d(1, 1, 0);
    ModelParams p;
    CHECK_THROWS_AS(mf_evolve(s, p, 10.0, 11), ValidationError);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(8), dy;
    y(0) = std::nan("");
    CHECK_THROWS_AS(mf_rhs_packed(MeanFieldKind::TwoSpecies, p, ThreeLevelCoupling::Lambda, y, dy), ValidationError);
}
