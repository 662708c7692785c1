#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmeas/compatibility.hpp"
#include "qmeas/povm.hpp"
#include "test_helpers.hpp"

#include <cmath>

using namespace qmeas;
using qmeas::testing::Rng;

namespace {

const double kInvSqrt2 = 0.7071067811865476;

Povm sharp_z() { return projective_from_observable(sigma_z()); }
Povm sharp_x() { return projective_from_observable(sigma_x()); }

Matrix ket0_density() { return Matrix::diagonal({1.0, 0.0}); }

// Two-effect POVM without the constructor checks, for validation tests.
Povm raw_pair(Matrix a, Matrix b) {
    Povm p;
    p.dim = a.dim();
    p.outcomes = {0, 1};
    p.effects = {std::move(a), std::move(b)};
    return p;
}

}  // namespace

TEST_CASE("validate_povm") {
    SUBCASE("orthogonal projectors are valid") { CHECK(validate_povm(sharp_z()).valid()); }

    SUBCASE("overcomplete pair reports the completeness residual") {
        const ValidationReport rep =
            validate_povm(raw_pair(0.6 * Matrix::identity(2), 0.6 * Matrix::identity(2)));
        CHECK_FALSE(rep.valid());
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].constraint == "effects do not sum to identity");
        CHECK(rep.violations[0].residual == doctest::Approx(0.2).epsilon(1e-12));
    }

    SUBCASE("unsharp pair at eta 0.9 is valid") {
        const Povm p = unsharp_qubit_povm(UnsharpQubitSpec({0.0, 0.0, 1.0}, 0.9));
        CHECK(validate_povm(p).valid());
    }

    SUBCASE("negative effect is flagged") {
        const ValidationReport rep =
            validate_povm(raw_pair(Matrix::diagonal({1.2, 1.0}), Matrix::diagonal({-0.2, 0.0})));
        CHECK_FALSE(rep.valid());
        bool psd = false, above = false;
        for (const Violation& v : rep.violations) {
            psd |= v.constraint.find("not PSD") != std::string::npos;
            above |= v.constraint.find("exceeds identity") != std::string::npos;
        }
        CHECK(psd);
        CHECK(above);
    }

    SUBCASE("duplicate labels are flagged") {
        Povm p = sharp_z();
        p.outcomes = {1, 1};
        const ValidationReport rep = validate_povm(p);
        CHECK_FALSE(rep.valid());
        CHECK(rep.violations[0].constraint == "duplicate outcome labels");
    }
}

TEST_CASE("projective_from_observable") {
    SUBCASE("sigma_z gives |0><0| for +1 and |1><1| for -1") {
        const Povm p = sharp_z();
        REQUIRE(p.size() == 2);
        CHECK(p.outcomes == std::vector<int>{-1, 1});
        CHECK(max_abs_diff(p.effects[static_cast<size_t>(p.index_of(+1))], Matrix::diagonal({1, 0})) < 1e-12);
        CHECK(max_abs_diff(p.effects[static_cast<size_t>(p.index_of(-1))], Matrix::diagonal({0, 1})) < 1e-12);
    }
    SUBCASE("sigma_x gives (1 +- sigma_x)/2") {
        const Povm p = sharp_x();
        const Matrix want_plus = 0.5 * (Matrix::identity(2) + sigma_x());
        CHECK(max_abs_diff(p.effects[static_cast<size_t>(p.index_of(+1))], want_plus) < 1e-12);
        CHECK(max_abs_diff(p.effects[static_cast<size_t>(p.index_of(-1))],
                           Matrix::identity(2) - want_plus) < 1e-12);
    }
    SUBCASE("diagonal d=3 observable gives basis projectors with eigenvalue labels") {
        const Povm p = projective_from_observable(Matrix::diagonal({1, 2, 3}));
        CHECK(p.outcomes == std::vector<int>{1, 2, 3});
        for (int k = 0; k < 3; ++k) {
            std::vector<double> d(3, 0.0);
            d[static_cast<size_t>(k)] = 1.0;
            CHECK(max_abs_diff(p.effects[static_cast<size_t>(k)], Matrix::diagonal(d)) < 1e-12);
        }
    }
    SUBCASE("non-integral spectra fall back to positional labels") {
        const Povm p = projective_from_observable(Matrix::diagonal({0.25, 0.75}));
        CHECK(p.outcomes == std::vector<int>{0, 1});
    }
    SUBCASE("degenerate spectrum is rejected") {
        CHECK_THROWS_AS(projective_from_observable(Matrix::identity(2)), std::invalid_argument);
    }
}

TEST_CASE("unsharp_qubit_povm") {
    SUBCASE("eta 1 reduces to the sharp pair") {
        const Povm u = unsharp_qubit_povm(UnsharpQubitSpec({0.0, 0.0, 1.0}, 1.0));
        const Povm s = sharp_z();
        for (int label : {-1, +1})
            CHECK(max_abs_diff(u.effects[static_cast<size_t>(u.index_of(label))],
                               s.effects[static_cast<size_t>(s.index_of(label))]) < 1e-10);
    }
    SUBCASE("eta 0 is the trivial coin") {
        const Povm u = unsharp_qubit_povm(UnsharpQubitSpec({1.0, 0.0, 0.0}, 0.0));
        CHECK(max_abs_diff(u.effects[0], 0.5 * Matrix::identity(2)) < 1e-12);
        CHECK(max_abs_diff(u.effects[1], 0.5 * Matrix::identity(2)) < 1e-12);
    }
    SUBCASE("eta 1/sqrt(2) effect spectrum") {
        const Povm u = unsharp_qubit_povm(UnsharpQubitSpec({1.0, 0.0, 0.0}, kInvSqrt2));
        for (const Matrix& e : u.effects) {
            const EigenSystem es = hermitian_eigensystem(e);
            CHECK(es.eigenvalues[0] == doctest::Approx(0.14644660940672624).epsilon(1e-12));
            CHECK(es.eigenvalues[1] == doctest::Approx(0.8535533905932737).epsilon(1e-12));
        }
    }
    SUBCASE("spec invariants are enforced") {
        CHECK_THROWS_AS(UnsharpQubitSpec({1.0, 1.0, 0.0}, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(UnsharpQubitSpec({1.0, 0.0, 0.0}, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(UnsharpQubitSpec({1.0, 0.0, 0.0}, -0.1), std::invalid_argument);
    }
}

TEST_CASE("outcome_distribution") {
    SUBCASE("eigenstate of sigma_z") {
        const Povm p = sharp_z();
        const std::vector<double> probs = outcome_distribution(p, ket0_density());
        CHECK(probs[static_cast<size_t>(p.index_of(+1))] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(probs[static_cast<size_t>(p.index_of(-1))] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("maximally mixed state is uniform") {
        const Povm p = unsharp_qubit_povm(UnsharpQubitSpec({1.0, 0.0, 0.0}, 0.8));
        for (double v : outcome_distribution(p, 0.5 * Matrix::identity(2)))
            CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("unsharp z-axis on |0><0| gives (1 +- eta)/2") {
        const Povm p = unsharp_qubit_povm(UnsharpQubitSpec({0.0, 0.0, 1.0}, 0.8));
        const std::vector<double> probs = outcome_distribution(p, ket0_density());
        CHECK(probs[static_cast<size_t>(p.index_of(+1))] == doctest::Approx(0.9).epsilon(1e-12));
        CHECK(probs[static_cast<size_t>(p.index_of(-1))] == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(outcome_distribution(sharp_z(), Matrix::identity(4)), std::invalid_argument);
        CHECK_THROWS_AS(outcome_distribution(sharp_z(), Matrix::diagonal({0.9, 0.0})),
                        std::domain_error);
        CHECK_THROWS_AS(outcome_distribution(sharp_z(), Matrix::diagonal({1.3, -0.3})),
                        std::domain_error);
    }
}

TEST_CASE("outcome_distribution is affine in the state") {
    Rng rng(53);
    const Povm p = unsharp_qubit_povm(UnsharpQubitSpec(qmeas::testing::random_axis(rng), 0.77));
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix r1 = qmeas::testing::random_density(rng, 2);
        const Matrix r2 = qmeas::testing::random_density(rng, 2);
        const std::vector<double> mixed = outcome_distribution(p, 0.5 * (r1 + r2));
        const std::vector<double> p1 = outcome_distribution(p, r1);
        const std::vector<double> p2 = outcome_distribution(p, r2);
        for (size_t k = 0; k < mixed.size(); ++k)
            CHECK(mixed[k] == doctest::Approx(0.5 * (p1[k] + p2[k])).epsilon(1e-12));
    }
}

TEST_CASE("post_process_distribution") {
    SUBCASE("identity relabeling reproduces the grand distribution") {
        const Povm grand = unsharp_qubit_povm(UnsharpQubitSpec({0.0, 0.0, 1.0}, 0.6));
        ResponseFunctions rf({{grand.outcomes, {{1.0, 0.0}, {0.0, 1.0}}}});
        Rng rng(59);
        const Matrix rho = qmeas::testing::random_density(rng, 2);
        const std::vector<double> direct = outcome_distribution(grand, rho);
        const std::vector<double> post = post_process_distribution(grand, rf, 0, rho);
        for (size_t k = 0; k < direct.size(); ++k)
            CHECK(post[k] == doctest::Approx(direct[k]).epsilon(1e-12));
    }

    SUBCASE("lambda-independent response erases the state") {
        const Povm grand = sharp_z();
        ResponseFunctions rf({{{0, 1}, {{0.3, 0.7}, {0.3, 0.7}}}});
        Rng rng(61);
        for (int trial = 0; trial < 5; ++trial) {
            const std::vector<double> post =
                post_process_distribution(grand, rf, 0, qmeas::testing::random_density(rng, 2));
            CHECK(post[0] == doctest::Approx(0.3).epsilon(1e-12));
            CHECK(post[1] == doctest::Approx(0.7).epsilon(1e-12));
        }
    }

    SUBCASE("marginal response of a feasibility witness matches direct measurement") {
        const double eta = 0.7;
        const Povm bx = unsharp_qubit_povm(UnsharpQubitSpec({1.0, 0.0, 0.0}, eta));
        const Povm bz = unsharp_qubit_povm(UnsharpQubitSpec({0.0, 0.0, 1.0}, eta));
        const JmVerdict verdict = jm_feasibility({bx, bz});
        REQUIRE(verdict.status == JmStatus::compatible);
        const Povm& grand = *verdict.witness;

        // Deterministic marginal response functions over the product codes.
        const std::vector<int> arities = {2, 2};
        std::vector<ResponseFunctions::Setting> settings(2);
        settings[0].outcomes = bx.outcomes;
        settings[1].outcomes = bz.outcomes;
        for (int code : grand.outcomes) {
            const std::vector<int> pos = decode_product_label(code, arities);
            for (int i = 0; i < 2; ++i) {
                std::vector<double> row(2, 0.0);
                row[static_cast<size_t>(pos[static_cast<size_t>(i)])] = 1.0;
                settings[static_cast<size_t>(i)].table.push_back(std::move(row));
            }
        }
        const ResponseFunctions rf(std::move(settings));

        const Matrix mixed = 0.5 * Matrix::identity(2);  // singlet's reduced state
        for (int setting = 0; setting < 2; ++setting) {
            const Povm& direct = setting == 0 ? bx : bz;
            const std::vector<double> via_grand = post_process_distribution(grand, rf, setting, mixed);
            const std::vector<double> straight = outcome_distribution(direct, mixed);
            for (size_t k = 0; k < straight.size(); ++k)
                CHECK(std::abs(via_grand[k] - straight[k]) < 1e-9);
        }
    }

    SUBCASE("missing response entries are rejected") {
        const Povm grand = sharp_z();
        ResponseFunctions rf({{{0, 1}, {{1.0, 0.0}}}});  // one row, two grand outcomes
        CHECK_THROWS_AS(post_process_distribution(grand, rf, 0, 0.5 * Matrix::identity(2)),
                        std::invalid_argument);
        CHECK_THROWS_AS(post_process_distribution(grand, rf, 3, 0.5 * Matrix::identity(2)),
                        std::invalid_argument);
    }

    SUBCASE("response tables must be stochastic") {
        CHECK_THROWS_AS(ResponseFunctions({{{0, 1}, {{0.4, 0.4}, {0.5, 0.5}}}}),
                        std::invalid_argument);
        CHECK_THROWS_AS(ResponseFunctions({{{0, 1}, {{1.2, -0.2}, {0.5, 0.5}}}}),
                        std::invalid_argument);
    }
}

TEST_CASE("property: post-processing equals measuring the reconstructed effect") {
    Rng rng(67);
    const Povm grand = unsharp_qubit_povm(UnsharpQubitSpec(qmeas::testing::random_axis(rng), 0.65));
    ResponseFunctions rf({{{10, 20}, {{0.8, 0.2}, {0.35, 0.65}}}});

    // Effects of the post-processed measurement, per the defining sum.
    std::vector<Matrix> rebuilt(2, Matrix(2));
    for (size_t lam = 0; lam < grand.effects.size(); ++lam)
        for (size_t k = 0; k < 2; ++k)
            rebuilt[k] = rebuilt[k] + rf.settings[0].table[lam][k] * grand.effects[lam];

    for (int trial = 0; trial < 25; ++trial) {
        const Matrix rho = qmeas::testing::random_density(rng, 2);
        const std::vector<double> post = post_process_distribution(grand, rf, 0, rho);
        for (size_t k = 0; k < 2; ++k)
            CHECK(std::abs(post[k] - (rho * rebuilt[k]).trace().real()) < 1e-9);
    }
}

TEST_CASE("property: named constructors always produce valid POVMs") {
    Rng rng(71);
    for (int trial = 0; trial < 25; ++trial) {
        const Povm u = unsharp_qubit_povm(
            UnsharpQubitSpec(qmeas::testing::random_axis(rng), static_cast<double>(trial) / 24.0));
        CHECK(validate_povm(u).valid());
        const Povm s = qmeas::testing::random_projective(rng, 3);
        CHECK(validate_povm(s).valid());
    }
}
