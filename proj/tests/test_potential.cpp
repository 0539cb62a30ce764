#include <cmath>

#include "doctest.h"
#include "lamlab/potential.hpp"
#include "lamlab/util.hpp"

using namespace lamlab;

namespace {

Hamiltonian ising() {
    Hamiltonian h;
    h.spins = {"down", "up"};
    h.denom = 1;
    PatternPotential bond;
    bond.pattern = {0, 1};
    bond.table = {0, 1, 1, 0};
    h.terms = {bond};
    h.finalize();
    return h;
}

Hamiltonian ising_field(double mu, long long denom) {
    Hamiltonian h = ising();
    h.denom = denom;
    PatternPotential field;
    field.pattern = {0};
    field.table = {0, mu};
    h.terms.push_back(field);
    h.finalize();
    return h;
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("range and finalize validation") {
    Hamiltonian h = ising();
    CHECK(h.range() == 1);
    CHECK(h.spin_count() == 2);
    CHECK(h.terms[0].table_num == std::vector<long long>{0, 1, 1, 0});

    Hamiltonian bad = ising();
    bad.terms[0].table = {0, 1, 1};  // wrong table size
    CHECK_THROWS_AS(bad.finalize(), std::invalid_argument);

    Hamiltonian neg = ising();
    neg.terms[0].pattern = {1, 0};  // not sorted / anchored at 0
    CHECK_THROWS_AS(neg.finalize(), std::invalid_argument);

    Hamiltonian frac = ising();
    frac.denom = 2;
    frac.terms[0].table = {0, 0.3, 0.3, 0};  // 0.3 is not a multiple of 1/2
    CHECK_THROWS_AS(frac.finalize(), std::invalid_argument);
}

TEST_CASE("window energy of the alternating ising excitation") {
    Hamiltonian h = ising();
    Configuration c = Configuration::constant(Window(0, 3), 0, {0});
    c.set(Site(1), 1);
    c.set(Site(3), 1);
    // anchors 0..3 read pairs (0,1),(1,0),(0,1),(1,0): all disagree
    CHECK(window_energy(c, h) == 4.0);
    CHECK(window_energy_num(c, h) == 4);
    CHECK(anchor_energy(c, h, Site(0)) == 1.0);
    CHECK(anchor_energy(c, h, Site(1)) == 1.0);
    // anchor 3 reads the exterior site 4
    CHECK(anchor_energy(c, h, Site(3)) == 1.0);

    Configuration g = Configuration::constant(Window(0, 3), 0, {0});
    CHECK(relative_energy(c, g, h) == 4.0);
    CHECK(relative_energy_num(c, g, h) == 4);
}

TEST_CASE("relative energy is independent of window padding") {
    Hamiltonian h = ising();
    Configuration small = Configuration::constant(Window(0, 2), 0, {0});
    small.set(Site(1), 1);
    Configuration gs = Configuration::constant(Window(0, 2), 0, {0});

    Configuration big = Configuration::constant(Window(-5, 8), 0, {0});
    big.set(Site(1), 1);
    Configuration gb = Configuration::constant(Window(-5, 8), 0, {0});

    CHECK(relative_energy(small, gs, h) == 2.0);
    CHECK(relative_energy(big, gb, h) == 2.0);
    CHECK(relative_energy(gs, gs, h) == 0.0);
}

TEST_CASE("site-dependent terms fire on their residue only") {
    Hamiltonian h;
    h.spins = {"a", "b"};
    h.period = 2;
    h.denom = 1;
    PatternPotential odd_field;
    odd_field.pattern = {0};
    odd_field.residue = 1;
    odd_field.table = {0, 1};
    h.terms = {odd_field};
    h.finalize();

    Configuration c = Configuration::constant(Window(0, 3), 1, {1});
    CHECK(anchor_energy(c, h, Site(0)) == 0.0);
    CHECK(anchor_energy(c, h, Site(1)) == 1.0);
    CHECK(window_energy(c, h) == 2.0);
    // negative anchors reduce with a true modulus
    CHECK(anchor_energy(c, h, Site(-1)) == 1.0);
}

TEST_CASE("specific energy of periodic blocks") {
    Hamiltonian h = ising();
    CHECK(specific_energy({0}, h) == 0.0);
    CHECK(specific_energy({0, 1}, h) == 1.0);  // two walls per two sites
    CHECK(specific_energy_num_per_period({0, 1}, h) == 2);

    Hamiltonian f = ising_field(0.1, 10);
    CHECK(specific_energy({1}, f) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(specific_energy_num_per_period({1}, f) == 1);  // 0.1 = 1/10
    CHECK(specific_energy_num_per_period({0}, f) == 0);
}

TEST_CASE("family combine matches base plus scaled perturbations") {
    HamiltonianFamily fam;
    fam.base = ising();
    Hamiltonian field;
    field.spins = {"down", "up"};
    PatternPotential t;
    t.pattern = {0};
    t.table = {0, 1};
    field.terms = {t};
    field.finalize();
    fam.perturbations = {field};
    fam.mu = {0.1};
    fam.validate();

    Hamiltonian combined = combine(fam);
    splitmix64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        Configuration c = Configuration::constant(Window(0, 5), 0, {0});
        for (int x = 0; x <= 5; ++x) c.set(Site(x), (spin_t)rng.next_below(2));
        double direct = window_energy(c, fam.base) + 0.1 * window_energy(c, field);
        CHECK(window_energy(c, combined) == doctest::Approx(direct).epsilon(1e-14));
    }

    CHECK(site_influence_bound(fam.base) == 2.0);
    CHECK(site_influence_bound(field) == 1.0);
}

TEST_CASE("nondegeneracy of the field perturbation on the ising grounds") {
    HamiltonianFamily fam;
    fam.base = ising();
    Hamiltonian field;
    field.spins = {"down", "up"};
    PatternPotential t;
    t.pattern = {0};
    t.table = {0, 1};
    field.terms = {t};
    field.finalize();
    fam.perturbations = {field};
    fam.mu = {0.0};

    NondegeneracyReport rep = nondegeneracy_check(fam, {{0}, {1}});
    CHECK(rep.nondegenerate);
    CHECK(std::abs(rep.det) == doctest::Approx(1.0).epsilon(1e-12));

    // a perturbation blind to the grounds is degenerate
    Hamiltonian flat = field;
    flat.terms[0].table = {1, 1};
    flat.finalize();
    fam.perturbations = {flat};
    NondegeneracyReport bad = nondegeneracy_check(fam, {{0}, {1}});
    CHECK(!bad.nondegenerate);
}

}  // TEST_SUITE
