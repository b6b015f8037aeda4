#include "doctest.h"

#include <random>

#include "operad/permutation.hpp"
#include "operad/rational.hpp"
#include "operad/sparse_matrix.hpp"

using namespace operad;

namespace {

SparseMatrix from_rows(const std::vector<std::vector<int>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    SparseMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (rows[i][j] != 0) m.set(i, j, Rational(rows[i][j]));
    return m;
}

Rational random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
    return make_rational(num(rng), den(rng));
}

SparseMatrix random_matrix(std::mt19937& rng, int r, int c, double density) {
    SparseMatrix m(r, c);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (coin(rng) < density) m.set(i, j, random_rational(rng));
    return m;
}

}  // namespace

TEST_CASE("rank on pinned examples") {
    CHECK(rank(from_rows({{1, 0}, {0, 1}})) == 2);
    CHECK(rank(SparseMatrix(3, 5)) == 0);
    CHECK(rank(from_rows({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("nullspace on pinned examples") {
    CHECK(nullspace_basis(from_rows({{1, 0}, {0, 1}})).empty());
    CHECK(nullspace_basis(SparseMatrix(1, 3)).size() == 3);

    auto ns = nullspace_basis(from_rows({{1, 1}}));
    REQUIRE(ns.size() == 1);
    // spans (1, -1)
    Rational a = ns[0].at(0), b = ns[0].at(1);
    CHECK(a == -b);
    CHECK(sgn(a) != 0);
}

TEST_CASE("quotient_basis on pinned examples") {
    auto qb0 = quotient_basis(2, {});
    CHECK(qb0.representatives == std::vector<int>{0, 1});
    SparseVec v;
    v.push(0, Rational(3));
    v.push(1, Rational(-2, 7));
    CHECK(qb0.reduce(v) == v);

    SparseVec diag;
    diag.push(0, Rational(1));
    diag.push(1, Rational(1));
    auto qb1 = quotient_basis(2, {diag});
    CHECK(qb1.representatives.size() == 1);

    std::vector<SparseVec> all;
    for (int i = 0; i < 3; ++i) {
        SparseVec e;
        e.push(i, Rational(1));
        all.push_back(e);
    }
    CHECK(quotient_basis(3, all).representatives.empty());
}

TEST_CASE("rank-nullity and serial/parallel agreement on random matrices") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 40; ++trial) {
        int r = 1 + static_cast<int>(rng() % 8);
        int c = 1 + static_cast<int>(rng() % 8);
        SparseMatrix m = random_matrix(rng, r, c, 0.45);

        auto serial = rref(m, Exec::serial);
        auto parallel = rref(m, Exec::parallel);
        CHECK(serial.rows == parallel.rows);
        CHECK(serial.pivot_cols == parallel.pivot_cols);

        CHECK(serial.rank() + static_cast<int>(nullspace_basis(m).size()) == c);

        // every nullspace vector really is in the kernel
        for (const auto& v : nullspace_basis(m)) {
            for (int i = 0; i < r; ++i) {
                Rational dot(0);
                for (const auto& [j, q] : v.e) dot += m.at(i, j) * q;
                CHECK(sgn(dot) == 0);
            }
        }
    }
}

TEST_CASE("quotient reduction is idempotent and fixes representatives") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        int ambient = 3 + static_cast<int>(rng() % 6);
        int k = static_cast<int>(rng() % 4);
        std::vector<SparseVec> span;
        for (int i = 0; i < k; ++i) {
            SparseVec v;
            for (int j = 0; j < ambient; ++j) {
                if (rng() % 2) {
                    Rational q = random_rational(rng);
                    if (sgn(q) != 0) v.push(j, q);
                }
            }
            if (!v.empty()) span.push_back(v);
        }
        auto qb = quotient_basis(ambient, span);
        CHECK(static_cast<int>(qb.representatives.size()) ==
              ambient - rref(span, ambient).rank());

        SparseVec w;
        for (int j = 0; j < ambient; ++j)
            if (rng() % 2) {
                Rational q = random_rational(rng);
                if (sgn(q) != 0) w.push(j, q);
            }
        auto once = qb.reduce(w);
        CHECK(qb.reduce(once) == once);

        for (int repcol : qb.representatives) {
            SparseVec e;
            e.push(repcol, Rational(1));
            CHECK(qb.reduce(e) == e);
        }
    }
}

TEST_CASE("exact rational arithmetic never truncates") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        Rational a = random_rational(rng), b = random_rational(rng);
        CHECK((a + b) - b == a);
        if (sgn(b) != 0) CHECK((a * b) / b == a);
        Rational s = a + b;
        // canonical form: reduced, positive denominator
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
        CHECK(g == 1);
        CHECK(sgn(s.get_den()) > 0);
    }
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(rational_from_string("2/4") == Rational(1, 2));
    CHECK(rational_to_string(Rational(-5, 2)) == "-5/2");
    CHECK(rational_to_string(Rational(7)) == "7");
}

TEST_CASE("SpanSolver expresses vectors over independent generators") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 30; ++trial) {
        int dim = 4 + static_cast<int>(rng() % 4);
        SpanSolver solver(dim);
        std::vector<SparseVec> gens;
        for (int g = 0; g < 5; ++g) {
            SparseVec v;
            for (int j = 0; j < dim; ++j)
                if (rng() % 2) {
                    Rational q = random_rational(rng);
                    if (sgn(q) != 0) v.push(j, q);
                }
            gens.push_back(v);
            solver.add(v);
        }
        // random combination of the generators must be solvable and re-assemble
        SparseVec target;
        std::vector<Rational> coeff;
        for (const auto& g : gens) {
            Rational c = random_rational(rng);
            coeff.push_back(c);
            target = axpy(target, c, g);
        }
        auto sol = solver.solve(target);
        REQUIRE(sol.has_value());
        SparseVec rebuilt;
        for (const auto& [g, c] : *sol) rebuilt = axpy(rebuilt, c, gens[g]);
        CHECK(rebuilt == target);
    }
}

TEST_CASE("permutation group laws") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng() % 6);
        std::vector<int> im(n);
        for (int i = 0; i < n; ++i) im[i] = i + 1;
        std::shuffle(im.begin(), im.end(), rng);
        Permutation p(im);
        CHECK(p.then(p.inverse()).is_identity());
        CHECK(p.inverse().then(p).is_identity());
        CHECK(p.then(Permutation::identity(n)) == p);
    }
    CHECK_THROWS_AS(Permutation({1, 1, 3}), std::invalid_argument);
}
