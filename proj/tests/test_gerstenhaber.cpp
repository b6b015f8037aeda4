#include "doctest.h"

#include <random>

#include "operad/gerstenhaber.hpp"

using namespace operad;
using namespace operad::e2;

namespace {

long factorial(int n) {
    long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// independent count: sum over set partitions of prod (|B|-1)! via the
// recursion f(n) = sum_k C(n-1,k-1) (k-1)! f(n-k)
long arranged_partition_count(int n) {
    std::vector<long> f(n + 1, 0);
    f[0] = 1;
    auto binom = [](long a, long b) {
        long r = 1;
        for (long i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
        return r;
    };
    for (int m = 1; m <= n; ++m)
        for (int k = 1; k <= m; ++k)
            f[m] += binom(m - 1, k - 1) * factorial(k - 1) * f[m - k];
    return f[n];
}

TreePtr random_tree(const std::vector<int>& labels, std::mt19937& rng) {
    if (labels.size() == 1) return leaf(labels[0]);
    std::uniform_int_distribution<std::size_t> cut(1, labels.size() - 1);
    std::size_t c = cut(rng);
    std::vector<int> left(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(c));
    std::vector<int> right(labels.begin() + static_cast<std::ptrdiff_t>(c), labels.end());
    TreePtr l = random_tree(left, rng);
    TreePtr r = random_tree(right, rng);
    return (rng() % 2) ? prod(l, r) : bracket(l, r);
}

TreePtr random_full_tree(int n, std::mt19937& rng) {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i + 1;
    std::shuffle(labels.begin(), labels.end(), rng);
    return random_tree(labels, rng);
}

// shift every input label of a tree
TreePtr shift_tree(const TreePtr& t, int offset) {
    if (t->kind == Tree::Kind::leaf) return leaf(t->label + offset);
    TreePtr l = shift_tree(t->l, offset);
    TreePtr r = shift_tree(t->r, offset);
    return t->kind == Tree::Kind::prod ? prod(l, r) : bracket(l, r);
}

struct Args {
    TreePtr a, b, c;
    int da, db, dc;  // degrees
    int arity;
};

Args random_args(std::mt19937& rng) {
    std::uniform_int_distribution<int> size(1, 2);
    int na = size(rng), nb = size(rng), nc = size(rng);
    Args out;
    out.arity = na + nb + nc;
    auto pick = [&](int n, int offset, int& degree) {
        auto all = basis(n);
        Monomial m = all[rng() % all.size()];
        degree = m.degree();
        return shift_tree(monomial_tree(m), offset);
    };
    out.a = pick(na, 0, out.da);
    out.b = pick(nb, na, out.db);
    out.c = pick(nc, na + nb, out.dc);
    return out;
}

}  // namespace

TEST_CASE("basis counts are n!") {
    for (int n = 1; n <= 5; ++n) {
        auto b = basis(n);
        CHECK(static_cast<long>(b.size()) == factorial(n));
        CHECK(arranged_partition_count(n) == factorial(n));
        // all monomials canonical and distinct
        for (const auto& m : b) {
            CHECK(m.letters() == n);
            for (const auto& blk : m.blocks)
                CHECK(blk[0] == *std::min_element(blk.begin(), blk.end()));
            for (std::size_t i = 1; i < m.blocks.size(); ++i)
                CHECK(m.blocks[i - 1][0] < m.blocks[i][0]);
        }
    }
    CHECK(basis(1) == std::vector<Monomial>{Monomial{{{1}}}});
    CHECK(basis(2) == std::vector<Monomial>{Monomial{{{1}, {2}}}, Monomial{{{1, 2}}}});
}

TEST_CASE("pinned normal forms") {
    // x1 x2 is already normal
    E2Elem p = normal_form(2, prod(leaf(1), leaf(2)));
    REQUIRE(p.terms.size() == 1);
    CHECK(p.terms.begin()->first == Monomial{{{1}, {2}}});
    CHECK(p.terms.begin()->second == 1);

    // {x1 x2, x3} = x1 {x2,x3} + {x1,x3} x2
    E2Elem lhs = normal_form(3, bracket(prod(leaf(1), leaf(2)), leaf(3)));
    E2Elem expect;
    expect.arity = 3;
    expect.add(Monomial{{{1}, {2, 3}}}, 1);
    expect.add(Monomial{{{1, 3}, {2}}}, 1);
    CHECK(lhs == expect);

    // Jacobi with degree-zero entries
    E2Elem jac = normal_form(3, bracket(leaf(1), bracket(leaf(2), leaf(3)))) +
                 normal_form(3, bracket(leaf(2), bracket(leaf(1), leaf(3)))) +
                 normal_form(3, bracket(leaf(3), bracket(leaf(1), leaf(2))));
    CHECK(jac.is_zero());

    // malformed input trees are rejected
    CHECK_THROWS_AS(normal_form(2, prod(leaf(1), leaf(1))), std::invalid_argument);
    CHECK_THROWS_AS(normal_form(3, prod(leaf(1), leaf(2))), std::invalid_argument);
}

TEST_CASE("printed relations hold under rewriting") {
    std::mt19937 rng(808);
    auto sgn_of = [](int e) { return Rational((e % 2) ? -1 : 1); };
    for (int trial = 0; trial < 60; ++trial) {
        Args x = random_args(rng);

        // Leibniz {ab,c} = a{b,c} + (-1)^{|b|(|c|+1)} {a,c} b
        {
            E2Elem lhs = normal_form(x.arity, bracket(prod(x.a, x.b), x.c));
            E2Elem r1 = normal_form(x.arity, prod(x.a, bracket(x.b, x.c)));
            E2Elem r2 = normal_form(x.arity, prod(bracket(x.a, x.c), x.b));
            Rational s = sgn_of(x.db * (x.dc + 1));
            CHECK((lhs - r1 - r2 * s).is_zero());
        }
        // Jacobi as printed
        {
            E2Elem t1 = normal_form(x.arity, bracket(x.a, bracket(x.b, x.c))) * sgn_of(x.da);
            E2Elem t2 = normal_form(x.arity, bracket(x.b, bracket(x.a, x.c))) *
                        sgn_of(x.da * x.db + x.db);
            E2Elem t3 = normal_form(x.arity, bracket(x.c, bracket(x.a, x.b))) *
                        sgn_of(x.da * x.dc + x.db * x.dc + x.dc);
            CHECK((t1 + t2 + t3).is_zero());
        }
    }

    // graded commutativity of the product and symmetry of the bracket
    std::uniform_int_distribution<int> size(1, 2);
    for (int trial = 0; trial < 40; ++trial) {
        int na = size(rng), nb = size(rng);
        auto pick = [&](int n, int offset, int& degree) {
            auto all = basis(n);
            Monomial m = all[rng() % all.size()];
            degree = m.degree();
            return shift_tree(monomial_tree(m), offset);
        };
        int da = 0, db = 0;
        TreePtr a = pick(na, 0, da);
        TreePtr b = pick(nb, na, db);
        const int arity = na + nb;

        E2Elem ab = normal_form(arity, prod(a, b));
        E2Elem ba = normal_form(arity, prod(b, a));
        CHECK((ab - ba * sgn_of(da * db)).is_zero());

        E2Elem br = normal_form(arity, bracket(a, b));
        E2Elem rb = normal_form(arity, bracket(b, a));
        Rational sym = sgn_of((da + 1) * (db + 1)) * Rational(-1);
        CHECK((br - rb * sym).is_zero());
    }
}

TEST_CASE("normal form is idempotent on random expressions") {
    std::mt19937 rng(909);
    for (int n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 120; ++trial) {
            E2Elem nf = normal_form(n, random_full_tree(n, rng));
            for (const auto& [m, c] : nf.terms) {
                E2Elem again = normal_form(n, monomial_tree(m));
                REQUIRE(again.terms.size() == 1);
                CHECK(again.terms.begin()->first == m);
                CHECK(again.terms.begin()->second == 1);
            }
        }
    }
}

TEST_CASE("composition on pinned examples") {
    E2Elem mm;
    mm.arity = 2;
    mm.add(Monomial{{{1}, {2}}}, 1);
    E2Elem bb;
    bb.arity = 2;
    bb.add(Monomial{{{1, 2}}}, 1);

    E2Elem assoc = compose(1, mm, mm);
    REQUIRE(assoc.terms.size() == 1);
    CHECK(assoc.terms.begin()->first == Monomial{{{1}, {2}, {3}}});

    E2Elem leib = compose(1, bb, mm);
    E2Elem expect;
    expect.arity = 3;
    expect.add(Monomial{{{1}, {2, 3}}}, 1);
    expect.add(Monomial{{{1, 3}, {2}}}, 1);
    CHECK(leib == expect);

    E2Elem id1;
    id1.arity = 1;
    id1.add(Monomial{{{1}}}, 1);
    CHECK(compose(1, bb, id1) == bb);
    CHECK(compose(2, bb, id1) == bb);
    CHECK_THROWS_AS(compose(3, bb, id1), std::out_of_range);
}

TEST_CASE("monomial serialization") {
    Monomial m{{{1, 3}, {2}}};
    auto j = monomial_to_json(m);
    CHECK(j.dump() == R"(["*",["b",1,3],2])");
    CHECK(monomial_from_json(j) == m);

    Monomial single{{{1, 2}}};
    CHECK(monomial_to_json(single).dump() == R"(["b",1,2])");
    CHECK(monomial_from_json(monomial_to_json(single)) == single);

    E2Elem e;
    e.arity = 3;
    e.add(m, Rational(-7, 3));
    e.add(Monomial{{{1}, {2}, {3}}}, Rational(1));
    CHECK(element_from_json(element_to_json(e)) == e);
}

TEST_CASE("k sends the generators to the unit and bracket classes") {
    dk::BasisCache cache;
    bar::BarContext ctx(cache);

    E2Elem mm;
    mm.arity = 2;
    mm.add(Monomial{{{1}, {2}}}, 1);
    CHECK(k_map(ctx, Monomial{{{1}, {2}}}) == ctx.unit_class(2));
    CHECK(k_map(ctx, Monomial{{{1, 2}}}) == ctx.bracket_class());
}

TEST_CASE("k respects the operad relations") {
    dk::BasisCache cache;
    bar::BarContext ctx(cache);
    std::mt19937 rng(1001);
    for (int trial = 0; trial < 6; ++trial) {
        Args x = random_args(rng);
        if (x.arity > 4) continue;

        auto lhs = k_tree(ctx, bracket(prod(x.a, x.b), x.c));
        auto r1 = k_tree(ctx, prod(x.a, bracket(x.b, x.c)));
        auto r2 = k_tree(ctx, prod(bracket(x.a, x.c), x.b));
        Rational s(((x.db * (x.dc + 1)) % 2) ? -1 : 1);
        CHECK(lhs.coords == axpy(r1.coords, s, r2.coords));
    }
}

TEST_CASE("k intertwines composition with homology insertion") {
    dk::BasisCache cache;
    bar::BarContext ctx(cache);
    auto gens = basis(2);
    for (const auto& a : gens)
        for (const auto& b : gens)
            for (int i = 1; i <= 2; ++i) {
                E2Elem ea;
                ea.arity = 2;
                ea.add(a, 1);
                E2Elem eb;
                eb.arity = 2;
                eb.add(b, 1);
                auto composed = k_map(ctx, compose(i, ea, eb));
                auto inserted = bar::induced_insert(ctx, i, k_map(ctx, a), k_map(ctx, b));
                CHECK(composed == inserted);
            }
}

TEST_CASE("k has full rank on the arity-3 basis") {
    dk::BasisCache cache;
    bar::BarContext ctx(cache);
    std::map<std::pair<int, int>, SpanSolver> spans;
    int rank_total = 0;
    for (const auto& m : basis(3)) {
        auto cls = k_map(ctx, m);
        auto key = std::make_pair(cls.k, cls.w);
        auto it = spans.find(key);
        if (it == spans.end()) {
            int dim = static_cast<int>(ctx.complex(3).homology_block(cls.k, cls.w).reps.size());
            it = spans.emplace(key, SpanSolver(dim)).first;
        }
        if (it->second.add(cls.coords)) ++rank_total;
    }
    CHECK(rank_total == 6);
}
