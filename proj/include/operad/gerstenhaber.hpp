#pragma once

#include <memory>
#include <vector>

#include "json.hpp"
#include "operad/bar_complex.hpp"
#include "operad/rational.hpp"

namespace operad::e2 {

// Expression tree over the two binary generators: the product and the
// degree-one bracket, applied to labeled inputs (each used exactly once).
struct Tree {
    enum class Kind { leaf, prod, bracket };
    Kind kind = Kind::leaf;
    int label = 0;
    std::shared_ptr<const Tree> l, r;
};
using TreePtr = std::shared_ptr<const Tree>;

TreePtr leaf(int label);
TreePtr prod(TreePtr l, TreePtr r);
TreePtr bracket(TreePtr l, TreePtr r);

// Normal-form monomial: one left-combed bracket word per block of a set
// partition, the minimal input leading each block, blocks ordered by minimum.
struct Monomial {
    std::vector<std::vector<int>> blocks;

    int degree() const {  // bracket count
        int d = 0;
        for (const auto& b : blocks) d += static_cast<int>(b.size()) - 1;
        return d;
    }
    int letters() const {
        int c = 0;
        for (const auto& b : blocks) c += static_cast<int>(b.size());
        return c;
    }
    auto operator<=>(const Monomial&) const = default;
};

struct E2Elem {
    int arity = 0;
    std::map<Monomial, Rational> terms;

    E2Elem& add(const Monomial& m, const Rational& c);
    bool is_zero() const { return terms.empty(); }
    E2Elem operator+(const E2Elem& o) const;
    E2Elem operator-(const E2Elem& o) const;
    E2Elem operator*(const Rational& c) const;
    friend bool operator==(const E2Elem&, const E2Elem&) = default;
};

// Rewrite an expression tree to the canonical combination of normal-form
// monomials (Leibniz expansion, bracket symmetry, Jacobi combing, Koszul
// signs on block reorderings). Throws on repeated or missing inputs.
E2Elem normal_form(int arity, const TreePtr& expr);

// Canonical expression tree of a normal-form monomial.
TreePtr monomial_tree(const Monomial& m);

// All normal-form monomials of arity n; |basis(n)| = n!.
std::vector<Monomial> basis(int n);

// Operadic substitution into input slot i, followed by renormalization.
E2Elem compose(int i, const E2Elem& outer, const E2Elem& inner);

nlohmann::ordered_json monomial_to_json(const Monomial& m);
Monomial monomial_from_json(const nlohmann::json& j);
nlohmann::ordered_json element_to_json(const E2Elem& e);
E2Elem element_from_json(const nlohmann::json& j);

// Operadic evaluation in bar homology: the product goes to the unit class,
// the bracket to the [t_12] class, leaves to the arity-1 identity.
bar::HomologyClass k_tree(bar::BarContext& ctx, const TreePtr& expr);
bar::HomologyClass k_map(bar::BarContext& ctx, const Monomial& m);
// homogeneous elements only (all monomials of one degree)
bar::HomologyClass k_map(bar::BarContext& ctx, const E2Elem& e);

}  // namespace operad::e2
