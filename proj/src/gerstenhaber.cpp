#include "operad/gerstenhaber.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace operad::e2 {

TreePtr leaf(int label) {
    auto t = std::make_shared<Tree>();
    t->kind = Tree::Kind::leaf;
    t->label = label;
    return t;
}

TreePtr prod(TreePtr l, TreePtr r) {
    auto t = std::make_shared<Tree>();
    t->kind = Tree::Kind::prod;
    t->l = std::move(l);
    t->r = std::move(r);
    return t;
}

TreePtr bracket(TreePtr l, TreePtr r) {
    auto t = std::make_shared<Tree>();
    t->kind = Tree::Kind::bracket;
    t->l = std::move(l);
    t->r = std::move(r);
    return t;
}

E2Elem& E2Elem::add(const Monomial& m, const Rational& c) {
    if (sgn(c) == 0) return *this;
    auto [it, fresh] = terms.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (sgn(it->second) == 0) terms.erase(it);
    }
    return *this;
}

E2Elem E2Elem::operator+(const E2Elem& o) const {
    E2Elem out = *this;
    for (const auto& [m, c] : o.terms) out.add(m, c);
    return out;
}

E2Elem E2Elem::operator-(const E2Elem& o) const {
    E2Elem out = *this;
    for (const auto& [m, c] : o.terms) out.add(m, -c);
    return out;
}

E2Elem E2Elem::operator*(const Rational& c) const {
    E2Elem out;
    out.arity = arity;
    if (sgn(c) == 0) return out;
    for (const auto& [m, q] : terms) out.terms[m] = q * c;
    return out;
}

namespace {

using Block = std::vector<int>;

int block_parity(const Block& b) { return (static_cast<int>(b.size()) - 1) % 2; }

// a * b with Koszul signs for moving odd b-blocks past odd a-blocks
std::pair<int, std::vector<Block>> merge_blocks(const std::vector<Block>& a,
                                                const std::vector<Block>& b) {
    int sign = 1;
    std::vector<Block> out;
    std::size_t ia = 0, ib = 0;
    int odd_remaining_a = 0;
    for (std::size_t j = ia; j < a.size(); ++j) odd_remaining_a += block_parity(a[j]);
    while (ia < a.size() || ib < b.size()) {
        if (ib == b.size() || (ia < a.size() && a[ia][0] < b[ib][0])) {
            odd_remaining_a -= block_parity(a[ia]);
            out.push_back(a[ia++]);
        } else {
            if (block_parity(b[ib]) && (odd_remaining_a % 2)) sign = -sign;
            out.push_back(b[ib++]);
        }
    }
    return {sign, std::move(out)};
}

E2Elem mul_monomials(int arity, const Monomial& a, const Monomial& b) {
    auto [sign, blocks] = merge_blocks(a.blocks, b.blocks);
    E2Elem out;
    out.arity = arity;
    out.add(Monomial{std::move(blocks)}, Rational(sign));
    return out;
}

E2Elem mul_elems(const E2Elem& a, const E2Elem& b) {
    E2Elem out;
    out.arity = a.arity;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            E2Elem p = mul_monomials(a.arity, ma, mb);
            for (const auto& [m, c] : p.terms) out.add(m, c * ca * cb);
        }
    return out;
}

#ifndef E2_SYM_ALPHA
#define E2_SYM_ALPHA 1
#endif
#ifndef E2_SYM_BETA
#define E2_SYM_BETA 0
#endif
constexpr int kSymAlpha = E2_SYM_ALPHA;
constexpr int kSymBeta = E2_SYM_BETA;

// bracket symmetry sign: {a,b} = sym_sign(|a|,|b|) {b,a}; degree zero pairs
// commute, the Jacobi instances fix the rest
int sym_sign(int da, int db) {
    return ((kSymAlpha * da * db + kSymBeta * (da + db)) % 2) ? -1 : 1;
}

E2Elem bracket_monomials(int arity, const Monomial& a, const Monomial& b);

// {u, v} for two combed blocks, u holding the overall minimum
E2Elem comb_bracket(int arity, const Block& u, const Block& v) {
    E2Elem out;
    out.arity = arity;
    if (v.size() == 1) {
        Block ext = u;
        ext.push_back(v[0]);
        out.add(Monomial{{std::move(ext)}}, Rational(1));
        return out;
    }
    // v = {v', z}: comb the top letter off and re-associate through the
    // printed Jacobi combined with the symmetry sign
    Block vp(v.begin(), v.end() - 1);
    const int z = v.back();
    const int du = static_cast<int>(u.size()) - 1;
    const int dvp = static_cast<int>(vp.size()) - 1;
    const int e1 = 1 + du * dvp + dvp + du + kSymAlpha * dvp * (du + 1) +
                   kSymBeta * (dvp + du + 1);
    const int e2 = 1 + du + kSymBeta * (du + dvp + 1);
    const Rational c1((e1 % 2) ? -1 : 1);
    const Rational c2((e2 % 2) ? -1 : 1);

    // {{u,z}, v'}
    Block uz = u;
    uz.push_back(z);
    E2Elem t1 = bracket_monomials(arity, Monomial{{uz}}, Monomial{{vp}});
    // {{u,v'}, z}
    E2Elem inner = comb_bracket(arity, u, vp);
    E2Elem t2;
    t2.arity = arity;
    for (const auto& [m, c] : inner.terms) {
        Block ext = m.blocks[0];
        ext.push_back(z);
        t2.add(Monomial{{std::move(ext)}}, c);
    }
    return t1 * c1 + t2 * c2;
}

E2Elem bracket_monomials(int arity, const Monomial& a, const Monomial& b) {
    if (a.blocks.size() == 1 && b.blocks.size() == 1) {
        const Block& u = a.blocks[0];
        const Block& v = b.blocks[0];
        if (v[0] < u[0]) {
            E2Elem flipped = bracket_monomials(arity, b, a);
            return flipped * Rational(sym_sign(a.degree(), b.degree()));
        }
        return comb_bracket(arity, u, v);
    }
    if (a.blocks.size() == 1) {
        // single block against a product: flip and use Leibniz on the left
        E2Elem flipped = bracket_monomials(arity, b, a);
        return flipped * Rational(sym_sign(a.degree(), b.degree()));
    }
    // Leibniz: {xy, c} = x{y,c} + (-1)^{|y|(|c|+1)} {x,c} y
    Monomial x{{a.blocks.front()}};
    Monomial y{std::vector<Block>(a.blocks.begin() + 1, a.blocks.end())};
    const int dy = y.degree(), dc = b.degree();

    E2Elem t1 = mul_elems(E2Elem{arity, {{x, 1}}}, bracket_monomials(arity, y, b));
    E2Elem t2 = mul_elems(bracket_monomials(arity, x, b), E2Elem{arity, {{y, 1}}});
    const Rational s(((dy * (dc + 1)) % 2) ? -1 : 1);
    return t1 + t2 * s;
}

E2Elem bracket_elems(const E2Elem& a, const E2Elem& b) {
    E2Elem out;
    out.arity = a.arity;
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            E2Elem p = bracket_monomials(a.arity, ma, mb);
            for (const auto& [m, c] : p.terms) out.add(m, c * ca * cb);
        }
    return out;
}

void collect_labels(const TreePtr& t, std::vector<int>& out) {
    if (!t) throw std::invalid_argument("null expression node");
    if (t->kind == Tree::Kind::leaf) {
        out.push_back(t->label);
        return;
    }
    collect_labels(t->l, out);
    collect_labels(t->r, out);
}

E2Elem eval_tree(int arity, const TreePtr& t) {
    if (t->kind == Tree::Kind::leaf) {
        E2Elem e;
        e.arity = arity;
        e.add(Monomial{{{t->label}}}, Rational(1));
        return e;
    }
    E2Elem l = eval_tree(arity, t->l);
    E2Elem r = eval_tree(arity, t->r);
    return t->kind == Tree::Kind::prod ? mul_elems(l, r) : bracket_elems(l, r);
}

}  // namespace

E2Elem normal_form(int arity, const TreePtr& expr) {
    std::vector<int> labels;
    collect_labels(expr, labels);
    std::set<int> seen(labels.begin(), labels.end());
    if (static_cast<int>(labels.size()) != arity || static_cast<int>(seen.size()) != arity ||
        *seen.begin() != 1 || *seen.rbegin() != arity)
        throw std::invalid_argument("expression must use each input 1..n exactly once");
    return eval_tree(arity, expr);
}

TreePtr monomial_tree(const Monomial& m) {
    TreePtr whole;
    for (const auto& block : m.blocks) {
        TreePtr comb = leaf(block[0]);
        for (std::size_t i = 1; i < block.size(); ++i) comb = bracket(comb, leaf(block[i]));
        whole = whole ? prod(whole, comb) : comb;
    }
    return whole;
}

std::vector<Monomial> basis(int n) {
    std::vector<Monomial> out;
    // grow set partitions element by element, then arrange each block
    std::vector<std::vector<Block>> partitions{{}};
    for (int x = 1; x <= n; ++x) {
        std::vector<std::vector<Block>> next;
        for (const auto& p : partitions) {
            for (std::size_t b = 0; b < p.size(); ++b) {
                auto q = p;
                q[b].push_back(x);
                next.push_back(std::move(q));
            }
            auto q = p;
            q.push_back({x});
            next.push_back(std::move(q));
        }
        partitions = std::move(next);
    }
    for (const auto& p : partitions) {
        // each block already lists its minimum first; enumerate the orders of
        // the remaining letters, one basis monomial per choice
        std::vector<std::vector<Block>> arrangements{{}};
        for (const auto& block : p) {
            std::vector<int> rest(block.begin() + 1, block.end());
            std::sort(rest.begin(), rest.end());
            std::vector<Block> variants;
            do {
                Block b{block[0]};
                b.insert(b.end(), rest.begin(), rest.end());
                variants.push_back(std::move(b));
            } while (std::next_permutation(rest.begin(), rest.end()));
            std::vector<std::vector<Block>> grown;
            for (const auto& partial : arrangements)
                for (const auto& v : variants) {
                    auto ext = partial;
                    ext.push_back(v);
                    grown.push_back(std::move(ext));
                }
            arrangements = std::move(grown);
        }
        for (auto& blocks : arrangements) {
            std::sort(blocks.begin(), blocks.end(),
                      [](const Block& a, const Block& b) { return a[0] < b[0]; });
            out.push_back(Monomial{std::move(blocks)});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

TreePtr relabel(const TreePtr& t, const std::function<int(int)>& f) {
    if (t->kind == Tree::Kind::leaf) return leaf(f(t->label));
    TreePtr l = relabel(t->l, f);
    TreePtr r = relabel(t->r, f);
    return t->kind == Tree::Kind::prod ? prod(l, r) : bracket(l, r);
}

TreePtr substitute(const TreePtr& t, int slot, const TreePtr& replacement) {
    if (t->kind == Tree::Kind::leaf) return t->label == slot ? replacement : t;
    TreePtr l = substitute(t->l, slot, replacement);
    TreePtr r = substitute(t->r, slot, replacement);
    return t->kind == Tree::Kind::prod ? prod(l, r) : bracket(l, r);
}

}  // namespace

E2Elem compose(int i, const E2Elem& outer, const E2Elem& inner) {
    if (i < 1 || i > outer.arity) throw std::out_of_range("composition slot out of range");
    const int n = outer.arity, m = inner.arity;
    E2Elem out;
    out.arity = n + m - 1;
    for (const auto& [mo, co] : outer.terms) {
        TreePtr outer_tree = relabel(monomial_tree(mo), [&](int j) {
            if (j < i) return j;
            if (j == i) return -1;  // placeholder for the substitution slot
            return j + m - 1;
        });
        for (const auto& [mi, ci] : inner.terms) {
            TreePtr inner_tree =
                relabel(monomial_tree(mi), [&](int p) { return i + p - 1; });
            TreePtr combined = substitute(outer_tree, -1, inner_tree);
            E2Elem piece = normal_form(out.arity, combined);
            for (const auto& [mx, cx] : piece.terms) out.add(mx, cx * co * ci);
        }
    }
    return out;
}

nlohmann::ordered_json monomial_to_json(const Monomial& m) {
    auto block_json = [](const Block& b) -> nlohmann::ordered_json {
        if (b.size() == 1) return b[0];
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        j.push_back("b");
        for (int x : b) j.push_back(x);
        return j;
    };
    if (m.blocks.size() == 1) return block_json(m.blocks[0]);
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    j.push_back("*");
    for (const auto& b : m.blocks) j.push_back(block_json(b));
    return j;
}

Monomial monomial_from_json(const nlohmann::json& j) {
    auto block_from = [](const nlohmann::json& b) -> Block {
        if (b.is_number_integer()) return {b.get<int>()};
        if (!b.is_array() || b.at(0) != "b") throw std::invalid_argument("bad bracket block");
        Block out;
        for (std::size_t i = 1; i < b.size(); ++i) out.push_back(b.at(i).get<int>());
        return out;
    };
    Monomial m;
    if (j.is_array() && j.size() > 0 && j.at(0) == "*") {
        for (std::size_t i = 1; i < j.size(); ++i) m.blocks.push_back(block_from(j.at(i)));
    } else {
        m.blocks.push_back(block_from(j));
    }
    return m;
}

nlohmann::ordered_json element_to_json(const E2Elem& e) {
    nlohmann::ordered_json j;
    j["arity"] = e.arity;
    auto& arr = j["terms"] = nlohmann::ordered_json::array();
    for (const auto& [m, c] : e.terms) {
        nlohmann::ordered_json t;
        t["monomial"] = monomial_to_json(m);
        t["coeff"] = rational_to_string(c);
        arr.push_back(std::move(t));
    }
    return j;
}

E2Elem element_from_json(const nlohmann::json& j) {
    E2Elem e;
    e.arity = j.at("arity").get<int>();
    for (const auto& t : j.at("terms"))
        e.add(monomial_from_json(t.at("monomial")),
              rational_from_string(t.at("coeff").get<std::string>()));
    return e;
}

namespace {

struct EvalResult {
    bar::HomologyClass cls;
    std::vector<int> leaves;  // labels in left-to-right order
};

EvalResult k_eval(bar::BarContext& ctx, const TreePtr& t) {
    if (t->kind == Tree::Kind::leaf) return {ctx.unit_class(1), {t->label}};
    EvalResult l = k_eval(ctx, t->l);
    EvalResult r = k_eval(ctx, t->r);
    bar::HomologyClass gen =
        t->kind == Tree::Kind::prod ? ctx.unit_class(2) : ctx.bracket_class();
    bar::HomologyClass with_left = bar::induced_insert(ctx, 1, gen, l.cls);
    bar::HomologyClass node =
        bar::induced_insert(ctx, static_cast<int>(l.leaves.size()) + 1, with_left, r.cls);
    std::vector<int> leaves = l.leaves;
    leaves.insert(leaves.end(), r.leaves.begin(), r.leaves.end());
    return {std::move(node), std::move(leaves)};
}

}  // namespace

bar::HomologyClass k_tree(bar::BarContext& ctx, const TreePtr& expr) {
    EvalResult r = k_eval(ctx, expr);
    Permutation sigma(r.leaves);  // position -> label
    if (sigma.is_identity()) return r.cls;
    return bar::class_symmetric_action(ctx, sigma, r.cls);
}

bar::HomologyClass k_map(bar::BarContext& ctx, const Monomial& m) {
    return k_tree(ctx, monomial_tree(m));
}

bar::HomologyClass k_map(bar::BarContext& ctx, const E2Elem& e) {
    bar::HomologyClass out;
    bool first = true;
    for (const auto& [m, c] : e.terms) {
        bar::HomologyClass piece = k_map(ctx, m);
        if (first) {
            out = piece;
            out.coords = scaled(piece.coords, c);
            first = false;
        } else {
            if (piece.k != out.k || piece.w != out.w)
                throw std::invalid_argument("k_map needs a homogeneous element");
            out.coords = axpy(out.coords, c, piece.coords);
        }
    }
    if (first) throw std::invalid_argument("k_map of the zero element is ambiguous");
    return out;
}

}  // namespace operad::e2
