#include "operad/bar_complex.hpp"

#include <algorithm>

namespace operad::bar {

BarElement& BarElement::add(const ChainKey& key, const Rational& c) {
    if (sgn(c) == 0) return *this;
    auto [it, fresh] = terms.emplace(key, c);
    if (!fresh) {
        it->second += c;
        if (sgn(it->second) == 0) terms.erase(it);
    }
    return *this;
}

BarComplex::BarComplex(dk::BasisCache& cache, int n) : cache_(cache), n_(n) {}

void BarComplex::ensure_chains(int k, int w) {
    auto key = std::make_pair(k, w);
    if (chains_.contains(key)) return;
    std::vector<ChainKey> out;
    if (k == 0) {
        if (w == 0) out.push_back({});
    } else if (k >= 1 && k <= w) {
        // compositions of w into k positive parts, then indices per part
        ChainKey stack;
        auto rec = [&](auto&& self, int parts_left, int weight_left) -> void {
            if (parts_left == 0) {
                if (weight_left == 0) out.push_back(stack);
                return;
            }
            for (int d = 1; d <= weight_left - (parts_left - 1); ++d) {
                const int dim = cache_.basis(n_, d).dim();
                for (int idx = 0; idx < dim; ++idx) {
                    stack.push_back({d, idx});
                    self(self, parts_left - 1, weight_left - d);
                    stack.pop_back();
                }
            }
        };
        rec(rec, k, w);
    }
    std::map<ChainKey, int> index;
    for (std::size_t i = 0; i < out.size(); ++i) index[out[i]] = static_cast<int>(i);
    chains_[key] = std::move(out);
    chain_index_[key] = std::move(index);
}

int BarComplex::chain_dim(int k, int w) {
    if (k < 0 || w < 0 || k > w) return 0;
    ensure_chains(k, w);
    return static_cast<int>(chains_.at({k, w}).size());
}

const std::vector<ChainKey>& BarComplex::chains(int k, int w) {
    ensure_chains(k, w);
    return chains_.at({k, w});
}

int BarComplex::chain_index(int k, int w, const ChainKey& key) {
    ensure_chains(k, w);
    return chain_index_.at({k, w}).at(key);
}

BarElement BarComplex::tensor_chain(const std::vector<NCPoly>& factors) {
    BarElement out;
    out.n = n_;
    std::map<ChainKey, Rational> partial;
    partial[{}] = 1;
    for (const auto& raw : factors) {
        NCPoly f = cache_.reduce(raw);
        if (sgn(dk::augment(f)) != 0)
            throw std::invalid_argument("bar factor has nonzero augmentation");
        std::map<ChainKey, Rational> next;
        for (const auto& [key, c] : partial) {
            for (const auto& [word, q] : f.terms) {
                const int d = static_cast<int>(word.size());
                ChainKey ext = key;
                ext.push_back({d, cache_.basis(n_, d).rep_index.at(word)});
                auto [it, fresh] = next.emplace(std::move(ext), c * q);
                if (!fresh) it->second += c * q;
            }
        }
        partial = std::move(next);
    }
    for (const auto& [key, c] : partial) out.add(key, c);
    return out;
}

BarElement BarComplex::differential(const BarElement& e) {
    BarElement out;
    out.n = n_;
    for (const auto& [key, c] : e.terms) {
        const int k = static_cast<int>(key.size());
        for (int s = 0; s + 1 < k; ++s) {
            const int sign = (s % 2 == 0) ? -1 : 1;  // (-1)^i with i = s+1
            const auto [da, ra] = key[s];
            const auto [db, rb] = key[s + 1];
            const Word& wb = cache_.basis(n_, db).representatives[rb];
            SparseVec merged = cache_.extend_coords(n_, da, ra, wb);
            for (const auto& [idx, q] : merged.e) {
                ChainKey next;
                next.reserve(key.size() - 1);
                for (int t = 0; t < k; ++t) {
                    if (t == s + 1) continue;
                    next.push_back(t == s ? std::make_pair(da + db, idx) : key[t]);
                }
                out.add(next, c * q * sign);
            }
        }
    }
    return out;
}

SparseVec BarComplex::differential_coords(int k, int w, int chain_idx) {
    ensure_chains(k, w);
    ensure_chains(k - 1, w);
    BarElement e;
    e.n = n_;
    e.add(chains_.at({k, w})[chain_idx], Rational(1));
    BarElement de = differential(e);
    const auto& index = chain_index_.at({k - 1, w});
    std::map<int, Rational> acc;
    for (const auto& [key, c] : de.terms) acc[index.at(key)] += c;
    SparseVec v;
    for (auto& [i, q] : acc)
        if (sgn(q) != 0) v.push(i, q);
    return v;
}

SparseVec BarComplex::apply_differential(int k, int w, const SparseVec& v) {
    SparseVec out;
    for (const auto& [idx, c] : v.e) out = axpy(out, c, differential_coords(k, w, idx));
    return out;
}

SparseMatrix BarComplex::matrix(int k, int w) {
    const int cols = chain_dim(k, w);
    const int rows = chain_dim(k - 1, w);
    SparseMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (const auto& [i, c] : differential_coords(k, w, j).e) m.set(i, j, c);
    return m;
}

int BarComplex::rank_of(int k, int w) {
    if (k < 1 || chain_dim(k, w) == 0 || chain_dim(k - 1, w) == 0) return 0;
    auto key = std::make_pair(k, w);
    auto it = ranks_.find(key);
    if (it != ranks_.end()) return it->second;
    int r = rank(matrix(k, w));
    ranks_[key] = r;
    return r;
}

int BarComplex::homology_dim(int k, int w) {
    const int dim = chain_dim(k, w);
    if (dim == 0) return 0;
    return dim - rank_of(k, w) - rank_of(k + 1, w);
}

lie::GradedDims BarComplex::homology_dims(int max_weight) {
    lie::GradedDims out;
    out.n = n_;
    for (int w = 0; w <= max_weight; ++w)
        for (int k = 0; k <= w; ++k) {
            int h = homology_dim(k, w);
            if (h != 0) out.dims[{k, w}] = h;
        }
    return out;
}

const BarComplex::Block& BarComplex::homology_block(int k, int w) {
    auto key = std::make_pair(k, w);
    auto it = blocks_.find(key);
    if (it != blocks_.end()) return it->second;

    Block block;
    block.k = k;
    block.w = w;
    const int dim = chain_dim(k, w);
    block.solver = std::make_unique<SpanSolver>(dim);

    // boundary image first, so representatives are chosen modulo boundaries
    for (int j = 0; j < chain_dim(k + 1, w); ++j)
        block.solver->add(differential_coords(k + 1, w, j));

    std::vector<SparseVec> cycles;
    if (k == 0) {
        for (int j = 0; j < dim; ++j) {
            SparseVec e;
            e.push(j, Rational(1));
            cycles.push_back(std::move(e));
        }
    } else {
        cycles = nullspace_basis(matrix(k, w));
    }
    for (auto& z : cycles) {
        const int gen_id = block.solver->generators();
        if (block.solver->add(z)) {
            block.reps.push_back(std::move(z));
            block.rep_gen_ids.push_back(gen_id);
        }
    }
    return blocks_.emplace(key, std::move(block)).first->second;
}

std::vector<HomologyClass> BarComplex::homology_basis(int k, int w) {
    const Block& b = homology_block(k, w);
    std::vector<HomologyClass> out;
    for (std::size_t i = 0; i < b.reps.size(); ++i) {
        HomologyClass c{n_, k, w, {}};
        c.coords.push(static_cast<int>(i), Rational(1));
        out.push_back(std::move(c));
    }
    return out;
}

HomologyClass BarComplex::class_from_cycle(int k, int w, const SparseVec& cycle) {
    if (!apply_differential(k, w, cycle).empty())
        throw std::invalid_argument("chain is not a cycle");
    const Block& b = homology_block(k, w);
    auto sol = b.solver->solve(cycle);
    if (!sol) throw std::logic_error("cycle escapes the computed block");
    HomologyClass c{n_, k, w, {}};
    for (std::size_t i = 0; i < b.rep_gen_ids.size(); ++i) {
        auto it = sol->find(b.rep_gen_ids[i]);
        if (it != sol->end() && sgn(it->second) != 0)
            c.coords.push(static_cast<int>(i), it->second);
    }
    return c;
}

SparseVec BarComplex::element_coords(const BarElement& e, int k, int w) {
    ensure_chains(k, w);
    const auto& index = chain_index_.at({k, w});
    std::map<int, Rational> acc;
    for (const auto& [key, c] : e.terms) {
        int weight = 0;
        for (const auto& [d, idx] : key) weight += d;
        if (static_cast<int>(key.size()) != k || weight != w)
            throw std::invalid_argument("chain is not homogeneous of the requested bidegree");
        acc[index.at(key)] += c;
    }
    SparseVec v;
    for (auto& [i, q] : acc)
        if (sgn(q) != 0) v.push(i, q);
    return v;
}

BarElement BarComplex::element_from_coords(int k, int w, const SparseVec& v) {
    ensure_chains(k, w);
    BarElement e;
    e.n = n_;
    const auto& list = chains_.at({k, w});
    for (const auto& [i, c] : v.e) e.add(list[i], c);
    return e;
}

HomologyClass BarComplex::class_from_element(const BarElement& e, int k, int w) {
    return class_from_cycle(k, w, element_coords(e, k, w));
}

BarElement BarComplex::representative(const HomologyClass& c) {
    const Block& b = homology_block(c.k, c.w);
    SparseVec v;
    for (const auto& [i, q] : c.coords.e) v = axpy(v, q, b.reps[i]);
    return element_from_coords(c.k, c.w, v);
}

BarComplex& BarContext::complex(int n) {
    auto it = complexes_.find(n);
    if (it == complexes_.end())
        it = complexes_.emplace(n, std::make_unique<BarComplex>(cache_, n)).first;
    return *it->second;
}

HomologyClass BarContext::unit_class(int n) {
    BarComplex& c = complex(n);
    if (c.homology_block(0, 0).reps.size() != 1)
        throw std::logic_error("block (0,0) should be a line");
    HomologyClass cls{n, 0, 0, {}};
    cls.coords.push(0, Rational(1));
    return cls;
}

HomologyClass BarContext::bracket_class() {
    auto basis = complex(2).homology_basis(1, 1);
    if (basis.size() != 1) throw std::logic_error("arity-2 block (1,1) should be a line");
    return basis[0];
}

BarElement chain_insert(BarContext& ctx, int i, int n, int m, const BarElement& a,
                        const BarElement& b) {
    const int ambient = n + m - 1;
    dk::BasisCache& cache = ctx.cache();
    BarComplex& target = ctx.complex(ambient);

    // images of representative words under the two legs of o_i, memoized
    std::map<std::pair<int, int>, NCPoly> outer_img, inner_img;
    auto outer_of = [&](int d, int idx) -> const NCPoly& {
        auto key = std::make_pair(d, idx);
        auto it = outer_img.find(key);
        if (it != outer_img.end()) return it->second;
        NCPoly w(n);
        w.add_term(cache.basis(n, d).representatives[idx], Rational(1));
        return outer_img.emplace(key, dk::insert(i, w, NCPoly::unit(m), cache)).first->second;
    };
    auto inner_of = [&](int d, int idx) -> const NCPoly& {
        auto key = std::make_pair(d, idx);
        auto it = inner_img.find(key);
        if (it != inner_img.end()) return it->second;
        NCPoly w(m);
        w.add_term(cache.basis(m, d).representatives[idx], Rational(1));
        return inner_img.emplace(key, dk::insert(i, NCPoly::unit(n), w, cache)).first->second;
    };

    BarElement out;
    out.n = ambient;
    for (const auto& [ka, ca] : a.terms) {
        for (const auto& [kb, cb] : b.terms) {
            const int p = static_cast<int>(ka.size());
            const int q = static_cast<int>(kb.size());
            std::vector<int> pattern;
            // enumerate (p,q)-shuffles; placing a b-factor now jumps it ahead
            // of every unused a-factor, one Koszul sign per jump
            auto emit = [&](auto&& self, int used_a, int used_b, int inversions) -> void {
                if (used_a == p && used_b == q) {
                    std::vector<NCPoly> factors;
                    int ia = 0, ib = 0;
                    for (int bit : pattern) {
                        if (bit == 0) {
                            factors.push_back(outer_of(ka[ia].first, ka[ia].second));
                            ++ia;
                        } else {
                            factors.push_back(inner_of(kb[ib].first, kb[ib].second));
                            ++ib;
                        }
                    }
                    Rational sign = (inversions % 2 == 0) ? 1 : -1;
                    BarElement piece = target.tensor_chain(factors);
                    for (const auto& [key, c] : piece.terms) out.add(key, c * ca * cb * sign);
                    return;
                }
                if (used_a < p) {
                    pattern.push_back(0);
                    self(self, used_a + 1, used_b, inversions);
                    pattern.pop_back();
                }
                if (used_b < q) {
                    pattern.push_back(1);
                    self(self, used_a, used_b + 1, inversions + (p - used_a));
                    pattern.pop_back();
                }
            };
            emit(emit, 0, 0, 0);
        }
    }
    return out;
}

HomologyClass induced_insert(BarContext& ctx, int i, const HomologyClass& x,
                             const HomologyClass& y) {
    BarElement a = ctx.complex(x.n).representative(x);
    BarElement b = ctx.complex(y.n).representative(y);
    BarElement z = chain_insert(ctx, i, x.n, y.n, a, b);
    return ctx.complex(x.n + y.n - 1).class_from_element(z, x.k + y.k, x.w + y.w);
}

HomologyClass class_symmetric_action(BarContext& ctx, const Permutation& s,
                                     const HomologyClass& c) {
    BarComplex& complex = ctx.complex(c.n);
    dk::BasisCache& cache = ctx.cache();
    BarElement rep = complex.representative(c);
    BarElement moved;
    moved.n = c.n;
    for (const auto& [key, coeff] : rep.terms) {
        std::vector<NCPoly> factors;
        for (const auto& [d, idx] : key) {
            NCPoly w(c.n);
            w.add_term(cache.basis(c.n, d).representatives[idx], Rational(1));
            factors.push_back(dk::symmetric_action(s, w, cache));
        }
        BarElement piece = complex.tensor_chain(factors);
        for (const auto& [k2, c2] : piece.terms) moved.add(k2, c2 * coeff);
    }
    return complex.class_from_element(moved, c.k, c.w);
}

GenerationResult generation_check(BarContext& ctx, int n, int max_weight) {
    GenerationResult result;
    result.homology_total = ctx.complex(n).homology_dims(max_weight).total();

    using Entry = std::pair<HomologyClass, std::string>;
    std::map<int, std::vector<Entry>> spanning;
    spanning[2] = {{ctx.unit_class(2), "1_2"}, {ctx.bracket_class(), "t"}};

    for (int arity = 3; arity <= n; ++arity) {
        std::map<std::pair<int, int>, SpanSolver> spans;
        std::vector<Entry> kept;
        for (int outer = 2; outer < arity; ++outer) {
            const int inner = arity + 1 - outer;
            if (inner < 2 || !spanning.contains(inner)) continue;
            for (int pos = 1; pos <= outer; ++pos) {
                for (const auto& [u, eu] : spanning[outer]) {
                    for (const auto& [v, ev] : spanning[inner]) {
                        if (u.w + v.w > max_weight) continue;
                        HomologyClass z = induced_insert(ctx, pos, u, v);
                        if (z.is_zero()) continue;
                        auto key = std::make_pair(z.k, z.w);
                        auto it = spans.find(key);
                        if (it == spans.end()) {
                            int dim = static_cast<int>(
                                ctx.complex(arity).homology_block(z.k, z.w).reps.size());
                            it = spans.emplace(key, SpanSolver(dim)).first;
                        }
                        if (it->second.add(z.coords))
                            kept.push_back(
                                {z, "o_" + std::to_string(pos) + "(" + eu + "," + ev + ")"});
                    }
                }
            }
        }
        spanning[arity] = std::move(kept);
    }

    result.spanned = static_cast<int>(spanning[n].size());
    for (const auto& [cls, expr] : spanning[n])
        result.certificate.push_back(
            {"(" + std::to_string(cls.k) + "," + std::to_string(cls.w) + ")", expr});
    result.generated = (result.spanned == result.homology_total);
    return result;
}

}  // namespace operad::bar
