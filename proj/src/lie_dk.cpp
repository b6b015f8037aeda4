#include "operad/lie_dk.hpp"

#include <algorithm>

namespace operad::lie {

Tensor tensor_bracket(const Tensor& a, const Tensor& b) {
    Tensor out;
    auto accumulate = [&out](const Tensor& x, const Tensor& y, int sign) {
        for (const auto& [wx, cx] : x)
            for (const auto& [wy, cy] : y) {
                Word w = wx;
                w.insert(w.end(), wy.begin(), wy.end());
                Rational add = cx * cy * sign;
                auto [it, fresh] = out.emplace(w, add);
                if (!fresh) {
                    it->second += add;
                    if (sgn(it->second) == 0) out.erase(it);
                }
            }
    };
    accumulate(a, b, 1);
    accumulate(b, a, -1);
    return out;
}

namespace {

bool is_lyndon(const Word& x) {
    for (std::size_t s = 1; s < x.size(); ++s) {
        Word rot(x.begin() + static_cast<std::ptrdiff_t>(s), x.end());
        rot.insert(rot.end(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(s));
        if (!(x < rot)) return false;
    }
    return true;
}

}  // namespace

void FreeLie::ensure(int w) {
    if (w < 1 || lyndon_.contains(w)) return;
    std::vector<Word> words;
    Word stack;
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == w) {
            if (is_lyndon(stack)) words.push_back(stack);
            return;
        }
        for (int a = 0; a < alphabet_; ++a) {
            stack.push_back(a);
            self(self, depth + 1);
            stack.pop_back();
        }
    };
    rec(rec, 0);
    std::sort(words.begin(), words.end());

    std::map<Word, int, DegLex> index;
    for (std::size_t i = 0; i < words.size(); ++i) index[words[i]] = static_cast<int>(i);

    // standard bracketing: split before the longest proper Lyndon suffix
    std::vector<Tensor> exps;
    exps.reserve(words.size());
    for (const auto& word : words) {
        if (word.size() == 1) {
            Tensor t;
            t[word] = 1;
            exps.push_back(std::move(t));
            continue;
        }
        std::size_t split = 0;
        for (std::size_t s = 1; s < word.size(); ++s) {
            Word suffix(word.begin() + static_cast<std::ptrdiff_t>(s), word.end());
            if (is_lyndon(suffix)) {
                split = s;
                break;
            }
        }
        Word left(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(split));
        Word right(word.begin() + static_cast<std::ptrdiff_t>(split), word.end());
        ensure(static_cast<int>(left.size()));
        ensure(static_cast<int>(right.size()));
        const Tensor& lt = expansions_.at(static_cast<int>(left.size()))
                               .at(lyndon_index_.at(static_cast<int>(left.size())).at(left));
        const Tensor& rt = expansions_.at(static_cast<int>(right.size()))
                               .at(lyndon_index_.at(static_cast<int>(right.size())).at(right));
        exps.push_back(tensor_bracket(lt, rt));
    }

    lyndon_[w] = std::move(words);
    lyndon_index_[w] = std::move(index);
    expansions_[w] = std::move(exps);
}

const std::vector<Word>& FreeLie::lyndon(int w) {
    ensure(w);
    return lyndon_.at(w);
}

const std::vector<Tensor>& FreeLie::expansions(int w) {
    ensure(w);
    return expansions_.at(w);
}

std::optional<SparseVec> FreeLie::tensor_to_lyndon(int w, Tensor tensor) {
    ensure(w);
    const auto& index = lyndon_index_.at(w);
    const auto& exps = expansions_.at(w);
    std::map<int, Rational> coords;
    while (!tensor.empty()) {
        // The least word of a Lie element is Lyndon with multiplicity equal to
        // its coefficient; peel it off and repeat.
        const Word word = tensor.begin()->first;
        const Rational c = tensor.begin()->second;
        auto it = index.find(word);
        if (it == index.end()) return std::nullopt;
        coords[it->second] += c;
        for (const auto& [we, ce] : exps[it->second]) {
            Rational sub = -c * ce;
            auto [jt, fresh] = tensor.emplace(we, sub);
            if (!fresh) {
                jt->second += sub;
                if (sgn(jt->second) == 0) tensor.erase(jt);
            }
        }
        if (tensor.contains(word)) return std::nullopt;  // leading term failed to cancel
    }
    SparseVec v;
    for (auto& [i, q] : coords)
        if (sgn(q) != 0) v.push(i, q);
    return v;
}

Tensor FreeLie::lyndon_to_tensor(int w, const SparseVec& coords) {
    ensure(w);
    const auto& exps = expansions_.at(w);
    Tensor out;
    for (const auto& [i, c] : coords.e)
        for (const auto& [word, q] : exps[i]) {
            Rational add = c * q;
            auto [it, fresh] = out.emplace(word, add);
            if (!fresh) {
                it->second += add;
                if (sgn(it->second) == 0) out.erase(it);
            }
        }
    return out;
}

DKLie::DKLie(int n, dk::RelatorMode mode, int max_weight)
    : n_(n), mode_(mode), max_weight_(max_weight), free_(dk::gen_count(n)) {}

void DKLie::ensure(int w) {
    if (w < 1 || quotient_.contains(w)) return;
    if (w > max_weight_)
        throw TruncationError("Lie weight " + std::to_string(w) + " exceeds max weight " +
                              std::to_string(max_weight_));
    const int lyndon_dim = static_cast<int>(free_.lyndon(w).size());

    std::vector<SparseVec> ideal;
    if (w == 2) {
        for (const auto& r : dk::relators(n_, mode_)) {
            Tensor t;
            for (const auto& [word, c] : r.terms) t[word] = c;
            auto v = free_.tensor_to_lyndon(2, std::move(t));
            if (!v) throw std::logic_error("relator is not a Lie element");
            if (!v->empty()) ideal.push_back(std::move(*v));
        }
    } else if (w > 2) {
        ensure(w - 1);
        const auto& prev = quotient_.at(w - 1);
        for (const auto& row : prev.ech.rows) {
            Tensor t = free_.lyndon_to_tensor(w - 1, row);
            for (int g = 0; g < dk::gen_count(n_); ++g) {
                Tensor gen;
                gen[{g}] = 1;
                auto v = free_.tensor_to_lyndon(w, tensor_bracket(gen, t));
                if (!v) throw std::logic_error("ideal bracket left the Lie subspace");
                if (!v->empty()) ideal.push_back(std::move(*v));
            }
        }
    }
    quotient_.emplace(w, quotient_basis(lyndon_dim, ideal));
}

int DKLie::dim(int w) {
    if (w == 0) return 0;
    ensure(w);
    return static_cast<int>(quotient_.at(w).representatives.size());
}

const std::vector<int>& DKLie::representative_lyndon(int w) {
    ensure(w);
    return quotient_.at(w).representatives;
}

SparseVec DKLie::reduce_lyndon(int w, const SparseVec& lyndon_coords) {
    ensure(w);
    const auto& qb = quotient_.at(w);
    SparseVec reduced = qb.reduce(lyndon_coords);
    // re-index from Lyndon columns to representative positions
    SparseVec out;
    for (const auto& [col, c] : reduced.e) {
        auto it = std::lower_bound(qb.representatives.begin(), qb.representatives.end(), col);
        out.push(static_cast<int>(it - qb.representatives.begin()), c);
    }
    return out;
}

std::optional<LieElement> DKLie::reduce_tensor(int w, const Tensor& t) {
    auto lyn = free_.tensor_to_lyndon(w, t);
    if (!lyn) return std::nullopt;
    return LieElement{n_, w, reduce_lyndon(w, *lyn)};
}

Tensor DKLie::tensor_rep(int w, int pos) {
    ensure(w);
    SparseVec unit;
    unit.push(quotient_.at(w).representatives.at(pos), Rational(1));
    return free_.lyndon_to_tensor(w, unit);
}

LieElement DKLie::basis_element(int w, int pos) {
    if (pos < 0 || pos >= dim(w)) throw std::out_of_range("basis element index");
    LieElement e{n_, w, {}};
    e.coords.push(pos, Rational(1));
    return e;
}

LieElement DKLie::bracket(const LieElement& a, const LieElement& b) {
    if (a.n != n_ || b.n != n_) throw std::invalid_argument("strand count mismatch in bracket");
    const int w = a.weight + b.weight;
    if (w > max_weight_)
        throw TruncationError("bracket weight " + std::to_string(w) + " exceeds max weight " +
                              std::to_string(max_weight_));
    auto lift = [this](const LieElement& x) {
        Tensor t;
        for (const auto& [i, c] : x.coords.e)
            for (const auto& [word, q] : tensor_rep(x.weight, i)) {
                Rational add = c * q;
                auto [it, fresh] = t.emplace(word, add);
                if (!fresh) {
                    it->second += add;
                    if (sgn(it->second) == 0) t.erase(it);
                }
            }
        return t;
    };
    auto result = reduce_tensor(w, tensor_bracket(lift(a), lift(b)));
    if (!result) throw std::logic_error("bracket left the Lie subspace");
    return *result;
}

int GradedDims::total() const {
    int t = 0;
    for (const auto& [kw, d] : dims) t += d;
    return t;
}

int GradedDims::degree_total(int k) const {
    int t = 0;
    for (const auto& [kw, d] : dims)
        if (kw.first == k) t += d;
    return t;
}

nlohmann::ordered_json GradedDims::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    auto& arr = j["dims"] = nlohmann::ordered_json::array();
    for (const auto& [kw, d] : dims) {
        nlohmann::ordered_json e;
        e["k"] = kw.first;
        e["w"] = kw.second;
        e["dim"] = d;
        arr.push_back(std::move(e));
    }
    return j;
}

GradedDims graded_dims_from_json(const nlohmann::json& j) {
    GradedDims g;
    g.n = j.at("n").get<int>();
    for (const auto& e : j.at("dims"))
        g.dims[{e.at("k").get<int>(), e.at("w").get<int>()}] = e.at("dim").get<int>();
    return g;
}

CEComplex::CEComplex(DKLie& g, int max_weight) : g_(g), max_weight_(max_weight) {}

void CEComplex::ensure_block(int k, int w) {
    auto key = std::make_pair(k, w);
    if (chains_.contains(key)) return;
    std::vector<std::vector<ElemId>> out;
    if (k == 0) {
        if (w == 0) out.push_back({});
    } else if (k <= w) {
        // ascending tuples of distinct basis elements with total weight w
        std::vector<ElemId> stack;
        auto rec = [&](auto&& self, ElemId from, int remaining_k, int remaining_w) -> void {
            if (remaining_k == 0) {
                if (remaining_w == 0) out.push_back(stack);
                return;
            }
            for (int wt = from.first; wt <= remaining_w - (remaining_k - 1); ++wt) {
                int start = (wt == from.first) ? from.second : 0;
                for (int idx = start; idx < g_.dim(wt); ++idx) {
                    stack.push_back({wt, idx});
                    self(self, {wt, idx + 1}, remaining_k - 1, remaining_w - wt);
                    stack.pop_back();
                }
            }
        };
        rec(rec, {1, 0}, k, w);
    }
    std::map<std::vector<ElemId>, int> index;
    for (std::size_t i = 0; i < out.size(); ++i) index[out[i]] = static_cast<int>(i);
    chains_[key] = std::move(out);
    chain_index_[key] = std::move(index);
}

int CEComplex::chain_dim(int k, int w) {
    if (k < 0 || w < 0 || k > w) return 0;
    ensure_block(k, w);
    return static_cast<int>(chains_.at({k, w}).size());
}

const std::vector<std::vector<CEComplex::ElemId>>& CEComplex::chains(int k, int w) {
    ensure_block(k, w);
    return chains_.at({k, w});
}

SparseVec CEComplex::bracket_coords(ElemId a, ElemId b) {
    auto key = std::make_pair(a, b);
    auto it = bracket_cache_.find(key);
    if (it != bracket_cache_.end()) return it->second;
    LieElement res =
        g_.bracket(g_.basis_element(a.first, a.second), g_.basis_element(b.first, b.second));
    bracket_cache_[key] = res.coords;
    return res.coords;
}

SparseVec CEComplex::differential(int k, int w, int chain_index) {
    ensure_block(k, w);
    ensure_block(k - 1, w);
    const auto& tuple = chains_.at({k, w})[chain_index];
    const auto& target_index = chain_index_.at({k - 1, w});

    std::map<int, Rational> acc;
    for (int p = 0; p < k; ++p) {
        for (int q = p + 1; q < k; ++q) {
            // (-1)^{p+q} with 1-based positions
            const int pair_sign = ((p + q) % 2 == 0) ? 1 : -1;
            SparseVec br = bracket_coords(tuple[p], tuple[q]);
            const int bw = tuple[p].first + tuple[q].first;
            std::vector<ElemId> rest;
            for (int r = 0; r < k; ++r)
                if (r != p && r != q) rest.push_back(tuple[r]);
            for (const auto& [idx, c] : br.e) {
                ElemId y{bw, idx};
                auto pos = std::lower_bound(rest.begin(), rest.end(), y);
                if (pos != rest.end() && *pos == y) continue;  // repeated factor
                std::vector<ElemId> next = rest;
                const int moves = static_cast<int>(pos - rest.begin());
                next.insert(next.begin() + moves, y);
                Rational coef = c * pair_sign * ((moves % 2 == 0) ? 1 : -1);
                acc[target_index.at(next)] += coef;
            }
        }
    }
    SparseVec v;
    for (auto& [i, q] : acc)
        if (sgn(q) != 0) v.push(i, q);
    return v;
}

SparseMatrix CEComplex::matrix(int k, int w) {
    const int cols = chain_dim(k, w);
    const int rows = chain_dim(k - 1, w);
    SparseMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (const auto& [i, c] : differential(k, w, j).e) m.set(i, j, c);
    return m;
}

GradedDims CEComplex::homology() {
    GradedDims out;
    out.n = g_.n();
    std::map<std::pair<int, int>, int> ranks;
    for (int w = 0; w <= max_weight_; ++w)
        for (int k = 1; k <= w; ++k) ranks[{k, w}] = rank(matrix(k, w));
    for (int w = 0; w <= max_weight_; ++w) {
        for (int k = 0; k <= w; ++k) {
            int dim_k = chain_dim(k, w);
            if (dim_k == 0) continue;
            int r_in = (k + 1 <= w) ? ranks[{k + 1, w}] : 0;
            int r_out = (k >= 1) ? ranks[{k, w}] : 0;
            int h = dim_k - r_in - r_out;
            if (h != 0) out.dims[{k, w}] = h;
        }
    }
    return out;
}

GradedDims ce_homology(int n, dk::RelatorMode mode, int max_weight) {
    DKLie g(n, mode, max_weight);
    CEComplex complex(g, max_weight);
    return complex.homology();
}

}  // namespace operad::lie
