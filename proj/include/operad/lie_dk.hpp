#pragma once

#include <map>
#include <optional>
#include <vector>

#include "json.hpp"
#include "operad/dk_algebra.hpp"
#include "operad/sparse_matrix.hpp"

namespace operad::lie {

using dk::DegLex;
using dk::Word;

using Tensor = std::map<Word, Rational, DegLex>;

// Concatenation commutator a*b - b*a on tensor-algebra elements.
Tensor tensor_bracket(const Tensor& a, const Tensor& b);

// Free Lie algebra on an ordered alphabet with the Lyndon-word basis.
// Expansions use the standard bracketing of each Lyndon word; triangularity
// (a Lyndon bracketing expands as its word plus lexicographically larger
// words) drives the coordinate conversion.
class FreeLie {
  public:
    explicit FreeLie(int alphabet) : alphabet_(alphabet) {}

    int alphabet() const { return alphabet_; }
    const std::vector<Word>& lyndon(int w);  // lex-ordered
    const std::vector<Tensor>& expansions(int w);

    // Lyndon coordinates of a Lie element given in the tensor algebra;
    // nullopt when the element is not in the Lie subspace.
    std::optional<SparseVec> tensor_to_lyndon(int w, Tensor tensor);
    Tensor lyndon_to_tensor(int w, const SparseVec& coords);

  private:
    void ensure(int w);

    int alphabet_;
    std::map<int, std::vector<Word>> lyndon_;
    std::map<int, std::map<Word, int, DegLex>> lyndon_index_;
    std::map<int, std::vector<Tensor>> expansions_;
};

struct LieElement {
    int n = 0;
    int weight = 0;
    SparseVec coords;  // over the chosen basis of the weight component

    friend bool operator==(const LieElement&, const LieElement&) = default;
};

// The graded Lie algebra of chord generators modulo the quadratic relators,
// one weight component at a time. The ideal is accumulated iteratively:
// weight 2 holds the relators, weight w the brackets of generators with the
// weight-(w-1) component.
class DKLie {
  public:
    DKLie(int n, dk::RelatorMode mode, int max_weight);

    int n() const { return n_; }
    int max_weight() const { return max_weight_; }

    int dim(int w);
    // global basis enumeration used by the Chevalley-Eilenberg complex
    const std::vector<int>& representative_lyndon(int w);

    // quotient coordinates of a free-Lie element; nullopt when the tensor is
    // not a Lie element at all
    std::optional<LieElement> reduce_tensor(int w, const Tensor& t);
    SparseVec reduce_lyndon(int w, const SparseVec& lyndon_coords);

    // tensor-algebra lift of the pos-th basis element of weight w
    Tensor tensor_rep(int w, int pos);

    LieElement basis_element(int w, int pos);
    LieElement bracket(const LieElement& a, const LieElement& b);

    FreeLie& free_lie() { return free_; }

  private:
    void ensure(int w);

    int n_;
    dk::RelatorMode mode_;
    int max_weight_;
    FreeLie free_;
    std::map<int, QuotientBasis> quotient_;  // over Lyndon coordinates per weight
};

struct GradedDims {
    int n = 0;
    std::map<std::pair<int, int>, int> dims;  // (homological degree k, weight w) -> dim

    int at(int k, int w) const {
        auto it = dims.find({k, w});
        return it == dims.end() ? 0 : it->second;
    }
    int total() const;
    // dimension of H_k summed over computed weights
    int degree_total(int k) const;
    nlohmann::ordered_json to_json() const;
};

// Chevalley-Eilenberg complex of a DKLie truncated by weight; chains of
// weight w only involve basis elements of weight <= w, so every block is
// finite dimensional.
class CEComplex {
  public:
    CEComplex(DKLie& g, int max_weight);

    using ElemId = std::pair<int, int>;  // (weight, index within weight)

    int chain_dim(int k, int w);
    const std::vector<std::vector<ElemId>>& chains(int k, int w);

    // differential of one basis chain, in coordinates of the (k-1, w) block
    SparseVec differential(int k, int w, int chain_index);
    SparseMatrix matrix(int k, int w);  // rows: C_{k-1,w}, cols: C_{k,w}

    GradedDims homology();

  private:
    void ensure_block(int k, int w);
    SparseVec bracket_coords(ElemId a, ElemId b);  // cached structure constants

    DKLie& g_;
    int max_weight_;
    std::map<std::pair<int, int>, std::vector<std::vector<ElemId>>> chains_;
    std::map<std::pair<int, int>, std::map<std::vector<ElemId>, int>> chain_index_;
    std::map<std::pair<ElemId, ElemId>, SparseVec> bracket_cache_;
};

GradedDims ce_homology(int n, dk::RelatorMode mode, int max_weight);

GradedDims graded_dims_from_json(const nlohmann::json& j);

}  // namespace operad::lie
