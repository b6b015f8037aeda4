#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "operad/dk_algebra.hpp"
#include "operad/lie_dk.hpp"
#include "operad/sparse_matrix.hpp"

namespace operad::bar {

using dk::NCPoly;
using dk::Word;

// Basis chain of the reduced bar complex: a tensor of representative words,
// stored as (weight, representative index) per factor. Homological degree is
// the factor count, weight the total word length.
using ChainKey = std::vector<std::pair<int, int>>;

struct BarElement {
    int n = 0;
    std::map<ChainKey, Rational> terms;

    BarElement& add(const ChainKey& key, const Rational& c);
    bool is_zero() const { return terms.empty(); }

    friend bool operator==(const BarElement&, const BarElement&) = default;
};

struct HomologyClass {
    int n = 0;
    int k = 0;
    int w = 0;
    SparseVec coords;  // over the block's homology basis

    bool is_zero() const { return coords.empty(); }
    friend bool operator==(const HomologyClass&, const HomologyClass&) = default;
};

// Chain-level and homology-level model of the reduced bar complex of one
// algebra A^pb_n, bigraded by (homological degree, weight).
class BarComplex {
  public:
    BarComplex(dk::BasisCache& cache, int n);

    int n() const { return n_; }
    dk::BasisCache& cache() { return cache_; }

    int chain_dim(int k, int w);
    const std::vector<ChainKey>& chains(int k, int w);
    int chain_index(int k, int w, const ChainKey& key);

    // tensor of augmentation-free polynomials, expanded over basis chains
    BarElement tensor_chain(const std::vector<NCPoly>& factors);

    // d(a_1 (x) ... (x) a_k) = sum_i (-1)^i a_1 (x) ... (a_i a_{i+1}) ... (x) a_k
    BarElement differential(const BarElement& e);
    SparseVec differential_coords(int k, int w, int chain_idx);
    SparseVec apply_differential(int k, int w, const SparseVec& v);
    SparseMatrix matrix(int k, int w);  // rows C_{k-1,w}, cols C_{k,w}

    int homology_dim(int k, int w);  // rank-based, no basis construction
    lie::GradedDims homology_dims(int max_weight);

    struct Block {
        int k = 0, w = 0;
        std::vector<SparseVec> reps;  // cycle vectors, the homology basis
        // solver seeded with the boundary image then the representatives
        std::unique_ptr<SpanSolver> solver;
        std::vector<int> rep_gen_ids;  // generator ids of reps inside solver
    };
    const Block& homology_block(int k, int w);

    std::vector<HomologyClass> homology_basis(int k, int w);
    HomologyClass class_from_cycle(int k, int w, const SparseVec& cycle);
    HomologyClass class_from_element(const BarElement& e, int k, int w);
    BarElement representative(const HomologyClass& c);

    SparseVec element_coords(const BarElement& e, int k, int w);
    BarElement element_from_coords(int k, int w, const SparseVec& v);

  private:
    void ensure_chains(int k, int w);
    int rank_of(int k, int w);

    dk::BasisCache& cache_;
    int n_;
    std::map<std::pair<int, int>, std::vector<ChainKey>> chains_;
    std::map<std::pair<int, int>, std::map<ChainKey, int>> chain_index_;
    std::map<std::pair<int, int>, int> ranks_;
    std::map<std::pair<int, int>, Block> blocks_;
};

// Shared bar complexes across arities, backed by one basis cache.
class BarContext {
  public:
    explicit BarContext(dk::BasisCache& cache) : cache_(cache) {}

    dk::BasisCache& cache() { return cache_; }
    BarComplex& complex(int n);

    HomologyClass unit_class(int n);    // block (0,0)
    HomologyClass bracket_class();      // [t_12], arity 2, block (1,1)

  private:
    dk::BasisCache& cache_;
    std::map<int, std::unique_ptr<BarComplex>> complexes_;
};

// Operadic insertion induced on homology: representatives are inserted
// factorwise and the two factor lists interleaved with shuffle signs.
HomologyClass induced_insert(BarContext& ctx, int i, const HomologyClass& x,
                             const HomologyClass& y);

// Chain-level version, exposed for representative-independence tests.
BarElement chain_insert(BarContext& ctx, int i, int n, int m, const BarElement& a,
                        const BarElement& b);

HomologyClass class_symmetric_action(BarContext& ctx, const Permutation& s,
                                     const HomologyClass& c);

struct GenerationResult {
    bool generated = false;
    int spanned = 0;
    int homology_total = 0;
    // expression trees of a spanning set, per block
    std::vector<std::pair<std::string, std::string>> certificate;  // (block, expression)
};

// True when iterated insertions of the arity-2 unit and bracket classes span
// the whole computed homology of arity n.
GenerationResult generation_check(BarContext& ctx, int n, int max_weight);

}  // namespace operad::bar
