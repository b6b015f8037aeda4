#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "operad/errors.hpp"
#include "operad/permutation.hpp"
#include "operad/rational.hpp"
#include "operad/sparse_matrix.hpp"

namespace operad::dk {

// Chord generators t_ij of the n-strand algebra, normalized to i < j and
// ordered t_12 < t_13 < t_23 < t_14 < ... (grouped by the larger index).
int gen_count(int n);
int gen_index(int i, int j);                // order-normalizing
std::pair<int, int> gen_pair(int index);    // back to (i, j), i < j

// A word is a sequence of generator indices; its weight is its length.
using Word = std::vector<int>;

// Graded lexicographic: length first, then letter sequence.
struct DegLex {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

// Finite rational combination of words in the chord generators of A^pb_n.
struct NCPoly {
    int n = 0;
    std::map<Word, Rational, DegLex> terms;

    explicit NCPoly(int strands = 0) : n(strands) {}

    static NCPoly unit(int n);
    static NCPoly generator(int n, int i, int j);

    NCPoly& add_term(const Word& w, const Rational& c);
    bool is_zero() const { return terms.empty(); }
    int max_weight() const { return terms.empty() ? 0 : static_cast<int>(terms.rbegin()->first.size()); }

    NCPoly operator+(const NCPoly& o) const;
    NCPoly operator-(const NCPoly& o) const;
    NCPoly operator*(const Rational& c) const;

    friend bool operator==(const NCPoly&, const NCPoly&) = default;
};

enum class RelatorMode { standard, paper_literal };

std::string relator_mode_name(RelatorMode m);
RelatorMode relator_mode_from_name(const std::string& s);

struct Options {
    int max_weight = 4;
    RelatorMode mode = RelatorMode::standard;
    std::string cache_dir;  // empty disables the disk cache
};

// Quadratic relators: [t_ij + t_ik, t_jk] over all triples, plus (in standard
// mode) the commutators [t_ij, t_kl] of chords on disjoint index pairs.
std::vector<NCPoly> relators(int n, RelatorMode mode = RelatorMode::standard);

// Basis of one graded component together with the rewrite of the
// non-surviving candidate words (representative-of-degree-(d-1) times
// generator) over the surviving ones.
struct DKBasis {
    int n = 0;
    int d = 0;
    std::vector<Word> representatives;                       // deglex order
    std::map<Word, int, DegLex> rep_index;                   // word -> position
    std::map<std::pair<int, int>, SparseVec> rewrite;        // (prefix rep, gen) -> coords

    int dim() const { return static_cast<int>(representatives.size()); }
};

// Owns the graded bases per (n, d) for one relator mode; thread-safe,
// optionally persisted to disk keyed by (n, d, relator hash).
class BasisCache {
  public:
    explicit BasisCache(Options opt = {});

    const Options& options() const { return opt_; }
    int max_weight() const { return opt_.max_weight; }

    const DKBasis& basis(int n, int d);

    // Coordinates of a raw word in basis(n, w).
    SparseVec word_coords(int n, const Word& w);
    // Coordinates of the concatenation rep_prefix * suffix, where rep_prefix
    // is the given representative index at degree `prefix_deg`.
    SparseVec extend_coords(int n, int prefix_deg, int prefix_rep, const Word& suffix);

    NCPoly reduce(const NCPoly& p);

  private:
    const DKBasis& basis_locked(int n, int d);
    DKBasis compute(int n, int d);
    std::string cache_path(int n, int d) const;
    bool load_from_disk(int n, int d, DKBasis& out) const;
    void save_to_disk(const DKBasis& b) const;

    Options opt_;
    std::string relator_hash_;
    std::map<std::pair<int, int>, DKBasis> mem_;
    mutable std::recursive_mutex mu_;
};

Rational augment(const NCPoly& a);

// Concatenation product reduced to representatives. Throws TruncationError
// when the combined weight exceeds the cache's bound.
NCPoly multiply(const NCPoly& a, const NCPoly& b, BasisCache& cache);
// Power-series variant: terms beyond max_deg are discarded instead.
NCPoly multiply_trunc(const NCPoly& a, const NCPoly& b, BasisCache& cache, int max_deg);

// Generator relabeling t_ij -> t_{s(i)s(j)}, reduced to canonical form.
NCPoly symmetric_action(const Permutation& s, const NCPoly& a, BasisCache& cache);

// Operadic insertion o_i : A^pb_n (x) A^pb_m -> A^pb_{n+m-1}.
NCPoly insert(int i, const NCPoly& outer, const NCPoly& inner, BasisCache& cache);

// Algebra map A^pb_k -> A^pb_ambient determined by k disjoint label sets:
// t_pq -> sum over u in blocks[p-1], v in blocks[q-1] of t_uv.
NCPoly block_embed(const NCPoly& p, const std::vector<std::vector<int>>& blocks, int ambient_n,
                   BasisCache& cache);

nlohmann::ordered_json poly_to_json(const NCPoly& p);
NCPoly poly_from_json(const nlohmann::json& j);

}  // namespace operad::dk
