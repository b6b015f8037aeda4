#pragma once

#include <stdexcept>
#include <vector>

namespace operad {

// A bijection of {1..n}, stored as the image sequence.
class Permutation {
  public:
    Permutation() = default;

    static Permutation identity(int n) {
        std::vector<int> im(n);
        for (int i = 0; i < n; ++i) im[i] = i + 1;
        return Permutation(std::move(im));
    }

    // images[i-1] = image of i; validates bijectivity.
    explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
        std::vector<char> seen(images_.size(), 0);
        for (int v : images_) {
            if (v < 1 || v > static_cast<int>(images_.size()) || seen[v - 1])
                throw std::invalid_argument("not a permutation");
            seen[v - 1] = 1;
        }
    }

    static Permutation transposition(int n, int a, int b) {
        auto p = identity(n);
        std::swap(p.images_[a - 1], p.images_[b - 1]);
        return p;
    }

    int size() const { return static_cast<int>(images_.size()); }

    int operator()(int i) const { return images_.at(i - 1); }

    // this first, then other:  (this.then(other))(i) = other(this(i))
    Permutation then(const Permutation& other) const {
        std::vector<int> im(images_.size());
        for (std::size_t i = 0; i < images_.size(); ++i) im[i] = other(images_[i]);
        return Permutation(std::move(im));
    }

    Permutation inverse() const {
        std::vector<int> im(images_.size());
        for (std::size_t i = 0; i < images_.size(); ++i) im[images_[i] - 1] = static_cast<int>(i) + 1;
        return Permutation(std::move(im));
    }

    bool is_identity() const {
        for (std::size_t i = 0; i < images_.size(); ++i)
            if (images_[i] != static_cast<int>(i) + 1) return false;
        return true;
    }

    const std::vector<int>& images() const { return images_; }

    friend bool operator==(const Permutation&, const Permutation&) = default;

  private:
    std::vector<int> images_;
};

// Expand slot k of a permutation on n letters into a block of width m: the
// result on n+m-1 letters carries the k-th domain block (width m, the others
// width 1) order-preservingly onto the block at s(k).
inline Permutation block_permutation(const Permutation& s, int k, int m) {
    const int n = s.size();
    std::vector<int> im(n + m - 1);
    auto dom_start = [&](int j) { return j + (j > k ? m - 1 : 0); };
    auto cod_start = [&](int j) { return s(j) + (s(j) > s(k) ? m - 1 : 0); };
    for (int j = 1; j <= n; ++j) {
        const int width = (j == k) ? m : 1;
        for (int t = 0; t < width; ++t) im[dom_start(j) - 1 + t] = cod_start(j) + t;
    }
    return Permutation(std::move(im));
}

}  // namespace operad
