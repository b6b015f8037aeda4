#include "operad/dk_algebra.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace operad::dk {

int gen_count(int n) { return n * (n - 1) / 2; }

int gen_index(int i, int j) {
    if (i == j) throw std::invalid_argument("chord needs distinct strands");
    if (i > j) std::swap(i, j);
    return (j - 1) * (j - 2) / 2 + (i - 1);
}

std::pair<int, int> gen_pair(int index) {
    int j = 2;
    while ((j) * (j - 1) / 2 <= index) ++j;
    int i = index - (j - 1) * (j - 2) / 2 + 1;
    return {i, j};
}

NCPoly NCPoly::unit(int n) {
    NCPoly p(n);
    p.terms[{}] = 1;
    return p;
}

NCPoly NCPoly::generator(int n, int i, int j) {
    if (i < 1 || j < 1 || i > n || j > n) throw std::invalid_argument("strand out of range");
    NCPoly p(n);
    p.terms[{gen_index(i, j)}] = 1;
    return p;
}

NCPoly& NCPoly::add_term(const Word& w, const Rational& c) {
    if (sgn(c) == 0) return *this;
    auto it = terms.find(w);
    if (it == terms.end()) {
        terms.emplace(w, c);
    } else {
        it->second += c;
        if (sgn(it->second) == 0) terms.erase(it);
    }
    return *this;
}

NCPoly NCPoly::operator+(const NCPoly& o) const {
    NCPoly out = *this;
    for (const auto& [w, c] : o.terms) out.add_term(w, c);
    return out;
}

NCPoly NCPoly::operator-(const NCPoly& o) const {
    NCPoly out = *this;
    for (const auto& [w, c] : o.terms) out.add_term(w, -c);
    return out;
}

NCPoly NCPoly::operator*(const Rational& c) const {
    NCPoly out(n);
    if (sgn(c) == 0) return out;
    for (const auto& [w, v] : terms) out.terms[w] = v * c;
    return out;
}

std::string relator_mode_name(RelatorMode m) {
    return m == RelatorMode::standard ? "standard" : "paper-literal";
}

RelatorMode relator_mode_from_name(const std::string& s) {
    if (s == "standard") return RelatorMode::standard;
    if (s == "paper-literal") return RelatorMode::paper_literal;
    throw std::invalid_argument("unknown relator mode: " + s);
}

std::vector<NCPoly> relators(int n, RelatorMode mode) {
    std::vector<NCPoly> out;
    // [t_ij + t_ik, t_jk] for every choice of pair {j,k} and third strand i.
    for (int j = 1; j <= n; ++j) {
        for (int k = j + 1; k <= n; ++k) {
            for (int i = 1; i <= n; ++i) {
                if (i == j || i == k) continue;
                NCPoly r(n);
                int ij = gen_index(i, j), ik = gen_index(i, k), jk = gen_index(j, k);
                r.add_term({ij, jk}, 1);
                r.add_term({jk, ij}, -1);
                r.add_term({ik, jk}, 1);
                r.add_term({jk, ik}, -1);
                out.push_back(std::move(r));
            }
        }
    }
    if (mode == RelatorMode::standard) {
        // [t_ij, t_kl] = 0 for chords on disjoint strand pairs.
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                for (int k = i + 1; k <= n; ++k)
                    for (int l = k + 1; l <= n; ++l) {
                        if (k == j || l == j) continue;
                        if (std::make_pair(i, j) >= std::make_pair(k, l)) continue;
                        NCPoly r(n);
                        int ij = gen_index(i, j), kl = gen_index(k, l);
                        r.add_term({ij, kl}, 1);
                        r.add_term({kl, ij}, -1);
                        out.push_back(std::move(r));
                    }
    }
    return out;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

nlohmann::ordered_json word_to_json(const Word& w) {
    nlohmann::ordered_json jw = nlohmann::ordered_json::array();
    for (int g : w) {
        auto [i, j] = gen_pair(g);
        jw.push_back({i, j});
    }
    return jw;
}

Word word_from_json(const nlohmann::json& jw) {
    Word w;
    for (const auto& pair : jw) w.push_back(gen_index(pair.at(0).get<int>(), pair.at(1).get<int>()));
    return w;
}

}  // namespace

BasisCache::BasisCache(Options opt) : opt_(std::move(opt)) {}

const DKBasis& BasisCache::basis(int n, int d) {
    std::lock_guard lock(mu_);
    return basis_locked(n, d);
}

const DKBasis& BasisCache::basis_locked(int n, int d) {
    if (n < 1) throw std::invalid_argument("strand count must be positive");
    if (d < 0) throw std::invalid_argument("negative degree");
    if (d > opt_.max_weight)
        throw TruncationError("degree " + std::to_string(d) + " exceeds configured max weight " +
                              std::to_string(opt_.max_weight));
    for (int dd = 0; dd <= d; ++dd) {
        auto key = std::make_pair(n, dd);
        if (mem_.contains(key)) continue;
        DKBasis b;
        if (load_from_disk(n, dd, b)) {
            mem_.emplace(key, std::move(b));
            continue;
        }
        b = compute(n, dd);
        save_to_disk(b);
        mem_.emplace(key, std::move(b));
    }
    return mem_.at({n, d});
}

DKBasis BasisCache::compute(int n, int d) {
    DKBasis b;
    b.n = n;
    b.d = d;
    if (d == 0) {
        b.representatives.push_back({});
        b.rep_index[{}] = 0;
        return b;
    }
    const DKBasis& prev = mem_.at({n, d - 1});
    const int gens = gen_count(n);

    std::vector<SparseVec> rows;
    if (d >= 2) {
        const DKBasis& prev2 = mem_.at({n, d - 2});
        const auto rels = relators(n, opt_.mode);
        for (int b2 = 0; b2 < prev2.dim(); ++b2) {
            for (const auto& rel : rels) {
                std::map<int, Rational> acc;
                for (const auto& [uv, c] : rel.terms) {
                    const int u = uv[0], v = uv[1];
                    // coordinates of (prev2 rep) * u over the degree-(d-1) basis
                    Word cand = prev2.representatives[b2];
                    cand.push_back(u);
                    auto rep_it = prev.rep_index.find(cand);
                    if (rep_it != prev.rep_index.end()) {
                        acc[rep_it->second * gens + v] += c;
                    } else {
                        const SparseVec& rw = prev.rewrite.at({b2, u});
                        for (const auto& [b1, q] : rw.e) acc[b1 * gens + v] += c * q;
                    }
                }
                SparseVec row;
                for (auto& [col, q] : acc)
                    if (sgn(q) != 0) row.push(col, q);
                if (!row.empty()) rows.push_back(std::move(row));
            }
        }
    }

    QuotientBasis qb = quotient_basis(prev.dim() * gens, rows);
    std::vector<int> rep_pos(prev.dim() * gens, -1);
    for (std::size_t k = 0; k < qb.representatives.size(); ++k) {
        int col = qb.representatives[k];
        rep_pos[col] = static_cast<int>(k);
        Word w = prev.representatives[col / gens];
        w.push_back(col % gens);
        b.rep_index[w] = static_cast<int>(k);
        b.representatives.push_back(std::move(w));
    }
    for (std::size_t r = 0; r < qb.ech.rows.size(); ++r) {
        const int pivot = qb.ech.pivot_cols[r];
        SparseVec coords;
        for (const auto& [col, q] : qb.ech.rows[r].e) {
            if (col == pivot) continue;
            coords.push(rep_pos[col], -q);
        }
        b.rewrite[{pivot / gens, pivot % gens}] = std::move(coords);
    }
    return b;
}

SparseVec BasisCache::word_coords(int n, const Word& w) { return extend_coords(n, 0, 0, w); }

SparseVec BasisCache::extend_coords(int n, int prefix_deg, int prefix_rep, const Word& suffix) {
    std::lock_guard lock(mu_);
    basis_locked(n, prefix_deg + static_cast<int>(suffix.size()));
    SparseVec cur;
    cur.push(prefix_rep, Rational(1));
    int deg = prefix_deg;
    for (int g : suffix) {
        const DKBasis& from = mem_.at({n, deg});
        const DKBasis& to = mem_.at({n, deg + 1});
        std::map<int, Rational> acc;
        for (const auto& [b, c] : cur.e) {
            Word cand = from.representatives[b];
            cand.push_back(g);
            auto rep_it = to.rep_index.find(cand);
            if (rep_it != to.rep_index.end()) {
                acc[rep_it->second] += c;
            } else {
                for (const auto& [idx, q] : to.rewrite.at({b, g}).e) acc[idx] += c * q;
            }
        }
        SparseVec next;
        for (auto& [idx, q] : acc)
            if (sgn(q) != 0) next.push(idx, q);
        cur = std::move(next);
        ++deg;
        if (cur.empty()) break;
    }
    return cur;
}

NCPoly BasisCache::reduce(const NCPoly& p) {
    NCPoly out(p.n);
    for (const auto& [w, c] : p.terms) {
        SparseVec coords = word_coords(p.n, w);
        std::lock_guard lock(mu_);
        const DKBasis& b = mem_.at({p.n, static_cast<int>(w.size())});
        for (const auto& [idx, q] : coords.e) out.add_term(b.representatives[idx], c * q);
    }
    return out;
}

std::string BasisCache::cache_path(int n, int d) const {
    std::ostringstream relblob;
    for (const auto& r : relators(n, opt_.mode)) relblob << poly_to_json(r).dump();
    return opt_.cache_dir + "/dk_n" + std::to_string(n) + "_d" + std::to_string(d) + "_" +
           relator_mode_name(opt_.mode) + "_" + hex64(fnv1a(relblob.str())) + ".json";
}

namespace {

nlohmann::ordered_json basis_payload(const DKBasis& b, const std::string& mode) {
    nlohmann::ordered_json j;
    j["n"] = b.n;
    j["d"] = b.d;
    j["mode"] = mode;
    j["representatives"] = nlohmann::ordered_json::array();
    for (const auto& w : b.representatives) j["representatives"].push_back(word_to_json(w));
    auto& rw = j["rewrite"] = nlohmann::ordered_json::array();
    for (const auto& [key, coords] : b.rewrite) {
        nlohmann::ordered_json entry;
        entry["prefix"] = key.first;
        auto [i, jj] = gen_pair(key.second);
        entry["gen"] = {i, jj};
        auto& cj = entry["coords"] = nlohmann::ordered_json::array();
        for (const auto& [idx, q] : coords.e) cj.push_back({idx, rational_to_string(q)});
        rw.push_back(std::move(entry));
    }
    return j;
}

}  // namespace

bool BasisCache::load_from_disk(int n, int d, DKBasis& out) const {
    if (opt_.cache_dir.empty()) return false;
    const std::string path = cache_path(n, d);
    std::ifstream in(path);
    if (!in) return false;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception&) {
        throw CacheError("basis cache unreadable (checksum check impossible): " + path);
    }
    nlohmann::json payload = j;
    payload.erase("checksum");
    const std::string expect = j.value("checksum", "");
    const std::string got = hex64(fnv1a(payload.dump()));
    if (expect != got)
        throw CacheError("basis cache checksum mismatch in " + path + ": expected " + expect +
                         ", recomputed " + got);
    out.n = j.at("n").get<int>();
    out.d = j.at("d").get<int>();
    int pos = 0;
    for (const auto& jw : j.at("representatives")) {
        Word w = word_from_json(jw);
        out.rep_index[w] = pos++;
        out.representatives.push_back(std::move(w));
    }
    for (const auto& entry : j.at("rewrite")) {
        SparseVec coords;
        for (const auto& pair : entry.at("coords"))
            coords.push(pair.at(0).get<int>(), rational_from_string(pair.at(1).get<std::string>()));
        int g = gen_index(entry.at("gen").at(0).get<int>(), entry.at("gen").at(1).get<int>());
        out.rewrite[{entry.at("prefix").get<int>(), g}] = std::move(coords);
    }
    return true;
}

void BasisCache::save_to_disk(const DKBasis& b) const {
    if (opt_.cache_dir.empty()) return;
    std::filesystem::create_directories(opt_.cache_dir);
    nlohmann::ordered_json payload = basis_payload(b, relator_mode_name(opt_.mode));
    // Checksum spans the payload without the checksum field itself; the loader
    // re-dumps through nlohmann::json, so hash the same normalized form.
    payload["checksum"] = hex64(fnv1a(nlohmann::json(payload).dump()));
    std::ofstream out(cache_path(b.n, b.d));
    out << payload.dump(1) << "\n";
}

Rational augment(const NCPoly& a) {
    auto it = a.terms.find({});
    return it == a.terms.end() ? Rational(0) : it->second;
}

namespace {

NCPoly product_impl(const NCPoly& a, const NCPoly& b, BasisCache& cache, int max_deg,
                    bool strict) {
    if (a.n != b.n) throw std::invalid_argument("strand count mismatch in product");
    NCPoly ra = cache.reduce(a), rb = cache.reduce(b);
    NCPoly out(a.n);
    for (const auto& [wa, ca] : ra.terms) {
        int deg_a = static_cast<int>(wa.size());
        for (const auto& [wb, cb] : rb.terms) {
            int total = deg_a + static_cast<int>(wb.size());
            if (total > max_deg) {
                if (strict)
                    throw TruncationError("product weight " + std::to_string(total) +
                                          " exceeds truncation " + std::to_string(max_deg));
                continue;
            }
            // wa is a representative; extend it letter by letter.
            const DKBasis& ba = cache.basis(a.n, deg_a);
            int rep = ba.rep_index.at(wa);
            SparseVec coords = cache.extend_coords(a.n, deg_a, rep, wb);
            const DKBasis& bt = cache.basis(a.n, total);
            Rational c = ca * cb;
            for (const auto& [idx, q] : coords.e) out.add_term(bt.representatives[idx], c * q);
        }
    }
    return out;
}

}  // namespace

NCPoly multiply(const NCPoly& a, const NCPoly& b, BasisCache& cache) {
    return product_impl(a, b, cache, cache.max_weight(), true);
}

NCPoly multiply_trunc(const NCPoly& a, const NCPoly& b, BasisCache& cache, int max_deg) {
    return product_impl(a, b, cache, std::min(max_deg, cache.max_weight()), false);
}

NCPoly symmetric_action(const Permutation& s, const NCPoly& a, BasisCache& cache) {
    if (s.size() != a.n) throw std::invalid_argument("permutation size mismatch");
    NCPoly raw(a.n);
    for (const auto& [w, c] : a.terms) {
        Word img;
        img.reserve(w.size());
        for (int g : w) {
            auto [i, j] = gen_pair(g);
            img.push_back(gen_index(s(i), s(j)));
        }
        raw.add_term(img, c);
    }
    return cache.reduce(raw);
}

NCPoly block_embed(const NCPoly& p, const std::vector<std::vector<int>>& blocks, int ambient_n,
                   BasisCache& cache) {
    if (static_cast<int>(blocks.size()) != p.n)
        throw std::invalid_argument("block count must match strand count");
    {
        std::vector<char> seen(ambient_n + 1, 0);
        for (const auto& blk : blocks)
            for (int u : blk) {
                if (u < 1 || u > ambient_n || seen[u])
                    throw std::invalid_argument("blocks must be disjoint labels in range");
                seen[u] = 1;
            }
    }
    NCPoly raw(ambient_n);
    for (const auto& [w, c] : p.terms) {
        // expand the image of the word multiplicatively
        std::map<Word, Rational, DegLex> partial;
        partial[{}] = c;
        for (int g : w) {
            auto [pp, qq] = gen_pair(g);
            std::map<Word, Rational, DegLex> next;
            for (const auto& [wp, cp] : partial)
                for (int u : blocks[pp - 1])
                    for (int v : blocks[qq - 1]) {
                        Word ext = wp;
                        ext.push_back(gen_index(u, v));
                        auto [it, fresh] = next.emplace(ext, cp);
                        if (!fresh) it->second += cp;
                    }
            partial = std::move(next);
        }
        for (const auto& [wi, ci] : partial) raw.add_term(wi, ci);
    }
    return cache.reduce(raw);
}

NCPoly insert(int i, const NCPoly& outer, const NCPoly& inner, BasisCache& cache) {
    const int n = outer.n, m = inner.n;
    if (i < 1 || i > n) throw std::out_of_range("insertion position out of range");
    const int ambient = n + m - 1;

    std::vector<std::vector<int>> outer_blocks;
    for (int k = 1; k <= n; ++k) {
        if (k < i)
            outer_blocks.push_back({k});
        else if (k == i) {
            std::vector<int> bundle;
            for (int r = i; r <= i + m - 1; ++r) bundle.push_back(r);
            outer_blocks.push_back(std::move(bundle));
        } else {
            outer_blocks.push_back({k + m - 1});
        }
    }
    std::vector<std::vector<int>> inner_blocks;
    for (int p = 1; p <= m; ++p) inner_blocks.push_back({i + p - 1});

    NCPoly img_outer = block_embed(outer, outer_blocks, ambient, cache);
    NCPoly img_inner = block_embed(inner, inner_blocks, ambient, cache);
    return multiply(img_outer, img_inner, cache);
}

nlohmann::ordered_json poly_to_json(const NCPoly& p) {
    nlohmann::ordered_json j;
    j["n"] = p.n;
    auto& terms = j["terms"] = nlohmann::ordered_json::array();
    for (const auto& [w, c] : p.terms) {
        nlohmann::ordered_json t;
        t["word"] = word_to_json(w);
        t["coeff"] = rational_to_string(c);
        terms.push_back(std::move(t));
    }
    return j;
}

NCPoly poly_from_json(const nlohmann::json& j) {
    NCPoly p(j.at("n").get<int>());
    for (const auto& t : j.at("terms"))
        p.add_term(word_from_json(t.at("word")), rational_from_string(t.at("coeff").get<std::string>()));
    return p;
}

}  // namespace operad::dk
