#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <unordered_set>
#include <vector>

#include "hypergeom/matrix.hpp"
#include "hypergeom/modular.hpp"
#include "hypergeom/number_theory.hpp"

namespace hgm {

/// |Sp(n, Z/m)| as a factorization, m given factored.
inline PrimePowers sp_order_factored(std::size_t n, const PrimePowers& m) {
    if (n % 2 != 0) throw Error(ErrorCode::UnsupportedDegree, "symplectic dimension must be even");
    const std::uint64_t s = n / 2;
    PrimePowers out;
    for (const auto& [p, a] : m) {
        if (a == 0) continue;
        out[p] += (a - 1) * (2 * s * s + s) + s * s;
        for (std::uint64_t i = 1; i <= s; ++i) {
            Integer q;
            mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), 2 * i);
            multiply_into(out, factor(q - 1).primes);
        }
    }
    return out;
}

inline Integer sp_order(std::size_t n, const PrimePowers& m) { return evaluate(sp_order_factored(n, m)); }

inline Integer sp_order(std::size_t n, std::uint64_t m) { return sp_order(n, factor_u64(m)); }

/// Radical of a factored modulus.
inline PrimePowers radical(const PrimePowers& m) {
    PrimePowers r;
    for (const auto& [p, a] : m)
        if (a > 0) r[p] = 1;
    return r;
}

struct ChainOptions {
    /// Cap on stored orbit points over all levels.
    std::uint64_t max_points = 30'000'000;
    std::uint64_t seed = 1;
    /// Consecutive successful random sifts before the deterministic check.
    unsigned quiet_sifts = 40;
    /// Wall-clock limit shared by every chain built with these options.
    std::optional<std::chrono::steady_clock::time_point> deadline;

    void check_deadline() const {
        if (deadline && std::chrono::steady_clock::now() > *deadline)
            throw Error(ErrorCode::TimeBudgetExceeded, "time budget exhausted");
    }
};

namespace detail {

/// Open-addressing map from 64-bit keys to 32-bit values.
class KeyIndex {
public:
    KeyIndex() { rehash(64); }

    std::size_t size() const noexcept { return size_; }

    std::optional<std::uint32_t> find(std::uint64_t key) const {
        std::size_t i = slot(key);
        while (keys_[i] != kEmpty) {
            if (keys_[i] == key) return vals_[i];
            i = (i + 1) & mask_;
        }
        return std::nullopt;
    }

    /// Inserts if absent; returns false when the key was present.
    bool insert(std::uint64_t key, std::uint32_t val) {
        if (2 * (size_ + 1) > keys_.size()) rehash(keys_.size() * 2);
        std::size_t i = slot(key);
        while (keys_[i] != kEmpty) {
            if (keys_[i] == key) return false;
            i = (i + 1) & mask_;
        }
        keys_[i] = key;
        vals_[i] = val;
        ++size_;
        return true;
    }

private:
    static constexpr std::uint64_t kEmpty = ~0ULL;

    std::size_t slot(std::uint64_t key) const {
        key ^= key >> 33;
        key *= 0xff51afd7ed558ccdULL;
        key ^= key >> 33;
        return static_cast<std::size_t>(key) & mask_;
    }

    void rehash(std::size_t cap) {
        std::vector<std::uint64_t> ok = std::move(keys_);
        std::vector<std::uint32_t> ov = std::move(vals_);
        keys_.assign(cap, kEmpty);
        vals_.assign(cap, 0);
        mask_ = cap - 1;
        size_ = 0;
        for (std::size_t i = 0; i < ok.size(); ++i)
            if (ok[i] != kEmpty) insert(ok[i], ov[i]);
    }

    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> vals_;
    std::size_t mask_ = 0, size_ = 0;
};

}  // namespace detail

/// Stabilizer chain of a matrix group acting on row vectors of (Z/m)^n, with
/// base e_1, ..., e_n. Elements are carried modulo a multiple M of m, so the
/// residues of sifting describe the kernel of reduction from M to m.
class StabilizerChain {
public:
    StabilizerChain(std::vector<ModMatrix> gens, std::uint64_t action_modulus, ChainOptions opt = {},
                    std::optional<Integer> order_bound = std::nullopt)
        : m_(action_modulus), opt_(opt) {
        if (gens.empty()) throw Error(ErrorCode::InvalidArgument, "no generators");
        n_ = gens.front().dim();
        big_m_ = gens.front().modulus();
        if (big_m_ % m_ != 0) throw Error(ErrorCode::InvalidArgument, "action modulus must divide the element modulus");
        // m^n must fit in a 64-bit key.
        unsigned __int128 span = 1;
        for (std::size_t i = 0; i < n_; ++i) {
            span *= m_;
            if (span >= (static_cast<unsigned __int128>(1) << 63))
                throw Error(ErrorCode::MemoryBudgetExceeded, "vector space too large for orbit keys");
        }
        for (auto& g : gens) {
            if (g.dim() != n_ || g.modulus() != big_m_) throw Error(ErrorCode::InvalidArgument, "generator shape mismatch");
            if (!g.preserves_standard_form()) throw Error(ErrorCode::NotSymplectic, "generator does not preserve J");
        }
        originals_ = gens;
        levels_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            std::vector<std::uint32_t> e(n_, 0);
            e[i] = static_cast<std::uint32_t>(1 % m_);
            levels_[i].index.insert(encode(e.data()), 0);
            levels_[i].points.push_back(encode(e.data()));
            levels_[i].parent.push_back(0);
            levels_[i].gen.push_back(0);
        }
        bound_ = order_bound ? *order_bound : sp_order(n_, m_);
        build();
    }

    std::size_t dim() const noexcept { return n_; }
    std::uint64_t action_modulus() const noexcept { return m_; }
    std::uint64_t element_modulus() const noexcept { return big_m_; }

    Integer order() const {
        Integer o = 1;
        for (const auto& l : levels_) o *= static_cast<unsigned long>(l.points.size());
        return o;
    }

    PrimePowers order_factored() const {
        PrimePowers f;
        for (const auto& l : levels_) multiply_into(f, factor_u64(l.points.size()));
        return f;
    }

    std::vector<std::size_t> orbit_sizes() const {
        std::vector<std::size_t> out;
        for (const auto& l : levels_) out.push_back(l.points.size());
        return out;
    }

    std::uint64_t stored_points() const noexcept { return total_points_; }

    struct SiftResult {
        ModMatrix residue;
        std::size_t level = 0;  ///< first level where sifting failed; n when it went through
    };

    SiftResult sift(ModMatrix g, std::size_t from = 0) const {
        std::vector<std::uint32_t> v(n_);
        for (std::size_t i = from; i < n_; ++i) {
            row_mod_m(g, i, v.data());
            auto idx = levels_[i].index.find(encode(v.data()));
            if (!idx) return {g, i};
            strip(g, i, *idx);
        }
        return {g, n_};
    }

    /// Membership of the reduction mod m.
    bool contains(const ModMatrix& g) const {
        if (g.modulus() != big_m_) throw Error(ErrorCode::InvalidArgument, "element modulus does not match the chain");
        return sift(g).level == n_;
    }

    /// Streams kernel elements of the reduction M -> m whose normal closure is
    /// the whole kernel: sifting residues of the original generators, then of
    /// all Schreier generators. Identity residues are skipped.
    void for_each_kernel_residue(const std::function<void(const ModMatrix&)>& f) const {
        if (big_m_ == m_) return;
        for (const auto& k : kernel_gens_) f(k);
        std::vector<std::uint32_t> v(n_), w(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            const Level& L = levels_[i];
            for (std::size_t pi = 0; pi < L.points.size(); ++pi) {
                if ((pi & 0xfff) == 0) opt_.check_deadline();
                decode(L.points[pi], v.data());
                const ModMatrix u = transversal(i, static_cast<std::uint32_t>(pi));
                for (std::size_t si : L.gens) {
                    strong_[si].act(v.data(), w.data(), m_);
                    const std::uint32_t qi = *L.index.find(encode(w.data()));
                    ModMatrix y = u * strong_[si];
                    strip(y, i, qi);
                    SiftResult r = sift(y, i + 1);
                    if (r.level != n_) throw Error(ErrorCode::Internal, "stabilizer chain is incomplete");
                    if (!r.residue.is_identity()) f(r.residue);
                }
            }
        }
    }

    const std::vector<ModMatrix>& strong_generators() const noexcept { return strong_; }

private:
    struct Level {
        detail::KeyIndex index;
        std::vector<std::uint64_t> points;
        std::vector<std::uint32_t> parent;
        std::vector<std::uint16_t> gen;  ///< strong generator index mapping parent to point
        std::vector<std::size_t> gens;   ///< strong generators acting at this level
        std::vector<std::uint16_t> checked;  ///< per point: Schreier generators already sifted
    };

    std::uint64_t encode(const std::uint32_t* v) const {
        std::uint64_t k = 0;
        for (std::size_t i = n_; i-- > 0;) k = k * m_ + v[i];
        return k;
    }

    void decode(std::uint64_t k, std::uint32_t* v) const {
        for (std::size_t i = 0; i < n_; ++i) {
            v[i] = static_cast<std::uint32_t>(k % m_);
            k /= m_;
        }
    }

    void row_mod_m(const ModMatrix& g, std::size_t i, std::uint32_t* v) const {
        for (std::size_t j = 0; j < n_; ++j) v[j] = static_cast<std::uint32_t>(g(i, j) % m_);
    }

    /// Number of leading base points fixed modulo m.
    std::size_t depth_of(const ModMatrix& g) const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (g(i, j) % m_ != (i == j ? 1 % m_ : 0)) return i;
        return n_;
    }

    /// g <- g * u_beta^{-1} where beta is point `idx` of level i.
    void strip(ModMatrix& g, std::size_t i, std::uint32_t idx) const {
        const Level& L = levels_[i];
        while (idx != 0) {
            g = g * strong_inv_[L.gen[idx]];
            idx = L.parent[idx];
        }
    }

    ModMatrix transversal(std::size_t i, std::uint32_t idx) const {
        const Level& L = levels_[i];
        std::vector<std::uint16_t> path;
        while (idx != 0) {
            path.push_back(L.gen[idx]);
            idx = L.parent[idx];
        }
        ModMatrix u = ModMatrix::identity(n_, big_m_);
        for (std::size_t k = path.size(); k-- > 0;) u = u * strong_[path[k]];
        return u;
    }

    void add_strong(const ModMatrix& g, std::size_t depth) {
        if (strong_.size() >= 65535) throw Error(ErrorCode::MemoryBudgetExceeded, "too many strong generators");
        strong_.push_back(g);
        strong_inv_.push_back(g.symplectic_inverse());
        const std::size_t si = strong_.size() - 1;
        for (std::size_t i = 0; i <= depth; ++i) {
            levels_[i].gens.push_back(si);
            extend(i, si);
        }
    }

    /// Closes the orbit of level i after generator si was added.
    void extend(std::size_t i, std::size_t si) {
        Level& L = levels_[i];
        std::vector<std::uint32_t> v(n_), w(n_);
        const std::size_t old = L.points.size();
        for (std::size_t pi = 0; pi < old; ++pi) {
            decode(L.points[pi], v.data());
            visit(L, static_cast<std::uint32_t>(pi), si, v.data(), w.data());
        }
        for (std::size_t pi = old; pi < L.points.size(); ++pi) {
            decode(L.points[pi], v.data());
            for (std::size_t s : L.gens) visit(L, static_cast<std::uint32_t>(pi), s, v.data(), w.data());
        }
    }

    void visit(Level& L, std::uint32_t from, std::size_t s, const std::uint32_t* v, std::uint32_t* w) {
        strong_[s].act(v, w, m_);
        const std::uint64_t k = encode(w);
        if (L.index.find(k)) return;
        if ((total_points_ & 0xffff) == 0) opt_.check_deadline();
        if (++total_points_ > opt_.max_points)
            throw Error(ErrorCode::MemoryBudgetExceeded,
                        "orbit storage exceeded " + std::to_string(opt_.max_points) + " points (modulus " + std::to_string(m_) + ")");
        L.index.insert(k, static_cast<std::uint32_t>(L.points.size()));
        L.points.push_back(k);
        L.parent.push_back(from);
        L.gen.push_back(static_cast<std::uint16_t>(s));
    }

    ModMatrix random_element(std::mt19937_64& rng) {
        std::uniform_int_distribution<std::size_t> pick(0, pr_slots_.size() - 1);
        std::size_t a = pick(rng), b = pick(rng);
        while (b == a) b = pick(rng);
        if (rng() & 1) pr_slots_[a] = pr_slots_[a] * pr_slots_[b];
        else pr_slots_[a] = pr_slots_[a] * pr_slots_[b].symplectic_inverse();
        pr_acc_ = pr_acc_ * pr_slots_[a];
        return pr_acc_;
    }

    /// Random Schreier-Sims from product-replacement elements, then a
    /// deterministic completion over the strong generators, then a check that
    /// every original generator sifts. Originals are not strong generators by
    /// default, which keeps the Schreier generator count small.
    void build() {
        std::mt19937_64 rng(opt_.seed);
        for (const auto& g : originals_) {
            const std::size_t d = depth_of(g);
            if (d < n_) {
                add_strong(g, d);
                break;
            }
        }
        pr_slots_ = originals_;
        while (pr_slots_.size() < 10) pr_slots_.push_back(originals_[pr_slots_.size() % originals_.size()]);
        pr_acc_ = ModMatrix::identity(n_, big_m_);
        for (int i = 0; i < 60; ++i) random_element(rng);
        unsigned quiet = 0;
        while (quiet < opt_.quiet_sifts && order() < bound_) {
            SiftResult r = sift(random_element(rng));
            if (r.level == n_) {
                ++quiet;
                continue;
            }
            quiet = 0;
            add_strong(r.residue, depth_of(r.residue));
        }
        for (;;) {
            if (order() < bound_) verify();
            bool grown = false;
            for (const auto& g : originals_) {
                SiftResult r = sift(g);
                if (r.level == n_) continue;
                add_strong(r.residue, depth_of(r.residue));
                grown = true;
            }
            if (!grown) break;
        }
        if (big_m_ == m_) return;
        std::unordered_set<ModMatrix, ModMatrixHash> seen;
        for (const auto& g : originals_) {
            SiftResult r = sift(g);
            if (!r.residue.is_identity() && seen.insert(r.residue).second) kernel_gens_.push_back(r.residue);
        }
    }

    /// Deterministic Schreier-Sims: every Schreier generator must sift.
    /// Pairs (point, generator) already sifted are not revisited; the chain
    /// only grows, so their sifts stay successful.
    void verify() {
        std::vector<std::uint32_t> v(n_), w(n_);
        std::size_t i = n_;
        while (i-- > 0) {
            bool restarted = false;
            Level& L = levels_[i];
            for (std::size_t pi = 0; pi < L.points.size() && !restarted; ++pi) {
                if (L.checked.size() < L.points.size()) L.checked.resize(L.points.size(), 0);
                if (L.checked[pi] >= L.gens.size()) continue;
                if ((pi & 0xfff) == 0) opt_.check_deadline();
                decode(L.points[pi], v.data());
                const ModMatrix u = transversal(i, static_cast<std::uint32_t>(pi));
                for (std::size_t gi = L.checked[pi]; gi < L.gens.size(); ++gi) {
                    const std::size_t si = L.gens[gi];
                    strong_[si].act(v.data(), w.data(), m_);
                    const std::uint32_t qi = *L.index.find(encode(w.data()));
                    ModMatrix y = u * strong_[si];
                    strip(y, i, qi);
                    SiftResult r = sift(y, i + 1);
                    if (r.level == n_) {
                        L.checked[pi] = static_cast<std::uint16_t>(gi + 1);
                        continue;
                    }
                    const std::size_t d = depth_of(r.residue);
                    add_strong(r.residue, d);
                    i = d + 1;  // resume at the deepest level touched
                    restarted = true;
                    break;
                }
                if (order() == bound_) return;
            }
        }
    }

    std::size_t n_ = 0;
    std::uint64_t m_ = 1, big_m_ = 1;
    ChainOptions opt_;
    Integer bound_;
    std::vector<ModMatrix> originals_, strong_, strong_inv_, kernel_gens_;
    std::vector<Level> levels_;
    std::uint64_t total_points_ = 0;
    std::vector<ModMatrix> pr_slots_;
    ModMatrix pr_acc_;
};

/// Polycyclic generating sequence of a subgroup of ker(Sp(n,Z/p^a) -> Sp(n,Z/p)),
/// layered by the congruence filtration Gamma(p^k)/Gamma(p^{k+1}) ~ F_p^{n^2}.
class CongruencePGroup {
public:
    CongruencePGroup(std::size_t n, std::uint64_t p, unsigned a) : n_(n), p_(p), a_(a), q_(ipow(p, a)) {
        if (a < 1) throw Error(ErrorCode::InvalidArgument, "exponent must be positive");
        layers_.resize(a);
    }

    std::uint64_t prime() const noexcept { return p_; }
    unsigned exponent() const noexcept { return a_; }

    /// Normal closure under `conjugators` of the group generated by `gens`.
    void close(const std::vector<ModMatrix>& gens, const std::vector<ModMatrix>& conjugators) {
        conj_ = conjugators;
        for (auto& c : conj_) c = c.reduced(q_);
        for (const auto& g : gens) queue_.push_back(g.reduced(q_));
        drain();
    }

    /// Enlarges the normal closure by one more element.
    void add(const ModMatrix& g) {
        queue_.push_back(g.reduced(q_));
        drain();
    }

    bool contains(const ModMatrix& x) const {
        ModMatrix y = x.reduced(q_);
        for (;;) {
            auto [k, vec] = leading(y);
            if (k == 0) return true;
            if (!reduce_layer(y, k, vec)) return false;
        }
    }

    /// Dimension over F_p of layer k (1 <= k < a).
    std::size_t layer_dim(unsigned k) const { return k < layers_.size() ? layers_[k].elems.size() : 0; }

    std::uint64_t log_order() const {
        std::uint64_t e = 0;
        for (const auto& l : layers_) e += l.elems.size();
        return e;
    }

    std::size_t full_layer_dim() const { return n_ * (n_ + 1) / 2; }

private:
    struct Layer {
        std::vector<ModMatrix> elems, inverses;
        std::vector<std::vector<std::uint32_t>> vecs;
        std::vector<std::size_t> pivots;
    };

    /// Depth k of x in the filtration and its leading vector; k = 0 for the identity.
    std::pair<unsigned, std::vector<std::uint32_t>> leading(const ModMatrix& x) const {
        for (unsigned k = 1; k < a_; ++k) {
            const std::uint64_t pk = ipow(p_, k), pk1 = pk * p_;
            std::vector<std::uint32_t> vec(n_ * n_);
            bool nonzero = false;
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = 0; j < n_; ++j) {
                    std::uint64_t e = (x(i, j) + q_ - (i == j ? 1 : 0)) % q_;
                    if (e % pk != 0) throw Error(ErrorCode::Internal, "element is not in the congruence kernel");
                    std::uint64_t c = (e % pk1) / pk;
                    vec[i * n_ + j] = static_cast<std::uint32_t>(c);
                    if (c) nonzero = true;
                }
            if (nonzero) return {k, vec};
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (x(i, j) % q_ != (i == j ? 1 : 0)) throw Error(ErrorCode::Internal, "element is not in the congruence kernel");
        return {0, {}};
    }

    /// Divides out layer-k basis elements; false when the leading vector is outside their span.
    bool reduce_layer(ModMatrix& x, unsigned k, std::vector<std::uint32_t>& vec) const {
        const Layer& L = layers_[k];
        for (std::size_t b = 0; b < L.elems.size(); ++b) {
            const std::uint64_t c = vec[L.pivots[b]];
            if (c == 0) continue;
            x = x * L.inverses[b].power(c);
            for (std::size_t t = 0; t < vec.size(); ++t) vec[t] = static_cast<std::uint32_t>((vec[t] + (p_ - c) * L.vecs[b][t]) % p_);
        }
        return std::all_of(vec.begin(), vec.end(), [](std::uint32_t c) { return c == 0; });
    }

    std::uint64_t inv_mod_p(std::uint64_t c) const {
        for (std::uint64_t t = 1; t < p_; ++t)
            if (c * t % p_ == 1) return t;
        throw Error(ErrorCode::Internal, "non-invertible coefficient");
    }

    void drain() {
        while (!queue_.empty()) {
            ModMatrix x = queue_.back();
            queue_.pop_back();
            for (;;) {
                auto [k, vec] = leading(x);
                if (k == 0) break;
                if (reduce_layer(x, k, vec)) continue;
                auto nz = std::find_if(vec.begin(), vec.end(), [](std::uint32_t c) { return c != 0; });
                const std::size_t piv = static_cast<std::size_t>(nz - vec.begin());
                const std::uint64_t scale = inv_mod_p(*nz);
                x = x.power(scale);
                for (auto& c : vec) c = static_cast<std::uint32_t>(c * scale % p_);
                Layer& L = layers_[k];
                L.elems.push_back(x);
                L.inverses.push_back(x.symplectic_inverse());
                L.vecs.push_back(vec);
                L.pivots.push_back(piv);
                queue_.push_back(x.power(p_));
                const ModMatrix xi = L.inverses.back();
                for (const auto& layer : layers_)
                    for (std::size_t b = 0; b < layer.elems.size(); ++b)
                        queue_.push_back(x * layer.elems[b] * xi * layer.inverses[b]);
                for (const auto& g : conj_) queue_.push_back(g * x * g.symplectic_inverse());
                break;
            }
        }
    }

    std::size_t n_;
    std::uint64_t p_;
    unsigned a_;
    std::uint64_t q_;
    std::vector<Layer> layers_;
    std::vector<ModMatrix> queue_, conj_;
};

/// Image of an integral symplectic group in Sp(n, Z/M): a stabilizer chain
/// over Z/rad(M) carrying elements mod M, and, for every p with p^2 | M, the
/// p-part of the reduction kernel as a layered p-group. The kernel is
/// nilpotent, so it is the direct product of these parts.
class CongruenceImage {
public:
    CongruenceImage(const std::vector<IntMatrix>& gens, const PrimePowers& modulus, ChainOptions opt = {})
        : modulus_(modulus) {
        if (gens.empty()) throw Error(ErrorCode::InvalidArgument, "no generators");
        n_ = gens.front().rows();
        const Integer M = evaluate(modulus), R = evaluate(radical(modulus));
        if (M >= Integer(1) << 32) throw Error(ErrorCode::MemoryBudgetExceeded, "modulus " + M.get_str() + " exceeds 32 bits");
        m_ = to_u64(M);
        r_ = to_u64(R);
        if (m_ == 1) return;
        for (const auto& g : gens) reduced_.push_back(ModMatrix::reduce(g, m_));
        chain_.emplace(reduced_, r_, opt, sp_order(n_, radical(modulus)));
        for (const auto& [p, a] : modulus) {
            if (a < 2) continue;
            CongruencePGroup pg(n_, to_u64(p), static_cast<unsigned>(a));
            pg.close({}, reduced_);
            pgroups_.push_back(std::move(pg));
        }
        if (pgroups_.empty()) return;
        chain_->for_each_kernel_residue([&](const ModMatrix& r) {
            for (auto& pg : pgroups_)
                if (!pg.contains(r)) pg.add(r);
        });
    }

    std::uint64_t modulus() const noexcept { return m_; }
    const PrimePowers& modulus_factored() const noexcept { return modulus_; }

    PrimePowers order_factored() const {
        if (m_ == 1) return {};
        PrimePowers f = chain_->order_factored();
        for (const auto& pg : pgroups_) f[from_u64(pg.prime())] += pg.log_order();
        return f;
    }

    Integer order() const { return evaluate(order_factored()); }

    /// |Sp(n, Z/M) : image|, factored.
    PrimePowers index_factored() const { return divide(sp_order_factored(n_, modulus_), order_factored()); }

    bool contains(const IntMatrix& x) const { return m_ == 1 || contains(ModMatrix::reduce(x, m_)); }

    bool contains(const ModMatrix& x) const {
        if (m_ == 1) return true;
        auto r = chain_->sift(x.reduced(m_));
        if (r.level != n_) return false;
        for (const auto& pg : pgroups_)
            if (!pg.contains(r.residue)) return false;
        return true;
    }

    const StabilizerChain* chain() const { return chain_ ? &*chain_ : nullptr; }

    const CongruencePGroup* pgroup(std::uint64_t p) const {
        for (const auto& pg : pgroups_)
            if (pg.prime() == p) return &pg;
        return nullptr;
    }

private:
    PrimePowers modulus_;
    std::size_t n_ = 0;
    std::uint64_t m_ = 1, r_ = 1;
    std::vector<ModMatrix> reduced_;
    std::optional<StabilizerChain> chain_;
    std::vector<CongruencePGroup> pgroups_;
};

struct LevelOptions {
    unsigned max_exponent = 8;
    ChainOptions chain;
};

struct LevelExponent {
    std::uint64_t p = 0;
    unsigned e = 0;
    bool surjective_mod_p = false;
    unsigned checked_to = 0;              ///< layers 1..checked_to were computed
    std::vector<std::size_t> layer_dims;  ///< index k-1 holds the dimension of layer k
};

/// Smallest e with Gamma(p^e) inside the closure of the group: the image mod p
/// is everything when e = 0, and every congruence layer from max(e,1) on is full.
/// Fullness is confirmed on one extra layer; layer k full implies layer k+1
/// full except for p = 2, k = 1, which the extra layer covers.
inline LevelExponent level_exponent(const std::vector<IntMatrix>& gens, std::uint64_t p, const LevelOptions& opt = {}) {
    const std::size_t n = gens.front().rows();
    LevelExponent out;
    out.p = p;
    const Integer spp = sp_order(n, p);
    if (p >= 5) {
        std::vector<ModMatrix> red;
        for (const auto& g : gens) red.push_back(ModMatrix::reduce(g, p));
        StabilizerChain ch(red, p, opt.chain, spp);
        out.surjective_mod_p = ch.order() == spp;
        if (out.surjective_mod_p) return out;
    }
    const std::size_t full = n * (n + 1) / 2;
    for (unsigned J = 3; J <= opt.max_exponent + 2; ++J) {
        CongruenceImage img(gens, PrimePowers{{from_u64(p), J}}, opt.chain);
        out.surjective_mod_p = img.chain()->order() == spp;
        out.layer_dims.clear();
        for (unsigned k = 1; k < J; ++k) out.layer_dims.push_back(img.pgroup(p)->layer_dim(k));
        out.checked_to = J - 1;
        for (unsigned e = 0; e + 2 <= J; ++e) {
            if (e == 0 && !out.surjective_mod_p) continue;
            const unsigned k0 = std::max(e, 1u);
            if (k0 + 1 > J - 1) break;
            bool ok = true;
            for (unsigned k = k0; k < J && ok; ++k) ok = out.layer_dims[k - 1] == full;
            if (ok) {
                out.e = e;
                return out;
            }
        }
    }
    throw Error(ErrorCode::LevelSearchExceeded,
                "level exponent at p=" + std::to_string(p) + " exceeds " + std::to_string(opt.max_exponent));
}

struct ClosureReport {
    PrimePowers level;
    PrimePowers index;
    std::set<Integer> Pi;
    std::map<std::uint64_t, unsigned> exponents;
    PrimePowers image_order;
};

/// Level and index of the arithmetic closure of an integral dense group.
inline ClosureReport closure_level_and_index(const std::vector<IntMatrix>& gens, const std::set<Integer>& Pi,
                                             const LevelOptions& opt = {}) {
    ClosureReport rep;
    rep.Pi = Pi;
    std::set<Integer> primes = Pi;
    primes.insert(2);
    primes.insert(3);
    for (const auto& p : primes) {
        LevelExponent le = level_exponent(gens, to_u64(p), opt);
        rep.exponents[le.p] = le.e;
        if (le.e > 0) rep.level[p] = le.e;
    }
    CongruenceImage img(gens, rep.level, opt.chain);
    rep.image_order = img.order_factored();
    rep.index = img.index_factored();
    return rep;
}

}  // namespace hgm
