#pragma once

// Congruence subgroups Gamma0(N), Gamma1(N), Gamma(N): membership, right
// coset tables, cusp data and a Reidemeister-Schreier presentation.

#include "modgroup.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace maasslab {

namespace detail {

inline long mod_long(const Integer& x, long n) {
    long r = static_cast<long>(x % n);
    return r < 0 ? r + n : r;
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
inline std::tuple<Integer, Integer, Integer> ext_gcd(Integer a, Integer b) {
    Integer x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Integer q = a / b;
        Integer r = a - q * b;
        a = std::move(b);
        b = std::move(r);
        Integer nx = x0 - q * x1;
        x0 = std::move(x1);
        x1 = std::move(nx);
        Integer ny = y0 - q * y1;
        y0 = std::move(y1);
        y1 = std::move(ny);
    }
    if (a < 0) return {-a, -x0, -y0};
    return {a, x0, y0};
}

/// A matrix in the modular group whose first column is (p, q); gcd(p,q) = 1.
inline GroupElement complete_column(const Integer& p, const Integer& q) {
    auto [g, x, y] = ext_gcd(p, q);
    if (g != 1) throw std::invalid_argument("complete_column: entries are not coprime");
    // p*x + q*y = 1  =>  [[p, -y], [q, x]]
    return GroupElement(p, -y, q, x);
}

} // namespace detail

enum class SubgroupKind { Gamma0, Gamma1, GammaFull };

inline std::string kind_name(SubgroupKind k) {
    switch (k) {
    case SubgroupKind::Gamma0: return "gamma0";
    case SubgroupKind::Gamma1: return "gamma1";
    case SubgroupKind::GammaFull: return "gamma";
    }
    return "?";
}

inline SubgroupKind parse_kind(const std::string& s) {
    if (s == "gamma0" || s == "Gamma0") return SubgroupKind::Gamma0;
    if (s == "gamma1" || s == "Gamma1") return SubgroupKind::Gamma1;
    if (s == "gamma" || s == "Gamma" || s == "full" || s == "principal") return SubgroupKind::GammaFull;
    throw std::invalid_argument("unknown subgroup kind '" + s + "' (expected gamma0, gamma1 or gamma)");
}

class CongruenceSubgroup {
public:
    CongruenceSubgroup(SubgroupKind kind, long level) : kind_(kind), level_(level) {
        if (level < 1) throw std::invalid_argument("CongruenceSubgroup: level must be positive");
        if (level > 10000) throw std::invalid_argument("CongruenceSubgroup: level too large");
    }

    static CongruenceSubgroup gamma0(long n) { return {SubgroupKind::Gamma0, n}; }
    static CongruenceSubgroup gamma1(long n) { return {SubgroupKind::Gamma1, n}; }
    static CongruenceSubgroup principal(long n) { return {SubgroupKind::GammaFull, n}; }
    static CongruenceSubgroup full() { return {SubgroupKind::Gamma0, 1}; }

    SubgroupKind kind() const { return kind_; }
    long level() const { return level_; }
    bool is_full_group() const { return level_ == 1; }

    std::string name() const {
        switch (kind_) {
        case SubgroupKind::Gamma0: return "Gamma0(" + std::to_string(level_) + ")";
        case SubgroupKind::Gamma1: return "Gamma1(" + std::to_string(level_) + ")";
        case SubgroupKind::GammaFull: return "Gamma(" + std::to_string(level_) + ")";
        }
        return "?";
    }

    bool contains(const GroupElement& g) const {
        const long n = level_;
        if (n == 1) return true;
        const long c = detail::mod_long(g.c(), n);
        if (c != 0) return false;
        if (kind_ == SubgroupKind::Gamma0) return true;
        const long a = detail::mod_long(g.a(), n);
        const long d = detail::mod_long(g.d(), n);
        if (a != 1 % n || d != 1 % n) return false;
        if (kind_ == SubgroupKind::Gamma1) return true;
        return detail::mod_long(g.b(), n) == 0;
    }

    bool contains_minus_identity() const { return contains(-GroupElement::identity()); }

    /// Index in the full modular group (as a matrix group).
    long index() const {
        long n = level_, m = level_;
        long num = 1, den = 1;  // running product of the local factors
        std::vector<long> primes;
        for (long p = 2; p * p <= m; ++p) {
            if (m % p == 0) {
                primes.push_back(p);
                while (m % p == 0) m /= p;
            }
        }
        if (m > 1) primes.push_back(m);
        long base = n;
        if (kind_ == SubgroupKind::Gamma1) base = n * n;
        if (kind_ == SubgroupKind::GammaFull) base = n * n * n;
        for (long p : primes) {
            if (kind_ == SubgroupKind::Gamma0) {
                num *= p + 1;
                den *= p;
            } else {
                num *= p * p - 1;
                den *= p * p;
            }
        }
        return base / den * num;
    }

    /// Key identifying the right coset Gamma*g.
    std::array<long, 4> coset_key(const GroupElement& g) const {
        const long n = level_;
        if (n == 1) return {0, 0, 0, 0};
        const long c = detail::mod_long(g.c(), n);
        const long d = detail::mod_long(g.d(), n);
        switch (kind_) {
        case SubgroupKind::Gamma0: {
            // point (c:d) of P^1(Z/N), canonicalised by the smallest unit multiple
            std::array<long, 4> best{n, n, 0, 0};
            for (long u = 1; u < n; ++u) {
                if (std::gcd(u, n) != 1) continue;
                std::array<long, 4> cand{(u * c) % n, (u * d) % n, 0, 0};
                if (cand < best) best = cand;
            }
            return best;
        }
        case SubgroupKind::Gamma1:
            return {c, d, 0, 0};
        case SubgroupKind::GammaFull:
            return {detail::mod_long(g.a(), n), detail::mod_long(g.b(), n), c, d};
        }
        return {};
    }

    friend bool operator==(const CongruenceSubgroup& x, const CongruenceSubgroup& y) {
        if (x.level_ == 1 && y.level_ == 1) return true;
        return x.kind_ == y.kind_ && x.level_ == y.level_;
    }

    /// True when every element of this group lies in `other`.
    bool is_subgroup_of(const CongruenceSubgroup& other) const;

private:
    SubgroupKind kind_;
    long level_;
};

struct KeyHash {
    std::size_t operator()(const std::array<long, 4>& k) const {
        std::size_t h = 0;
        for (long v : k) h = h * 1000003u + static_cast<std::size_t>(v);
        return h;
    }
};

/// Right coset representatives g_1 = identity, g_2, ..., g_mu.
class CosetTable {
public:
    CosetTable(CongruenceSubgroup group, std::vector<GroupElement> reps)
        : group_(group), reps_(std::move(reps)) {
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            auto [it, fresh] = lookup_.emplace(group_.coset_key(reps_[i]), i);
            if (!fresh) throw std::logic_error("CosetTable: duplicate coset representative");
        }
    }

    const CongruenceSubgroup& group() const { return group_; }
    const std::vector<GroupElement>& reps() const { return reps_; }
    const GroupElement& rep(std::size_t i) const { return reps_.at(i); }
    std::size_t index() const { return reps_.size(); }

    /// Position of the coset of g, without building the witness.
    std::size_t position(const GroupElement& g) const {
        auto it = lookup_.find(group_.coset_key(g));
        if (it == lookup_.end()) throw std::logic_error("CosetTable: element outside every coset");
        return it->second;
    }

private:
    CongruenceSubgroup group_;
    std::vector<GroupElement> reps_;
    std::unordered_map<std::array<long, 4>, std::size_t, KeyHash> lookup_;
};

namespace detail {

/// Breadth-first enumeration of the cosets under right multiplication by S
/// and T; returns reps whose words form a prefix-closed tree.
struct SchreierTree {
    std::vector<GroupElement> reps;
    std::vector<std::array<std::size_t, 2>> act;  // act[i][x]: coset of reps[i]*x, x=0 (S), 1 (T)
    std::vector<std::optional<std::pair<std::size_t, int>>> parent;
};

inline SchreierTree schreier_tree(const CongruenceSubgroup& G) {
    const auto [S, T] = generators();
    const GroupElement gens[2] = {S, T};
    SchreierTree tree;
    std::unordered_map<std::array<long, 4>, std::size_t, KeyHash> seen;
    tree.reps.push_back(GroupElement::identity());
    tree.parent.emplace_back(std::nullopt);
    seen.emplace(G.coset_key(tree.reps[0]), 0);
    for (std::size_t i = 0; i < tree.reps.size(); ++i) {
        std::array<std::size_t, 2> row{};
        for (int x = 0; x < 2; ++x) {
            GroupElement h = tree.reps[i] * gens[x];
            auto key = G.coset_key(h);
            auto it = seen.find(key);
            if (it == seen.end()) {
                it = seen.emplace(key, tree.reps.size()).first;
                tree.reps.push_back(std::move(h));
                tree.parent.emplace_back(std::make_pair(i, x));
            }
            row[static_cast<std::size_t>(x)] = it->second;
        }
        tree.act.push_back(row);
    }
    return tree;
}

} // namespace detail

inline CosetTable coset_reps(const CongruenceSubgroup& G) {
    if (G.kind() != SubgroupKind::Gamma0 || G.level() == 1) {
        return CosetTable(G, detail::schreier_tree(G).reps);
    }
    // Gamma0(N): one matrix per point (c:d) of the projective line over Z/N.
    const long n = G.level();
    std::map<std::array<long, 4>, GroupElement> points;
    for (long c = 0; c < n; ++c) {
        for (long d = 0; d < n; ++d) {
            if (std::gcd(std::gcd(c, d), n) != 1) continue;
            GroupElement probe;
            if (c == 0) {
                probe = GroupElement::identity();
            } else {
                Integer dd = d;
                while (boost::multiprecision::gcd(Integer(c), dd) != 1) dd += n;
                // dd*x + c*y = 1  =>  [[x, -y], [c, dd]]
                auto [g, x, y] = detail::ext_gcd(dd, Integer(c));
                probe = GroupElement(x, -y, Integer(c), dd);
            }
            auto key = G.coset_key(probe);
            points.emplace(key, probe);
        }
    }
    std::vector<GroupElement> reps;
    reps.push_back(GroupElement::identity());
    const auto id_key = G.coset_key(reps[0]);
    for (auto& [key, g] : points)
        if (key != id_key) reps.push_back(g);
    return CosetTable(G, std::move(reps));
}

/// Returns (j, gamma) with g = gamma * g_j and gamma in the group.
inline std::pair<std::size_t, GroupElement> coset_index_of(const CosetTable& table, const CongruenceSubgroup& G,
                                                         const GroupElement& g) {
    if (!(table.group() == G)) throw std::invalid_argument("coset_index_of: table built for a different group");
    std::size_t j = table.position(g);
    GroupElement gamma = g * table.rep(j).inverse();
    if (!G.contains(gamma)) throw std::logic_error("coset_index_of: coset table is inconsistent");
    return {j, std::move(gamma)};
}

inline bool CongruenceSubgroup::is_subgroup_of(const CongruenceSubgroup& other) const {
    if (other.is_full_group()) return true;
    // contained iff every Schreier generator is
    auto tree = detail::schreier_tree(*this);
    const auto [S, T] = generators();
    const GroupElement gens[2] = {S, T};
    for (std::size_t i = 0; i < tree.reps.size(); ++i) {
        for (int x = 0; x < 2; ++x) {
            GroupElement s = tree.reps[i] * gens[x] * tree.reps[tree.act[i][static_cast<std::size_t>(x)]].inverse();
            if (!other.contains(s)) return false;
        }
    }
    return true;
}

struct CuspData {
    BoundaryPoint q;
    long width;
    GroupElement scaling;     // g_q with g_q(inf) = q
    GroupElement stabilizer;  // g_q T^width g_q^{-1}
};

/// Cusp classes, infinity first, then representatives ordered by
/// (denominator, numerator) with numerators in [0, denominator * level).
/// Widths are the least n >= 1 with g_q T^n g_q^{-1} in the group; when -1 is
/// not in the group this is the width of the regular stabilizer generator.
inline std::vector<CuspData> cusps(const CongruenceSubgroup& G) {
    const CosetTable table = coset_reps(G);
    const std::size_t mu = table.index();
    const auto [S, T] = generators();
    const GroupElement minus = -GroupElement::identity();

    // orbits of <T, -1> acting on cosets from the right
    std::vector<long> orbit(mu, -1);
    long n_orbits = 0;
    for (std::size_t i = 0; i < mu; ++i) {
        if (orbit[i] >= 0) continue;
        std::deque<std::size_t> todo{i};
        orbit[i] = n_orbits;
        while (!todo.empty()) {
            std::size_t j = todo.front();
            todo.pop_front();
            for (const GroupElement* x : {&T, &minus}) {
                std::size_t k = table.position(table.rep(j) * *x);
                if (orbit[k] < 0) {
                    orbit[k] = n_orbits;
                    todo.push_back(k);
                }
            }
        }
        ++n_orbits;
    }

    auto make = [&](const BoundaryPoint& q, const GroupElement& gq) {
        long w = 1;
        GroupElement Tw = T;
        const GroupElement gq_inv = gq.inverse();
        while (!G.contains(gq * Tw * gq_inv)) {
            ++w;
            Tw *= T;
            if (w > static_cast<long>(mu) + 1) throw std::logic_error("cusps: width search exceeded the index");
        }
        return CuspData{q, w, gq, gq * Tw * gq_inv};
    };

    std::vector<CuspData> out;
    std::vector<bool> found(static_cast<std::size_t>(n_orbits), false);
    found[static_cast<std::size_t>(orbit[table.position(GroupElement::identity())])] = true;
    out.push_back(make(BoundaryPoint::infinity(), GroupElement::identity()));
    long remaining = n_orbits - 1;
    const long lev = G.level();
    for (long den = 1; remaining > 0; ++den) {
        if (den > lev * lev + 1) throw std::logic_error("cusps: representative search did not terminate");
        for (long num = 0; num < den * lev && remaining > 0; ++num) {
            if (std::gcd(num, den) != 1) continue;
            GroupElement gq = detail::complete_column(Integer(num), Integer(den));
            auto o = static_cast<std::size_t>(orbit[table.position(gq)]);
            if (found[o]) continue;
            found[o] = true;
            --remaining;
            out.push_back(make(BoundaryPoint::rational(num, den), gq));
        }
    }
    return out;
}

/// Abstract presentation of the group by Schreier generators
/// s_{i,x} = w_i x w_{j}^{-1}, x in {S, T}, with relators obtained by
/// conjugating S^4 and (ST)^3 S^{-2} to every coset.
class Presentation {
public:
    /// A letter: generator index and exponent sign (+1 or -1).
    using Letter = std::pair<std::size_t, int>;
    using Word = std::vector<Letter>;

    explicit Presentation(const CongruenceSubgroup& G) : group_(G), tree_(detail::schreier_tree(G)) {
        const auto [S, T] = generators();
        const GroupElement gens[2] = {S, T};
        const std::size_t mu = tree_.reps.size();
        edge_gen_.assign(mu, {npos, npos});
        inverse_act_.assign(mu, {0, 0});
        for (std::size_t i = 0; i < mu; ++i) {
            for (int x = 0; x < 2; ++x) {
                const std::size_t j = tree_.act[i][static_cast<std::size_t>(x)];
                inverse_act_[j][static_cast<std::size_t>(x)] = i;
                const bool is_tree = tree_.parent[j] && tree_.parent[j]->first == i && tree_.parent[j]->second == x;
                if (is_tree) continue;
                edge_gen_[i][static_cast<std::size_t>(x)] = elements_.size();
                elements_.push_back(tree_.reps[i] * gens[x] * tree_.reps[j].inverse());
                labels_.push_back({i, x});
            }
        }
        // relators, as letter sequences in S, T
        const std::vector<std::pair<int, int>> s4 = {{0, 1}, {0, 1}, {0, 1}, {0, 1}};
        const std::vector<std::pair<int, int>> st3 = {{0, 1}, {1, 1}, {0, 1}, {1, 1}, {0, 1}, {1, 1}, {0, -1}, {0, -1}};
        for (std::size_t i = 0; i < mu; ++i) {
            for (const auto* rel : {&s4, &st3}) {
                auto [w, end] = rewrite_from(i, *rel);
                if (end != i) throw std::logic_error("Presentation: relator does not close up");
                relators_.push_back(std::move(w));
            }
        }
    }

    const CongruenceSubgroup& group() const { return group_; }
    std::size_t size() const { return elements_.size(); }
    const std::vector<GroupElement>& elements() const { return elements_; }
    const GroupElement& element(std::size_t i) const { return elements_.at(i); }
    /// Coset index and generator (0 = S, 1 = T) that produced generator i.
    std::pair<std::size_t, int> label(std::size_t i) const { return labels_.at(i); }
    const std::vector<Word>& relators() const { return relators_; }
    const std::vector<GroupElement>& transversal() const { return tree_.reps; }

    /// Index of the generator equal to g, if g is one of them.
    std::optional<std::size_t> find(const GroupElement& g) const {
        for (std::size_t i = 0; i < elements_.size(); ++i)
            if (elements_[i] == g) return i;
        return std::nullopt;
    }

    /// Writes gamma (which must lie in the group) as a word in the generators.
    Word rewrite(const GroupElement& gamma) const {
        if (!group_.contains(gamma)) throw std::invalid_argument("Presentation::rewrite: element not in " + group_.name());
        std::vector<std::pair<int, int>> letters;
        for (const auto& l : decompose(gamma)) {
            const int x = l.gen == 'S' ? 0 : 1;
            const int sgn = l.power > 0 ? 1 : -1;
            for (long e = 0; e < std::abs(l.power); ++e) letters.emplace_back(x, sgn);
        }
        auto [w, end] = rewrite_from(0, letters);
        if (end != 0) throw std::logic_error("Presentation::rewrite: walk did not return to the trivial coset");
        return w;
    }

    /// Abelianised relator matrix: one row per relator, one column per generator.
    std::vector<std::vector<long>> relation_matrix() const {
        std::vector<std::vector<long>> m;
        for (const auto& r : relators_) {
            std::vector<long> row(size(), 0);
            for (auto [g, s] : r) row[g] += s;
            m.push_back(std::move(row));
        }
        return m;
    }

    /// Integer basis of Hom(group, Z), as generator-value vectors.
    std::vector<std::vector<long>> homomorphisms_to_z() const;

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::pair<Word, std::size_t> rewrite_from(std::size_t start, const std::vector<std::pair<int, int>>& letters) const {
        Word w;
        std::size_t at = start;
        for (auto [x, sgn] : letters) {
            const auto ux = static_cast<std::size_t>(x);
            if (sgn > 0) {
                const std::size_t g = edge_gen_[at][ux];
                if (g != npos) w.emplace_back(g, 1);
                at = tree_.act[at][ux];
            } else {
                const std::size_t from = inverse_act_[at][ux];
                const std::size_t g = edge_gen_[from][ux];
                if (g != npos) w.emplace_back(g, -1);
                at = from;
            }
        }
        return {w, at};
    }

    CongruenceSubgroup group_;
    detail::SchreierTree tree_;
    std::vector<std::array<std::size_t, 2>> edge_gen_;
    std::vector<std::array<std::size_t, 2>> inverse_act_;
    std::vector<GroupElement> elements_;
    std::vector<std::pair<std::size_t, int>> labels_;
    std::vector<Word> relators_;
};

inline std::vector<std::vector<long>> Presentation::homomorphisms_to_z() const {
    using boost::multiprecision::cpp_rational;
    auto m = relation_matrix();
    const std::size_t ncols = size();
    std::vector<std::vector<cpp_rational>> a;
    for (auto& row : m) a.emplace_back(row.begin(), row.end());
    // reduced row echelon form
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        const cpp_rational inv = 1 / a[r][c];
        for (auto& v : a[r]) v *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0) continue;
            const cpp_rational f = a[i][c];
            for (std::size_t j = 0; j < ncols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<std::vector<long>> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
        std::vector<cpp_rational> v(ncols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][free];
        Integer l = 1;
        for (auto& x : v) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
        Integer g = 0;
        std::vector<Integer> iv;
        for (auto& x : v) {
            Integer y = boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x));
            g = boost::multiprecision::gcd(g, y);
            iv.push_back(y);
        }
        std::vector<long> out;
        for (auto& y : iv) out.push_back((y / g).convert_to<long>());
        basis.push_back(std::move(out));
    }
    return basis;
}

} // namespace maasslab
