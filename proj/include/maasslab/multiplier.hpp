#pragma once

// Multiplier systems of complex weight k on congruence subgroups. A system
// is stored by its values on the Schreier generators and extended to the
// whole group by folding along a rewritten word with the consistency factor
//   v(gd) = v(g) v(d) w(g, d).

#include "modgroup.hpp"
#include "subgroup.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace maasslab {

/// arg(c_g(hz)+d_g) + arg(c_h z+d_h) - arg(c_{gh} z+d_{gh}), always a multiple of 2 pi.
inline double consistency_phase_sum(const GroupElement& g, const GroupElement& h, const UHPoint& z) {
    return automorphy_arg(g, apply_moebius(h, z)) + automorphy_arg(h, z) - automorphy_arg(g * h, z);
}

/// The factor w(g,h) evaluated directly at z, without snapping to 2 pi Z.
inline Complex consistency_factor_at(const GroupElement& g, const GroupElement& h, Complex k, const UHPoint& z) {
    return std::exp(I * k * consistency_phase_sum(g, h, z));
}

namespace detail {
inline long winding(const GroupElement& g, const GroupElement& h) {
    return std::lround(consistency_phase_sum(g, h, UHPoint(0.0, 2.0)) / (2.0 * pi));
}
} // namespace detail

struct ConsistencyFactor {
    Complex value;
    long winding;            // the phase sum divided by 2 pi
    double z_discrepancy;    // |w(2i) - w(1+i)| before snapping
};

/// w(g,h) at the base point 2i, cross-checked at 1+i. The phase sum is an
/// exact multiple of 2 pi; the returned value is e^{2 pi i k m}.
inline ConsistencyFactor consistency_factor(const GroupElement& g, const GroupElement& h, Complex k) {
    const UHPoint z1(0.0, 2.0), z2(1.0, 1.0);
    const double s1 = consistency_phase_sum(g, h, z1);
    const double s2 = consistency_phase_sum(g, h, z2);
    const long m1 = std::lround(s1 / (2.0 * pi));
    const long m2 = std::lround(s2 / (2.0 * pi));
    const double tol = 1e-9 * (1.0 + std::abs(s1));
    if (m1 != m2 || std::abs(s1 - 2.0 * pi * m1) > tol || std::abs(s2 - 2.0 * pi * m2) > tol)
        throw std::runtime_error("consistency_factor: phase sum depends on z for " + g.to_string() + ", " + h.to_string());
    const double disc = std::abs(std::exp(I * k * s1) - std::exp(I * k * s2));
    return {std::exp(2.0 * pi * I * k * static_cast<double>(m1)), m1, disc};
}

class MultiplierSystem {
public:
    /// `values[i]` is the value on generator i of `Presentation(group)`. The
    /// values are checked against every relator.
    MultiplierSystem(CongruenceSubgroup group, Complex k, std::vector<Complex> values, std::string label = "custom")
        : group_(group),
          k_(k),
          pres_(std::make_shared<Presentation>(group)),
          values_(std::move(values)),
          label_(std::move(label)),
          cache_(std::make_shared<Cache>()) {
        if (values_.size() != pres_->size())
            throw std::invalid_argument("MultiplierSystem: expected " + std::to_string(pres_->size()) +
                                        " generator values, got " + std::to_string(values_.size()));
        for (const Complex& v : values_)
            if (!(std::abs(v) > 0.0) || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("MultiplierSystem: generator values must be finite and nonzero");
        inverse_values_.reserve(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) {
            const GroupElement& s = pres_->element(i);
            inverse_values_.push_back(1.0 / (values_[i] * consistency_factor(s.inverse(), s, k_).value));
        }
        const auto& rels = pres_->relators();
        for (std::size_t r = 0; r < rels.size(); ++r) {
            const Complex v = fold(rels[r]);
            if (std::abs(v - 1.0) > 1e-9)
                throw std::invalid_argument("MultiplierSystem: generator values violate relator " + std::to_string(r) +
                                            " of " + group_.name() + " at weight k");
        }
    }

    const CongruenceSubgroup& group() const { return group_; }
    Complex weight() const { return k_; }
    const Presentation& presentation() const { return *pres_; }
    const std::vector<Complex>& generator_values() const { return values_; }
    const std::string& label() const { return label_; }

    Complex evaluate(const GroupElement& g) const {
        for (const auto& [h, val] : overrides_)
            if (h == g) return val;
        {
            std::shared_lock lock(cache_->mutex);
            auto it = cache_->map.find(g);
            if (it != cache_->map.end()) return it->second;
        }
        const Complex v = fold(pres_->rewrite(g));
        std::unique_lock lock(cache_->mutex);
        cache_->map.emplace(g, v);
        return v;
    }

    Complex operator()(const GroupElement& g) const { return evaluate(g); }

    /// Same system but returning `value` at exactly the element g. Used to
    /// build deliberately inconsistent systems for the extension check.
    MultiplierSystem with_override(const GroupElement& g, Complex value) const {
        MultiplierSystem copy = *this;
        copy.cache_ = std::make_shared<Cache>();
        copy.overrides_.emplace_back(g, value);
        copy.label_ = label_ + "+override";
        return copy;
    }

    /// Restriction to a subgroup H: values on H's Schreier generators.
    MultiplierSystem restrict_to(const CongruenceSubgroup& H) const {
        if (!H.is_subgroup_of(group_)) throw std::invalid_argument("restrict_to: " + H.name() + " is not a subgroup of " + group_.name());
        Presentation ph(H);
        std::vector<Complex> vals;
        vals.reserve(ph.size());
        for (const GroupElement& s : ph.elements()) vals.push_back(evaluate(s));
        return MultiplierSystem(H, k_, std::move(vals), label_);
    }

private:
    struct Cache {
        std::shared_mutex mutex;
        std::unordered_map<GroupElement, Complex, GroupElementHash> map;
    };

    Complex fold(const Presentation::Word& w) const {
        GroupElement acc;
        Complex val = 1.0;
        for (auto [g, sgn] : w) {
            const GroupElement s = sgn > 0 ? pres_->element(g) : pres_->element(g).inverse();
            const Complex sv = sgn > 0 ? values_[g] : inverse_values_[g];
            const long m = detail::winding(acc, s);
            val *= sv;
            if (m != 0) val *= std::exp(2.0 * pi * I * k_ * static_cast<double>(m));
            acc *= s;
        }
        return val;
    }

    CongruenceSubgroup group_;
    Complex k_;
    std::shared_ptr<const Presentation> pres_;
    std::vector<Complex> values_;
    std::vector<Complex> inverse_values_;
    std::string label_;
    std::vector<std::pair<GroupElement, Complex>> overrides_;
    std::shared_ptr<Cache> cache_;
};

inline MultiplierSystem trivial_multiplier(const CongruenceSubgroup& G, Complex k = 0.0) {
    Presentation p(G);
    return MultiplierSystem(G, k, std::vector<Complex>(p.size(), 1.0), "trivial");
}

/// Dedekind eta by its product, e^{2 pi i z/24} prod_{n<=terms} (1 - q^n).
inline Complex eta_product(const UHPoint& z, int terms = 200) {
    const Complex q = std::exp(2.0 * pi * I * z.z());
    Complex prod = 1.0, qn = 1.0;
    for (int n = 1; n <= terms; ++n) {
        qn *= q;
        prod *= 1.0 - qn;
    }
    return std::exp(2.0 * pi * I * z.z() / 24.0) * prod;
}

/// The weight-1/2 multiplier of y^{1/4} eta(z), with values on S and T
/// bootstrapped from the product at points with imaginary part >= 0.5 and
/// then restricted to G.
inline MultiplierSystem eta_multiplier(const CongruenceSubgroup& G = CongruenceSubgroup::full()) {
    const Complex k = 0.5;
    auto u = [](const UHPoint& z) { return std::pow(z.y(), 0.25) * eta_product(z); };
    auto bootstrap = [&](const GroupElement& g, const UHPoint& z) {
        return u(apply_moebius(g, z)) / (automorphy_phase(g, z, k) * u(z));
    };
    const CongruenceSubgroup full = CongruenceSubgroup::full();
    Presentation p(full);
    std::vector<Complex> vals;
    for (const GroupElement& s : p.elements()) vals.push_back(bootstrap(s, UHPoint(0.2, 1.1)));
    MultiplierSystem v(full, k, std::move(vals), "eta");
    return G.is_full_group() ? v : v.restrict_to(G);
}

/// phi(g) for a homomorphism given by its generator values.
inline long evaluate_homomorphism(const Presentation& p, const std::vector<long>& phi, const GroupElement& g) {
    long total = 0;
    for (auto [i, s] : p.rewrite(g)) total += s * phi.at(i);
    return total;
}

/// A nonzero homomorphism to Z vanishing at g (for instance g = T, so that
/// the multiplier is trivial on the translations).
inline std::vector<long> homomorphism_vanishing_at(const CongruenceSubgroup& G, const GroupElement& g) {
    Presentation p(G);
    auto basis = p.homomorphisms_to_z();
    if (basis.empty()) throw std::invalid_argument(G.name() + " has no nonzero homomorphism to Z");
    std::vector<long> at;
    for (const auto& b : basis) at.push_back(evaluate_homomorphism(p, b, g));
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (at[i] == 0) return basis[i];
    if (basis.size() < 2) throw std::invalid_argument(G.name() + ": no homomorphism to Z vanishes at " + g.to_string());
    std::vector<long> phi(basis[0].size());
    for (std::size_t j = 0; j < phi.size(); ++j) phi[j] = at[1] * basis[0][j] - at[0] * basis[1][j];
    return phi;
}

/// v(g) = e^{s phi(g)}. `phi` maps generator indices to integers; unlisted
/// generators map to 0. The weight must be an even integer (default 0), where
/// the consistency factor is identically 1.
inline MultiplierSystem build_exponential_multiplier(const CongruenceSubgroup& G, const std::map<std::size_t, long>& phi,
                                                     Complex s, Complex k = 0.0) {
    if (k.imag() != 0.0 || std::fmod(k.real(), 2.0) != 0.0)
        throw std::invalid_argument("build_exponential_multiplier: weight must be an even integer");
    Presentation p(G);
    std::vector<long> full(p.size(), 0);
    for (auto [i, val] : phi) {
        if (i >= p.size()) throw std::invalid_argument("build_exponential_multiplier: generator index " + std::to_string(i) + " out of range");
        full[i] = val;
    }
    const auto& rels = p.relators();
    for (std::size_t r = 0; r < rels.size(); ++r) {
        long sum = 0;
        for (auto [g, sg] : rels[r]) sum += sg * full[g];
        if (sum != 0) throw std::invalid_argument("build_exponential_multiplier: phi violates relator " + std::to_string(r));
    }
    std::vector<Complex> vals;
    for (long f : full) vals.push_back(std::exp(s * static_cast<double>(f)));
    return MultiplierSystem(G, k, std::move(vals), "exponential");
}

inline MultiplierSystem build_exponential_multiplier(const CongruenceSubgroup& G, const std::vector<long>& phi, Complex s,
                                                     Complex k = 0.0) {
    std::map<std::size_t, long> m;
    for (std::size_t i = 0; i < phi.size(); ++i)
        if (phi[i] != 0) m[i] = phi[i];
    return build_exponential_multiplier(G, m, s, k);
}

inline bool is_weakly_parabolic(const MultiplierSystem& v) {
    for (const CuspData& c : cusps(v.group()))
        if (std::abs(std::abs(v.evaluate(c.stabilizer)) - 1.0) > 1e-12) return false;
    return true;
}

struct ExtensionRow {
    GroupElement rep;
    double modulus;
    std::vector<double> power_moduli;  // |v(r^n)|, n = 1..10, only when modulus != 1
};

struct ExtensionReport {
    bool unitary;
    std::vector<ExtensionRow> rows;
};

/// Given v_star on a group containing G, unitary on G, decide whether v_star
/// is unitary on the whole group by inspecting the coset representatives. A
/// non-unitary representative r gets |v(r^n)| by repeated use of the
/// consistency relation, which grows geometrically.
inline ExtensionReport check_unitary_extension(const MultiplierSystem& v_star, const CongruenceSubgroup& G) {
    const CongruenceSubgroup& big = v_star.group();
    if (!G.is_subgroup_of(big)) throw std::invalid_argument("check_unitary_extension: " + G.name() + " is not contained in " + big.name());
    if (v_star.weight().imag() != 0.0) throw std::invalid_argument("check_unitary_extension: weight must be real");
    Presentation p(G);
    for (const GroupElement& s : p.elements())
        if (std::abs(std::abs(v_star.evaluate(s)) - 1.0) > 1e-10)
            throw std::invalid_argument("check_unitary_extension: restriction to " + G.name() + " is not unitary at " + s.to_string());
    ExtensionReport rep{true, {}};
    for (const GroupElement& r : coset_reps(G).reps()) {
        if (!big.contains(r)) continue;
        ExtensionRow row{r, std::abs(v_star.evaluate(r)), {}};
        if (std::abs(row.modulus - 1.0) > 1e-10) {
            rep.unitary = false;
            const Complex vr = v_star.evaluate(r);
            GroupElement acc = r;
            Complex val = vr;
            row.power_moduli.push_back(std::abs(val));
            for (int n = 2; n <= 10; ++n) {
                val *= vr * consistency_factor(acc, r, v_star.weight()).value;
                acc *= r;
                row.power_moduli.push_back(std::abs(val));
            }
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace maasslab
