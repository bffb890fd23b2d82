#pragma once

// Vector-valued forms on the full modular group induced from scalar forms on
// a subgroup: the right regular representation on cosets, weight matrices
// induced from a multiplier, and the maps Pi (coset slashes) and pi (take the
// identity component).

#include "forms.hpp"
#include "modgroup.hpp"
#include "multiplier.hpp"
#include "operators.hpp"
#include "subgroup.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maasslab {

/// Dense row-major complex matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Matrix: dimension mismatch in product");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t l = 0; l < cols_; ++l) {
                const Complex a = (*this)(i, l);
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(l, j);
            }
        return r;
    }

    std::vector<Complex> operator*(const std::vector<Complex>& x) const {
        if (x.size() != cols_) throw std::invalid_argument("Matrix: dimension mismatch in product");
        std::vector<Complex> r(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * x[j];
        return r;
    }

    Matrix& operator*=(Complex s) {
        for (auto& e : data_) e *= s;
        return *this;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& e : data_) m = std::max(m, std::abs(e));
        return m;
    }

    friend double max_abs_diff(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("Matrix: dimension mismatch");
        double m = 0.0;
        for (std::size_t i = 0; i < a.data_.size(); ++i) m = std::max(m, std::abs(a.data_[i] - b.data_[i]));
        return m;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> data_;
};

/// A matrix-valued automorphy factor w(h, z) on the full modular group.
struct WeightMatrix {
    std::size_t dimension;
    std::function<Matrix(const GroupElement&, const UHPoint&)> entries;

    Matrix operator()(const GroupElement& h, const UHPoint& z) const { return entries(h, z); }
};

/// (delta_G(g_i h g_j^{-1}))_{i,j}.
inline Matrix right_regular_chi0(const CongruenceSubgroup& G, const CosetTable& table, const GroupElement& h) {
    if (!(table.group() == G)) throw std::invalid_argument("right_regular_chi0: table built for a different group");
    const std::size_t mu = table.index();
    Matrix m(mu, mu);
    for (std::size_t i = 0; i < mu; ++i) m(i, table.position(table.rep(i) * h)) = 1.0;
    return m;
}

/// Weight matrix induced from (v, k) on G. For g_i h = gamma g_j with gamma in
/// G the (i, j) entry is
///   v(gamma) exp(ik [arg j(gamma, g_j z) + arg j(g_j, z) - arg j(g_i, hz)]),
/// which is the factor relating the coset slashes u|g_i at hz to u|g_j at z.
/// For integral k the bracket collapses to arg j(h, z).
inline WeightMatrix induced_weight_matrix(const MultiplierSystem& v, Complex k, const CongruenceSubgroup& G,
                                          const CosetTable& table) {
    if (!(v.group() == G)) throw std::invalid_argument("induced_weight_matrix: multiplier is defined on " + v.group().name());
    if (!(table.group() == G)) throw std::invalid_argument("induced_weight_matrix: table built for a different group");
    if (std::abs(v.weight() - k) > 1e-12) throw std::invalid_argument("induced_weight_matrix: multiplier has a different weight");
    auto tab = std::make_shared<const CosetTable>(table);
    auto entries = [v, k, tab](const GroupElement& h, const UHPoint& z) {
        const std::size_t mu = tab->index();
        const UHPoint hz = apply_moebius(h, z);
        Matrix m(mu, mu);
        for (std::size_t i = 0; i < mu; ++i) {
            const GroupElement gih = tab->rep(i) * h;
            const std::size_t j = tab->position(gih);
            const GroupElement& gj = tab->rep(j);
            const GroupElement gamma = gih * gj.inverse();
            const double phase = automorphy_arg(gamma, apply_moebius(gj, z)) + automorphy_arg(gj, z) -
                                 automorphy_arg(tab->rep(i), hz);
            m(i, j) = v(gamma) * std::exp(I * k * phase);
        }
        return m;
    };
    return {table.index(), std::move(entries)};
}

struct VectorValuedForm {
    std::vector<SmoothEvaluator> components;
    WeightMatrix weight_matrix;
    Complex k;
    Complex nu;
    double growth;
    // Set when the weight matrix is induced from a scalar multiplier.
    std::optional<MultiplierSystem> induced_from;
    std::optional<CosetTable> table;

    std::size_t dimension() const { return components.size(); }
    Complex lambda() const { return 0.25 - nu * nu; }

    std::vector<Complex> operator()(const UHPoint& z) const {
        std::vector<Complex> r;
        r.reserve(components.size());
        for (const auto& c : components) r.push_back(c(z));
        return r;
    }
};

/// Pi(u) = (u|_k g_1, ..., u|_k g_mu).
inline VectorValuedForm lift_Pi(const GeneralizedMaassForm& u, const CosetTable& table) {
    if (!(table.group() == u.group)) throw std::invalid_argument("lift_Pi: table built for a different group");
    std::vector<SmoothEvaluator> comps;
    for (const GroupElement& g : table.reps()) {
        if (g.is_identity()) {
            comps.push_back(u.evaluator);
        } else {
            comps.push_back(SmoothEvaluator(slash(u.evaluator.eval, u.k, g), u.k, u.nu));
        }
    }
    return {std::move(comps), induced_weight_matrix(u.multiplier, u.k, u.group, table), u.k, u.nu, 0.0,
            u.multiplier, table};
}

/// pi(vu): the component at the representative lying in the group (g_1 = identity).
/// With samples, the result is checked against u|_k h = v(h) u and rejected
/// when the residual exceeds tol.
inline GeneralizedMaassForm project_pi(const VectorValuedForm& vu, const CongruenceSubgroup& G, const CosetTable& table,
                                       const std::vector<TransformationSample>& samples = {}, double tol = 1e-8) {
    if (!vu.induced_from) throw std::invalid_argument("project_pi: weight matrix is not induced from a scalar multiplier");
    if (!(vu.induced_from->group() == G) || !(table.group() == G))
        throw std::invalid_argument("project_pi: form was induced from " + vu.induced_from->group().name() + ", not " + G.name());
    if (vu.dimension() != table.index()) throw std::invalid_argument("project_pi: dimension does not match the coset table");
    std::optional<std::size_t> j;
    for (std::size_t i = 0; i < table.index(); ++i)
        if (G.contains(table.rep(i))) {
            j = i;
            break;
        }
    if (!j) throw std::invalid_argument("project_pi: no coset representative lies in " + G.name());
    // u = v(g_j)^{-1} e^{...} (u|g_j) in general; with g_j = identity the component is u itself.
    if (!table.rep(*j).is_identity()) throw std::invalid_argument("project_pi: representative in the group must be the identity");
    GeneralizedMaassForm u{G, vu.k, *vu.induced_from, vu.nu, vu.components[*j], Provenance::lift, "projected component"};
    if (!samples.empty()) {
        const double r = verify_transformation(u, samples);
        if (!(r <= tol))
            throw std::runtime_error("project_pi: projected component violates the transformation law (residual " +
                                     std::to_string(r) + ")");
    }
    return u;
}

/// rho(g) for a representation given on S and T; g is decomposed into S and T.
inline Matrix representation_value(const Matrix& rho_S, const Matrix& rho_T, const GroupElement& g) {
    const std::size_t n = rho_S.rows();
    // Negative powers of T use rho(T)^{-1} by Gauss-Jordan elimination.
    auto inverse = [n](Matrix a) {
        Matrix inv = Matrix::identity(n);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            for (std::size_t r = c + 1; r < n; ++r)
                if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
            if (std::abs(a(p, c)) == 0.0) throw std::invalid_argument("representation_value: rho(T) is singular");
            for (std::size_t l = 0; l < n; ++l) {
                std::swap(a(c, l), a(p, l));
                std::swap(inv(c, l), inv(p, l));
            }
            const Complex d = a(c, c);
            for (std::size_t l = 0; l < n; ++l) {
                a(c, l) /= d;
                inv(c, l) /= d;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c) continue;
                const Complex f = a(r, c);
                if (f == 0.0) continue;
                for (std::size_t l = 0; l < n; ++l) {
                    a(r, l) -= f * a(c, l);
                    inv(r, l) -= f * inv(c, l);
                }
            }
        }
        return inv;
    };
    Matrix r = Matrix::identity(n);
    std::optional<Matrix> t_inv;
    for (const Letter& l : decompose(g)) {
        if (l.gen == 'S') {
            for (long p = 0; p < l.power; ++p) r = r * rho_S;
        } else if (l.power > 0) {
            for (long p = 0; p < l.power; ++p) r = r * rho_T;
        } else {
            if (!t_inv) t_inv = inverse(rho_T);
            for (long p = 0; p < -l.power; ++p) r = r * *t_inv;
        }
    }
    return r;
}

/// Components y^{k/2} F_i(z) with weight matrix v(g) e^{ik arg j(g,z)} rho(g).
/// v lives on the full group; the transformation of F is assumed, not checked.
inline VectorValuedForm lift_holomorphic_vv(std::vector<std::function<Complex(Complex)>> F, Complex k, const Matrix& rho_S,
                                            const Matrix& rho_T, const MultiplierSystem& v) {
    if (!v.group().is_full_group()) throw std::invalid_argument("lift_holomorphic_vv: multiplier must live on the full group");
    const std::size_t t = F.size();
    if (rho_S.rows() != t || rho_S.cols() != t || rho_T.rows() != t || rho_T.cols() != t)
        throw std::invalid_argument("lift_holomorphic_vv: representation has the wrong dimension");
    const Complex nu = (k - 1.0) / 2.0;
    std::vector<SmoothEvaluator> comps;
    for (auto& f : F) {
        Evaluator e = [f = std::move(f), k](const UHPoint& z) { return std::exp(k / 2.0 * std::log(z.y())) * f(z.z()); };
        comps.push_back(SmoothEvaluator(std::move(e), k, nu));
    }
    auto w = [v, k, rho_S, rho_T](const GroupElement& g, const UHPoint& z) {
        Matrix m = representation_value(rho_S, rho_T, g);
        m *= v(g) * std::exp(I * k * automorphy_arg(g, z));
        return m;
    };
    return {std::move(comps), WeightMatrix{t, std::move(w)}, k, nu, 0.0, std::nullopt, std::nullopt};
}

// ---------------------------------------------------------------- verifiers

/// |w(gh, z) - w(g, hz) w(h, z)| / (1 + |w(gh, z)|), entrywise maximum.
inline double cocycle_residual(const WeightMatrix& w, const GroupElement& g, const GroupElement& h, const UHPoint& z) {
    const Matrix lhs = w(g * h, z);
    const Matrix rhs = w(g, apply_moebius(h, z)) * w(h, z);
    return max_abs_diff(lhs, rhs) / (1.0 + lhs.max_abs());
}

/// Exactly one nonzero entry in every row and every column.
inline bool has_permutation_pattern(const Matrix& m) {
    if (m.rows() != m.cols()) return false;
    std::vector<int> col_count(m.cols(), 0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        int row_count = 0;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) {
                ++row_count;
                ++col_count[j];
            }
        if (row_count != 1) return false;
    }
    return std::all_of(col_count.begin(), col_count.end(), [](int c) { return c == 1; });
}

/// max |u(gz) - w(g,z) u(z)| / (1 + |u(z)|) over samples.
inline double vv_transformation_residual(const VectorValuedForm& vu, const std::vector<TransformationSample>& samples) {
    double worst = 0.0;
    for (const auto& s : samples) {
        const auto uz = vu(s.z);
        const auto lhs = vu(apply_moebius(s.gamma, s.z));
        const auto rhs = vu.weight_matrix(s.gamma, s.z) * uz;
        double norm = 0.0;
        for (const auto& c : uz) norm = std::max(norm, std::abs(c));
        for (std::size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]) / (1.0 + norm));
    }
    return worst;
}

/// Largest FD residual |Delta_k u_i - lambda u_i| over components and samples.
inline double vv_eigen_residual(const VectorValuedForm& vu, const std::vector<UHPoint>& sample, double h = 1e-3,
                                FdScheme s = kAccurateScheme) {
    double worst = 0.0;
    for (const auto& c : vu.components)
        for (const auto& z : sample)
            worst = std::max(worst, std::abs(laplacian_fd(c, vu.k, z, h, s) - vu.lambda() * c(z)));
    return worst;
}

/// Pointwise max |a_i(z) - b_i(z)| over components and samples.
inline double vv_distance(const VectorValuedForm& a, const VectorValuedForm& b, const std::vector<UHPoint>& sample) {
    if (a.dimension() != b.dimension()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& z : sample) {
        const auto x = a(z), y = b(z);
        for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    return worst;
}

} // namespace maasslab
