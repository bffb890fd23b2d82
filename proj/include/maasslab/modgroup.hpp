#pragma once

// Exact arithmetic in SL(2,Z), its action on the upper half-plane and its
// boundary, the principal argument convention and the weight-k slash action.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maasslab {

using Integer = boost::multiprecision::cpp_int;
using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

inline double to_double(const Integer& n) { return n.convert_to<double>(); }

/// Principal argument with values in (-pi, pi]; -pi is folded onto +pi.
inline double arg_pv(Complex w) {
    double t = std::atan2(w.imag(), w.real());
    if (t <= -pi) t = pi;
    return t;
}

/// An element of the full modular group. The determinant is checked on
/// construction, so every live instance satisfies ad - bc = 1.
class GroupElement {
public:
    GroupElement() : a_(1), b_(0), c_(0), d_(1) {}

    GroupElement(Integer a, Integer b, Integer c, Integer d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
        if (a_ * d_ - b_ * c_ != 1)
            throw std::invalid_argument("GroupElement: determinant is not 1: " + to_string());
    }

    static GroupElement identity() { return {}; }

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Integer& c() const { return c_; }
    const Integer& d() const { return d_; }

    GroupElement operator*(const GroupElement& o) const {
        GroupElement r;
        r.a_ = a_ * o.a_ + b_ * o.c_;
        r.b_ = a_ * o.b_ + b_ * o.d_;
        r.c_ = c_ * o.a_ + d_ * o.c_;
        r.d_ = c_ * o.b_ + d_ * o.d_;
        return r;
    }

    GroupElement& operator*=(const GroupElement& o) { return *this = *this * o; }

    GroupElement inverse() const {
        GroupElement r;
        r.a_ = d_;
        r.b_ = -b_;
        r.c_ = -c_;
        r.d_ = a_;
        return r;
    }

    GroupElement operator-() const {
        GroupElement r;
        r.a_ = -a_;
        r.b_ = -b_;
        r.c_ = -c_;
        r.d_ = -d_;
        return r;
    }

    GroupElement pow(long n) const {
        GroupElement base = n < 0 ? inverse() : *this;
        unsigned long e = n < 0 ? static_cast<unsigned long>(-(n + 1)) + 1UL : static_cast<unsigned long>(n);
        GroupElement r;
        while (e) {
            if (e & 1UL) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }

    friend bool operator==(const GroupElement& x, const GroupElement& y) {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }

    /// a^2 + b^2 + c^2 + d^2
    Integer frobenius_norm2() const { return a_ * a_ + b_ * b_ + c_ * c_ + d_ * d_; }

    std::string to_string() const {
        std::ostringstream os;
        os << "[[" << a_ << "," << b_ << "],[" << c_ << "," << d_ << "]]";
        return os.str();
    }

private:
    Integer a_, b_, c_, d_;
};

struct GroupElementHash {
    std::size_t operator()(const GroupElement& g) const {
        auto h = [](const Integer& n) {
            return std::hash<long long>{}(static_cast<long long>(n % Integer(1000000007)));
        };
        std::size_t seed = h(g.a());
        for (const Integer* e : {&g.b(), &g.c(), &g.d()})
            seed ^= h(*e) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
        return seed;
    }
};

/// A point of the open upper half-plane.
class UHPoint {
public:
    UHPoint(double x, double y) : x_(x), y_(y) {
        if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw std::invalid_argument("UHPoint: imaginary part must be finite and positive");
    }
    explicit UHPoint(Complex z) : UHPoint(z.real(), z.imag()) {}

    double x() const { return x_; }
    double y() const { return y_; }
    Complex z() const { return {x_, y_}; }

private:
    double x_, y_;
};

/// A point of P^1(Q): either infinity or a rational in lowest terms with
/// positive denominator.
class BoundaryPoint {
public:
    static BoundaryPoint infinity() { return BoundaryPoint(); }

    static BoundaryPoint rational(Integer p, Integer q) {
        if (q == 0) {
            if (p == 0) throw std::invalid_argument("BoundaryPoint: 0/0");
            return infinity();
        }
        Integer g = boost::multiprecision::gcd(p, q);
        p /= g;
        q /= g;
        if (q < 0) {
            p = -p;
            q = -q;
        }
        BoundaryPoint r;
        r.inf_ = false;
        r.num_ = std::move(p);
        r.den_ = std::move(q);
        return r;
    }

    bool is_infinity() const { return inf_; }
    const Integer& numerator() const { return num_; }
    const Integer& denominator() const { return den_; }

    friend bool operator==(const BoundaryPoint& x, const BoundaryPoint& y) {
        if (x.inf_ || y.inf_) return x.inf_ == y.inf_;
        return x.num_ == y.num_ && x.den_ == y.den_;
    }

    std::string to_string() const {
        if (inf_) return "inf";
        std::ostringstream os;
        os << num_;
        if (den_ != 1) os << "/" << den_;
        return os.str();
    }

private:
    BoundaryPoint() = default;
    bool inf_ = true;
    Integer num_{1};
    Integer den_{0};
};

/// (az+b)/(cz+d)
inline UHPoint apply_moebius(const GroupElement& g, const UHPoint& z) {
    const Complex zz = z.z();
    const Complex num = to_double(g.a()) * zz + to_double(g.b());
    const Complex den = to_double(g.c()) * zz + to_double(g.d());
    const Complex w = num / den;
    // Im(gz) = Im(z)/|cz+d|^2 holds exactly for determinant one; using it
    // directly keeps the image strictly inside the half-plane.
    return UHPoint(w.real(), z.y() / std::norm(den));
}

inline BoundaryPoint apply_moebius_boundary(const GroupElement& g, const BoundaryPoint& q) {
    if (q.is_infinity()) {
        if (g.c() == 0) return BoundaryPoint::infinity();
        return BoundaryPoint::rational(g.a(), g.c());
    }
    const Integer& p = q.numerator();
    const Integer& r = q.denominator();
    Integer den = g.c() * p + g.d() * r;
    if (den == 0) return BoundaryPoint::infinity();
    return BoundaryPoint::rational(g.a() * p + g.b() * r, den);
}

/// cz + d
inline Complex cocycle_j(const GroupElement& g, const UHPoint& z) {
    return to_double(g.c()) * z.z() + to_double(g.d());
}

/// arg(cz+d) in (-pi, pi].
inline double automorphy_arg(const GroupElement& g, const UHPoint& z) {
    if (g.c() == 0) return g.d() > 0 ? 0.0 : pi;
    return arg_pv(cocycle_j(g, z));
}

/// e^{ik arg(cz+d)}
inline Complex automorphy_phase(const GroupElement& g, const UHPoint& z, Complex k) {
    return std::exp(I * k * automorphy_arg(g, z));
}

using Evaluator = std::function<Complex(const UHPoint&)>;

/// (f|_k g)(z) = e^{-ik arg(cz+d)} f(gz)
inline Evaluator slash(Evaluator f, Complex k, GroupElement g) {
    return [f = std::move(f), k, g = std::move(g)](const UHPoint& z) {
        return std::exp(-I * k * automorphy_arg(g, z)) * f(apply_moebius(g, z));
    };
}

struct Generators {
    GroupElement S;
    GroupElement T;
};

inline Generators generators() {
    return {GroupElement(0, -1, 1, 0), GroupElement(1, 1, 0, 1)};
}

/// One factor of a word in the generators: S^power or T^power.
struct Letter {
    char gen;   // 'S' or 'T'
    long power;

    friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

inline GroupElement evaluate_word(const Word& w) {
    const auto [S, T] = generators();
    GroupElement r;
    for (const Letter& l : w) r *= (l.gen == 'S' ? S : T).pow(l.power);
    return r;
}

/// Writes g as a word in S and T by the Euclidean algorithm on the first
/// column. Only S^1 and T^n letters are produced; the product is exactly g.
inline Word decompose(const GroupElement& g) {
    Word out;
    Integer a = g.a(), b = g.b(), c = g.c(), d = g.d();
    auto push_t = [&out](const Integer& n) {
        if (n == 0) return;
        if (boost::multiprecision::abs(n) > Integer(std::numeric_limits<long>::max() / 4))
            throw std::overflow_error("decompose: translation exponent out of range");
        out.push_back({'T', n.convert_to<long>()});
    };
    while (c != 0) {
        // g = T^q (T^-q g), with |a - qc| <= |c|/2
        Integer q = a / c;
        Integer r = a - q * c;
        if (2 * boost::multiprecision::abs(r) > boost::multiprecision::abs(c)) {
            if ((r > 0) == (c > 0)) {
                q += 1;
            } else {
                q -= 1;
            }
        }
        push_t(q);
        a -= q * c;
        b -= q * d;
        // g = S (S^-1 g), S^-1 [[a,b],[c,d]] = [[c,d],[-a,-b]]
        out.push_back({'S', 1});
        Integer na = c, nb = d, nc = -a, nd = -b;
        a = std::move(na);
        b = std::move(nb);
        c = std::move(nc);
        d = std::move(nd);
    }
    if (a == 1) {
        push_t(b);
    } else {
        // [[-1,b],[0,-1]] = S^2 T^-b
        out.push_back({'S', 1});
        out.push_back({'S', 1});
        push_t(-b);
    }
    return out;
}

/// Parses words such as "S T^-2 S", "STS" or "T^3"; the empty word (or "I")
/// is the identity.
inline GroupElement parse_word(const std::string& text) {
    const auto [S, T] = generators();
    GroupElement r;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*')) ++i;
    };
    skip();
    while (i < text.size()) {
        char ch = text[i++];
        const GroupElement* base = nullptr;
        if (ch == 'S' || ch == 's') {
            base = &S;
        } else if (ch == 'T' || ch == 't') {
            base = &T;
        } else if (ch == 'I') {
            skip();
            continue;
        } else {
            throw std::invalid_argument(std::string("parse_word: unexpected character '") + ch + "'");
        }
        long power = 1;
        if (i < text.size() && text[i] == '^') {
            ++i;
            std::size_t start = i;
            if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (start == i) throw std::invalid_argument("parse_word: missing exponent");
            power = std::stol(text.substr(start, i - start));
        }
        r *= base->pow(power);
        skip();
    }
    return r;
}

} // namespace maasslab
