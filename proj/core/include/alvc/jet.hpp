// Truncated Taylor ("jet") arithmetic in the derivative convention:
// coeffs[a] stores d^a f / dt^a at the expansion point, with no 1/a! factor.
//
// All operations are generic over the coefficient ring R, so jets nest:
// Jet<Jet<double>> carries directional seeds through time-jets and vice
// versa.  That nesting is how every higher derivative in this library is
// produced — there is no symbolic differentiation and no finite differencing
// on the main code paths.

#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace alvc {

// Maximum supported jet order.  Factorials and binomials stay exact in
// double/int64 through this range as used.
inline constexpr int kMaxJetOrder = 12;

namespace detail {

inline const std::int64_t* binom_row(int n) {
    // Pascal triangle up to n = 2*kMaxJetOrder + 2 (plenty for C(k+1,b) uses).
    constexpr int N = 2 * kMaxJetOrder + 3;
    static const auto table = [] {
        static std::int64_t rows[N][N] = {};
        for (int i = 0; i < N; ++i) {
            rows[i][0] = 1;
            for (int j = 1; j <= i; ++j)
                rows[i][j] = rows[i - 1][j - 1] + (j <= i - 1 ? rows[i - 1][j] : 0);
        }
        return &rows;
    }();
    return (*table)[n];
}

} // namespace detail

// C(n,k) as exact integer; 0 outside the admissible range.
inline std::int64_t binom_i(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0;
    assert(n <= 2 * kMaxJetOrder + 2);
    return detail::binom_row(n)[k];
}

inline double binom(int n, int k) { return static_cast<double>(binom_i(n, k)); }

inline double factorial(int n) {
    static const auto table = [] {
        static double f[kMaxJetOrder + 1];
        f[0] = 1.0;
        for (int i = 1; i <= kMaxJetOrder; ++i) f[i] = f[i - 1] * i;
        return &f;
    }();
    assert(n >= 0 && n <= kMaxJetOrder);
    return (*table)[n];
}

// ---------------------------------------------------------------------------
// Ring glue for the scalar case.  Jet<R> relies on these via ADL; nested jets
// provide their own overloads below.
// ---------------------------------------------------------------------------

inline double leading_value(double x) { return x; }
inline double ring_constant_like(double /*proto*/, double v) { return v; }
inline bool ring_is_constant(double /*x*/) { return true; }

template <class R>
struct Jet {
    std::vector<R> c; // c[a] = d^a/dt^a, a = 0..order

    Jet() = default;
    explicit Jet(std::vector<R> coeffs) : c(std::move(coeffs)) {
        if (c.empty()) throw std::invalid_argument("Jet: empty coefficient list");
        check_order(order());
    }

    int order() const { return static_cast<int>(c.size()) - 1; }

    static void check_order(int k) {
        if (k < 0 || k > kMaxJetOrder)
            throw std::invalid_argument("Jet: order " + std::to_string(k) +
                                        " outside supported range 0.." +
                                        std::to_string(kMaxJetOrder));
    }

    static Jet constant(int order, const R& value) {
        check_order(order);
        Jet j;
        j.c.assign(static_cast<std::size_t>(order) + 1, ring_constant_like(value, 0.0));
        j.c[0] = value;
        return j;
    }

    // Jet of the curve t |-> value + (t - t0); the seed for differentiating
    // with respect to this variable.
    static Jet variable(int order, const R& value) {
        Jet j = constant(order, value);
        if (order >= 1) j.c[1] = ring_constant_like(value, 1.0);
        return j;
    }

    const R& operator[](int a) const { return c[static_cast<std::size_t>(a)]; }
    R& operator[](int a) { return c[static_cast<std::size_t>(a)]; }
};

// A jet of a curve in R^n: one Jet per component, uniform order.
template <class R>
using JetPoint = std::vector<Jet<R>>;

namespace detail {

template <class R>
void require_same_order(const Jet<R>& a, const Jet<R>& b, const char* what) {
    if (a.order() != b.order())
        throw std::invalid_argument(std::string(what) + ": jet order mismatch (" +
                                    std::to_string(a.order()) + " vs " +
                                    std::to_string(b.order()) + ")");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Ring glue for jets (enables Jet<Jet<...>>)
// ---------------------------------------------------------------------------

template <class R>
double leading_value(const Jet<R>& j) {
    return leading_value(j.c[0]);
}

template <class R>
Jet<R> ring_constant_like(const Jet<R>& proto, double v) {
    return Jet<R>::constant(proto.order(), ring_constant_like(proto.c[0], v));
}

template <class R>
bool ring_is_constant(const Jet<R>& j) {
    for (std::size_t a = 1; a < j.c.size(); ++a)
        if (leading_value(j.c[a]) != 0.0 || !ring_is_constant(j.c[a])) return false;
    return ring_is_constant(j.c[0]);
}

// ---------------------------------------------------------------------------
// Linear operations
// ---------------------------------------------------------------------------

template <class R>
Jet<R> operator+(const Jet<R>& a, const Jet<R>& b) {
    detail::require_same_order(a, b, "jet add");
    Jet<R> out = a;
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = out.c[i] + b.c[i];
    return out;
}

template <class R>
Jet<R> operator-(const Jet<R>& a, const Jet<R>& b) {
    detail::require_same_order(a, b, "jet sub");
    Jet<R> out = a;
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = out.c[i] - b.c[i];
    return out;
}

template <class R>
Jet<R> operator-(const Jet<R>& a) {
    Jet<R> out = a;
    for (auto& x : out.c) x = -x;
    return out;
}

template <class R>
Jet<R> operator+(const Jet<R>& a) {
    return a;
}

template <class R>
Jet<R> operator+(const Jet<R>& a, double s) {
    Jet<R> out = a;
    out.c[0] = out.c[0] + ring_constant_like(out.c[0], s);
    return out;
}

template <class R>
Jet<R> operator+(double s, const Jet<R>& a) {
    return a + s;
}

template <class R>
Jet<R> operator-(const Jet<R>& a, double s) {
    return a + (-s);
}

template <class R>
Jet<R> operator-(double s, const Jet<R>& a) {
    return (-a) + s;
}

template <class R>
Jet<R> operator*(const Jet<R>& a, double s) {
    Jet<R> out = a;
    for (auto& x : out.c) x = x * s;
    return out;
}

template <class R>
Jet<R> operator*(double s, const Jet<R>& a) {
    return a * s;
}

template <class R>
Jet<R> operator/(const Jet<R>& a, double s) {
    return a * (1.0 / s);
}

// double * R and R * double must exist for the coefficient ring; for nested
// jets that is the overload above, for double it is builtin.

// Leibniz product in the derivative convention.
template <class R>
Jet<R> operator*(const Jet<R>& a, const Jet<R>& b) {
    detail::require_same_order(a, b, "jet_mul");
    const int K = a.order();
    Jet<R> out = Jet<R>::constant(K, ring_constant_like(a.c[0], 0.0));
    for (int al = 0; al <= K; ++al) {
        R acc = a.c[0] * b.c[static_cast<std::size_t>(al)];
        for (int s = 1; s <= al; ++s)
            acc = acc + binom(al, s) * (a.c[static_cast<std::size_t>(s)] *
                                        b.c[static_cast<std::size_t>(al - s)]);
        out.c[static_cast<std::size_t>(al)] = acc;
    }
    return out;
}

// Division: solve out*b = a coefficient by coefficient.
template <class R>
Jet<R> operator/(const Jet<R>& a, const Jet<R>& b) {
    detail::require_same_order(a, b, "jet div");
    if (leading_value(b.c[0]) == 0.0)
        throw std::domain_error("jet division by value with zero constant term");
    const int K = a.order();
    Jet<R> out = Jet<R>::constant(K, ring_constant_like(a.c[0], 0.0));
    for (int al = 0; al <= K; ++al) {
        R acc = a.c[static_cast<std::size_t>(al)];
        for (int s = 0; s < al; ++s)
            acc = acc - binom(al, s) * (out.c[static_cast<std::size_t>(s)] *
                                        b.c[static_cast<std::size_t>(al - s)]);
        out.c[static_cast<std::size_t>(al)] = acc / b.c[0];
    }
    return out;
}

template <class R>
Jet<R> operator/(double s, const Jet<R>& b) {
    return Jet<R>::constant(b.order(), ring_constant_like(b.c[0], s)) / b;
}

// Free-function alias for the Leibniz product.
template <class R>
Jet<R> jet_mul(const Jet<R>& a, const Jet<R>& b) {
    return a * b;
}

template <class R>
Jet<R> jet_truncate(const Jet<R>& a, int order) {
    if (order > a.order()) throw std::invalid_argument("jet_truncate: order grows");
    Jet<R> out;
    out.c.assign(a.c.begin(), a.c.begin() + order + 1);
    return out;
}

// d/dt in the derivative convention is a pure left shift of coefficients.
template <class R>
Jet<R> jet_derivative(const Jet<R>& a, int times = 1) {
    if (a.order() < times) throw std::invalid_argument("jet_derivative: order too low");
    Jet<R> out;
    out.c.assign(a.c.begin() + times, a.c.end());
    return out;
}

// Value of the truncated expansion at offset dt from the expansion point.
template <class R>
R jet_eval_poly(const Jet<R>& a, double dt) {
    // Horner on Taylor-normalized coefficients.
    const int K = a.order();
    R acc = a.c[static_cast<std::size_t>(K)] * (1.0 / factorial(K));
    for (int s = K - 1; s >= 0; --s)
        acc = acc * dt + a.c[static_cast<std::size_t>(s)] * (1.0 / factorial(s));
    return acc;
}

// ---------------------------------------------------------------------------
// Transcendental functions via univariate Taylor recurrences.
// Internally the coefficients are rescaled to Taylor normalization
// (t[a] = c[a]/a!), the standard recurrences are run there, and the result is
// scaled back.  Constant terms delegate to the coefficient ring, so order-0
// jets reproduce scalar evaluation bit for bit.
// ---------------------------------------------------------------------------

namespace detail {

template <class R>
std::vector<R> to_taylor(const Jet<R>& a) {
    std::vector<R> t = a.c;
    for (int i = 2; i < static_cast<int>(t.size()); ++i)
        t[static_cast<std::size_t>(i)] =
            t[static_cast<std::size_t>(i)] * (1.0 / factorial(i));
    return t;
}

template <class R>
Jet<R> from_taylor(std::vector<R> t) {
    for (int i = 2; i < static_cast<int>(t.size()); ++i)
        t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i)] * factorial(i);
    return Jet<R>(std::move(t));
}

} // namespace detail

template <class R>
Jet<R> exp(const Jet<R>& a) {
    using std::exp;
    const int K = a.order();
    auto at = detail::to_taylor(a);
    std::vector<R> g(at.size(), ring_constant_like(a.c[0], 0.0));
    g[0] = exp(at[0]);
    for (int k = 1; k <= K; ++k) {
        R acc = ring_constant_like(a.c[0], 0.0);
        for (int j = 1; j <= k; ++j)
            acc = acc + static_cast<double>(j) *
                            (at[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k - j)]);
        g[static_cast<std::size_t>(k)] = acc * (1.0 / k);
    }
    return detail::from_taylor(std::move(g));
}

template <class R>
Jet<R> log(const Jet<R>& a) {
    using std::log;
    if (leading_value(a.c[0]) <= 0.0)
        throw std::domain_error("log of value with non-positive constant term");
    const int K = a.order();
    auto at = detail::to_taylor(a);
    std::vector<R> g(at.size(), ring_constant_like(a.c[0], 0.0));
    g[0] = log(at[0]);
    for (int k = 1; k <= K; ++k) {
        R acc = at[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j)
            acc = acc - (static_cast<double>(j) / k) *
                            (g[static_cast<std::size_t>(j)] * at[static_cast<std::size_t>(k - j)]);
        g[static_cast<std::size_t>(k)] = acc / at[0];
    }
    return detail::from_taylor(std::move(g));
}

// sin and cos share one coupled recurrence; both entry points use it.
template <class R>
void sincos(const Jet<R>& a, Jet<R>& s_out, Jet<R>& c_out) {
    using std::cos;
    using std::sin;
    const int K = a.order();
    auto at = detail::to_taylor(a);
    std::vector<R> s(at.size(), ring_constant_like(a.c[0], 0.0));
    std::vector<R> c(at.size(), ring_constant_like(a.c[0], 0.0));
    s[0] = sin(at[0]);
    c[0] = cos(at[0]);
    for (int k = 1; k <= K; ++k) {
        R sa = ring_constant_like(a.c[0], 0.0);
        R ca = ring_constant_like(a.c[0], 0.0);
        for (int j = 1; j <= k; ++j) {
            const double w = static_cast<double>(j) / k;
            sa = sa + w * (at[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(k - j)]);
            ca = ca - w * (at[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(k - j)]);
        }
        s[static_cast<std::size_t>(k)] = sa;
        c[static_cast<std::size_t>(k)] = ca;
    }
    s_out = detail::from_taylor(std::move(s));
    c_out = detail::from_taylor(std::move(c));
}

template <class R>
Jet<R> sin(const Jet<R>& a) {
    Jet<R> s, c;
    sincos(a, s, c);
    return s;
}

template <class R>
Jet<R> cos(const Jet<R>& a) {
    Jet<R> s, c;
    sincos(a, s, c);
    return c;
}

template <class R>
Jet<R> sqrt(const Jet<R>& a) {
    using std::sqrt;
    const double lead = leading_value(a.c[0]);
    if (lead < 0.0 || (lead == 0.0 && a.order() >= 1))
        throw std::domain_error("sqrt of value with non-positive constant term");
    const int K = a.order();
    auto at = detail::to_taylor(a);
    std::vector<R> g(at.size(), ring_constant_like(a.c[0], 0.0));
    g[0] = sqrt(at[0]);
    for (int k = 1; k <= K; ++k) {
        R acc = at[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j)
            acc = acc - g[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k - j)];
        g[static_cast<std::size_t>(k)] = acc / (2.0 * g[0]);
    }
    return detail::from_taylor(std::move(g));
}

template <class R>
Jet<R> tanh(const Jet<R>& a) {
    using std::tanh;
    const int K = a.order();
    auto at = detail::to_taylor(a);
    std::vector<R> g(at.size(), ring_constant_like(a.c[0], 0.0));
    std::vector<R> w(at.size(), ring_constant_like(a.c[0], 0.0)); // w = g^2
    g[0] = tanh(at[0]);
    w[0] = g[0] * g[0];
    for (int k = 1; k <= K; ++k) {
        // g' = (1 - g^2) a'
        R acc = ring_constant_like(a.c[0], 0.0);
        for (int j = 1; j <= k; ++j) {
            const double wgt = static_cast<double>(j) / k;
            R term = at[static_cast<std::size_t>(j)];
            if (k - j == 0)
                term = term - at[static_cast<std::size_t>(j)] * w[0];
            else
                term = -(at[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k - j)]);
            // note: for k-j == 0 the bracket is a[j]*(1 - w[0])
            acc = acc + wgt * term;
        }
        g[static_cast<std::size_t>(k)] = acc;
        // extend w = g*g to order k
        R wk = ring_constant_like(a.c[0], 0.0);
        for (int j = 0; j <= k; ++j)
            wk = wk + g[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k - j)];
        w[static_cast<std::size_t>(k)] = wk;
    }
    return detail::from_taylor(std::move(g));
}

// Integer powers by repeated squaring (valid for any constant term; the same
// routine is used for scalar evaluation so order-0 jets match bitwise).
template <class R>
R pow_int(const R& base, long long n) {
    if (n == 0) return ring_constant_like(base, 1.0);
    if (n < 0) return ring_constant_like(base, 1.0) / pow_int(base, -n);
    R acc = ring_constant_like(base, 1.0);
    R sq = base;
    long long m = n;
    bool acc_set = false;
    while (m > 0) {
        if (m & 1) {
            acc = acc_set ? acc * sq : sq;
            acc_set = true;
        }
        m >>= 1;
        if (m) sq = sq * sq;
    }
    return acc;
}

// Real power through the a^p recurrence; requires positive constant term.
template <class R>
Jet<R> pow(const Jet<R>& a, double p) {
    using std::pow;
    if (p == std::floor(p) && std::abs(p) <= 1024.0)
        return pow_int(a, static_cast<long long>(p));
    if (leading_value(a.c[0]) <= 0.0)
        throw std::domain_error("pow with non-integer exponent needs positive base");
    const int K = a.order();
    auto at = detail::to_taylor(a);
    std::vector<R> g(at.size(), ring_constant_like(a.c[0], 0.0));
    g[0] = pow(at[0], p);
    for (int k = 1; k <= K; ++k) {
        R acc = ring_constant_like(a.c[0], 0.0);
        for (int j = 1; j <= k; ++j)
            acc = acc + ((p + 1.0) * j - k) *
                            (at[static_cast<std::size_t>(j)] * g[static_cast<std::size_t>(k - j)]);
        g[static_cast<std::size_t>(k)] = (acc * (1.0 / k)) / at[0];
    }
    return detail::from_taylor(std::move(g));
}

// General power with jet exponent: integer-constant exponents use repeated
// squaring, everything else goes through exp(p*log(b)).
template <class R>
Jet<R> pow(const Jet<R>& base, const Jet<R>& expo) {
    if (ring_is_constant(expo)) {
        const double p = leading_value(expo.c[0]);
        return pow(base, p);
    }
    return exp(expo * log(base));
}

// ---------------------------------------------------------------------------
// Composition conveniences
// ---------------------------------------------------------------------------

// Jet of t |-> f(curve(t)) for a callable evaluable on jet arguments.
template <class R, class F>
Jet<R> jet_compose(F&& f, const JetPoint<R>& a) {
    if (a.empty()) throw std::invalid_argument("jet_compose: empty point");
    for (const auto& comp : a) detail::require_same_order(a.front(), comp, "jet_compose");
    Jet<R> out = f(a);
    for (const auto& x : out.c)
        if (!std::isfinite(leading_value(x)))
            throw std::runtime_error("jet_compose: non-finite coefficient");
    return out;
}

// d/ds|_0 f(x + s v) via an order-1 seed.
template <class F>
double directional_derivative(F&& f, const std::vector<double>& x,
                              const std::vector<double>& v) {
    if (x.size() != v.size())
        throw std::invalid_argument("directional_derivative: dimension mismatch");
    JetPoint<double> seeds;
    seeds.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        seeds.push_back(Jet<double>(std::vector<double>{x[i], v[i]}));
    Jet<double> out = f(seeds);
    return out.c[1];
}

} // namespace alvc
