#include "dvrforms/ring.hpp"

#include <algorithm>
#include <sstream>

namespace dvrforms {

namespace {

bool is_odd_prime(std::int64_t p) {
    if (p < 3 || p % 2 == 0) return false;
    for (std::int64_t d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

std::int64_t mod_p(std::int64_t v, std::int64_t p) {
    v %= p;
    return v < 0 ? v + p : v;
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t p) {
    std::int64_t r = 1;
    base = mod_p(base, p);
    while (exp > 0) {
        if (exp & 1) r = r * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return r;
}

std::int64_t least_nonresidue(std::int64_t p) {
    for (std::int64_t n = 2; n < p; ++n)
        if (pow_mod(n, (p - 1) / 2, p) == p - 1) return n;
    return 0; // unreachable for odd prime p
}

Int mod_pk(Int v, const Int& pk) {
    v %= pk;
    if (v < 0) v += pk;
    return v;
}

// Balanced lift into (-p^K/2, p^K/2).
Int balanced(const Int& v, const Int& pk, const Int& half) {
    return v > half ? v - pk : v;
}

int int_valuation(Int v, std::int64_t p, int cap) {
    // v != 0; number of times p divides v, capped.
    int k = 0;
    while (k < cap && v % p == 0) {
        v /= p;
        ++k;
    }
    return k;
}

// Extended gcd inverse of a mod m (gcd must be 1).
Int mod_inverse(const Int& a, const Int& m) {
    Int old_r = mod_pk(a, m), r = m;
    Int old_s = 1, s = 0;
    while (r != 0) {
        Int q = old_r / r;
        Int tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw NotAUnit("element has no inverse modulo p^K");
    return mod_pk(old_s, m);
}

} // namespace

const char* ring_kind_name(RingKind k) {
    switch (k) {
        case RingKind::series_trivial: return "series-trivial";
        case RingKind::series_ramified: return "series-ramified";
        case RingKind::series_unramified: return "series-unramified";
        case RingKind::padic_trivial: return "padic-trivial";
        case RingKind::padic_ramified: return "padic-ramified";
        case RingKind::padic_unramified: return "padic-unramified";
    }
    return "?";
}

bool parse_ring_kind(const std::string& s, RingKind& out) {
    for (RingKind k : {RingKind::series_trivial, RingKind::series_ramified,
                       RingKind::series_unramified, RingKind::padic_trivial,
                       RingKind::padic_ramified, RingKind::padic_unramified}) {
        if (s == ring_kind_name(k)) {
            out = k;
            return true;
        }
    }
    return false;
}

Ring::Ring(RingKind kind, std::int64_t p, std::int64_t nu, int precision)
    : kind_(kind), p_(p), nu_(nu), precision_(precision) {
    switch (kind_) {
        case RingKind::padic_trivial:
        case RingKind::padic_unramified:
            kpow_ = precision_;
            break;
        case RingKind::padic_ramified:
            kpow_ = precision_ / 2; // N_v = 2K
            break;
        default:
            kpow_ = precision_;
            break;
    }
    pk_ = 1;
    if (is_padic())
        for (int i = 0; i < kpow_; ++i) pk_ *= p_;
    half_ = (pk_ - 1) / 2;
}

RingPtr Ring::make(RingKind kind, std::int64_t p, int precision) {
    if (p == 2) throw Error("p = 2 rejected: 2 must be a unit of the ring");
    if (!is_odd_prime(p)) throw Error("p must be an odd prime, got " + std::to_string(p));
    if (p >= (1 << 15)) throw Error("p too large (must be < 2^15)");
    if (precision < 2) throw Error("precision must be at least 2");
    if (kind == RingKind::padic_ramified && precision % 2 != 0)
        ++precision; // N_v = 2K: round odd precisions up
    return RingPtr(new Ring(kind, p, least_nonresidue(p), precision));
}

InvolutionClass Ring::involution_class() const {
    switch (kind_) {
        case RingKind::series_trivial:
        case RingKind::padic_trivial:
            return InvolutionClass::trivial;
        case RingKind::series_ramified:
        case RingKind::padic_ramified:
            return InvolutionClass::ramified_nontrivial;
        default:
            return InvolutionClass::unramified;
    }
}

bool Ring::is_series() const {
    return kind_ == RingKind::series_trivial || kind_ == RingKind::series_ramified ||
           kind_ == RingKind::series_unramified;
}

RingPtr Ring::with_precision(int precision) const {
    return make(kind_, p_, precision);
}

std::string Ring::describe() const {
    std::ostringstream os;
    os << ring_kind_name(kind_) << " p=" << p_ << " precision=" << precision_;
    return os.str();
}

// --- element constructors ---

RingElement Ring::zero() const {
    RingElement e(shared_from_this());
    e.exact_ = true;
    e.reduce();
    return e;
}

RingElement Ring::one() const { return from_int(1); }

RingElement Ring::from_int(std::int64_t v) const { return from_integer(Int(v)); }

RingElement Ring::from_integer(const Int& v) const {
    RingElement e(shared_from_this());
    if (is_series()) {
        std::int64_t c = (std::int64_t)mod_pk(v, Int(p_)).convert_to<std::int64_t>();
        if (c != 0) e.ca_.assign(1, c);
        e.exact_ = true; // constants of F_p are known exactly
    } else {
        e.pa_ = mod_pk(v, pk_);
        // Exact iff v itself is the balanced representative.
        e.exact_ = (v >= -half_ && v <= half_);
    }
    e.reduce();
    return e;
}

RingElement Ring::uniformiser() const { return uniformiser_power(1); }

RingElement Ring::uniformiser_power(int k) const {
    if (k < 0) throw Error("uniformiser_power: negative exponent");
    return one().times_uniformiser(k);
}

RingElement Ring::nu_element() const { return from_int(nu_); }

RingElement Ring::skew_unit() const {
    if (!unramified()) throw WrongInstance("skew unit b exists only for unramified instances");
    RingElement e(shared_from_this());
    if (kind_ == RingKind::series_unramified) {
        e.ca_.assign(1, 0);
        e.cb_.assign(1, 1);
    } else {
        e.pb_ = 1;
    }
    e.exact_ = true;
    e.reduce();
    return e;
}

RingElement Ring::from_series(const std::vector<std::int64_t>& coeffs) const {
    if (kind_ != RingKind::series_trivial && kind_ != RingKind::series_ramified)
        throw WrongInstance("from_series requires a prime-residue series ring");
    if ((int)coeffs.size() > precision_)
        throw PrecisionExhausted("series literal has coefficients beyond the working precision",
                                 (int)coeffs.size());
    RingElement e(shared_from_this());
    e.ca_.resize(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) e.ca_[i] = mod_p(coeffs[i], p_);
    e.exact_ = true;
    e.reduce();
    return e;
}

RingElement Ring::from_series_pairs(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& coeffs) const {
    if (kind_ != RingKind::series_unramified)
        throw WrongInstance("from_series_pairs requires the series-unramified ring");
    if ((int)coeffs.size() > precision_)
        throw PrecisionExhausted("series literal has coefficients beyond the working precision",
                                 (int)coeffs.size());
    RingElement e(shared_from_this());
    e.ca_.resize(coeffs.size());
    e.cb_.resize(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        e.ca_[i] = mod_p(coeffs[i].first, p_);
        e.cb_[i] = mod_p(coeffs[i].second, p_);
    }
    e.exact_ = true;
    e.reduce();
    return e;
}

RingElement Ring::from_pair(const Int& a, const Int& b) const {
    if (kind_ != RingKind::padic_ramified && kind_ != RingKind::padic_unramified)
        throw WrongInstance("from_pair requires a quadratic padic ring");
    RingElement e(shared_from_this());
    e.pa_ = mod_pk(a, pk_);
    e.pb_ = mod_pk(b, pk_);
    e.exact_ = (a >= -half_ && a <= half_ && b >= -half_ && b <= half_);
    e.reduce();
    return e;
}

// --- RingElement ---

void RingElement::reduce() {
    while (!ca_.empty() && ca_.back() == 0) ca_.pop_back();
    while (!cb_.empty() && cb_.back() == 0) cb_.pop_back();
}

bool RingElement::payload_zero() const {
    if (ring_->is_series()) return ca_.empty() && cb_.empty();
    return pa_ == 0 && pb_ == 0;
}

int RingElement::series_degree() const {
    int d = -1;
    int n = (int)std::max(ca_.size(), cb_.size());
    for (int i = 0; i < n; ++i)
        if (series_coeff_a(i) != 0 || series_coeff_b(i) != 0) d = i;
    return d;
}

void RingElement::check_same(const RingElement& x, const RingElement& y) {
    if (!x.ring_ || !y.ring_) throw DescriptorMismatch("uninitialised ring element");
    if (!x.ring_->same_ring(*y.ring_))
        throw DescriptorMismatch("operands from different rings: " + x.ring_->describe() +
                                 " vs " + y.ring_->describe());
}

RingElement operator+(const RingElement& x, const RingElement& y) {
    RingElement::check_same(x, y);
    if (x.is_exact_zero()) return y;
    if (y.is_exact_zero()) return x;
    const Ring& R = *x.ring_;
    RingElement r(x.ring_);
    if (R.is_series()) {
        std::size_t n = std::max({x.ca_.size(), y.ca_.size(), x.cb_.size(), y.cb_.size()});
        r.ca_.resize(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            r.ca_[i] = mod_p(x.series_coeff_a((int)i) + y.series_coeff_a((int)i), R.p());
        if (R.kind() == RingKind::series_unramified) {
            r.cb_.resize(n, 0);
            for (std::size_t i = 0; i < n; ++i)
                r.cb_[i] = mod_p(x.series_coeff_b((int)i) + y.series_coeff_b((int)i), R.p());
        }
        r.exact_ = x.exact_ && y.exact_;
    } else {
        r.pa_ = mod_pk(x.pa_ + y.pa_, R.p_to_k());
        r.pb_ = mod_pk(x.pb_ + y.pb_, R.p_to_k());
        if (x.exact_ && y.exact_) {
            Int sa = balanced(x.pa_, R.p_to_k(), R.balanced_bound()) + balanced(y.pa_, R.p_to_k(), R.balanced_bound());
            Int sb = balanced(x.pb_, R.p_to_k(), R.balanced_bound()) + balanced(y.pb_, R.p_to_k(), R.balanced_bound());
            r.exact_ = (abs(sa) <= R.balanced_bound() && abs(sb) <= R.balanced_bound());
        }
    }
    r.reduce();
    return r;
}

RingElement operator-(const RingElement& x, const RingElement& y) { return x + (-y); }

RingElement RingElement::operator-() const {
    if (is_exact_zero()) return *this;
    const Ring& R = *ring_;
    RingElement r(ring_);
    if (R.is_series()) {
        r.ca_.resize(ca_.size());
        for (std::size_t i = 0; i < ca_.size(); ++i) r.ca_[i] = mod_p(-ca_[i], R.p());
        if (!cb_.empty()) {
            r.cb_.resize(cb_.size());
            for (std::size_t i = 0; i < cb_.size(); ++i) r.cb_[i] = mod_p(-cb_[i], R.p());
        }
    } else {
        r.pa_ = mod_pk(-pa_, R.p_to_k());
        r.pb_ = mod_pk(-pb_, R.p_to_k());
    }
    r.exact_ = exact_;
    r.reduce();
    return r;
}

RingElement operator*(const RingElement& x, const RingElement& y) {
    RingElement::check_same(x, y);
    const Ring& R = *x.ring_;
    // 0 * anything = 0 exactly: A is a domain.
    if (x.is_exact_zero() || y.is_exact_zero()) return R.zero();
    RingElement r(x.ring_);
    if (R.is_series()) {
        int n = R.precision();
        int dx = x.series_degree(), dy = y.series_degree();
        if (dx < 0 || dy < 0) {
            // payload zero but not exact: product payload zero, inexact
            r.exact_ = false;
            return r;
        }
        int dr = std::min(dx + dy, n - 1);
        r.ca_.assign(dr + 1, 0);
        const std::int64_t p = R.p();
        if (R.kind() != RingKind::series_unramified) {
            for (int i = 0; i <= dr; ++i) {
                std::int64_t acc = 0;
                for (int j = std::max(0, i - dy); j <= std::min(i, dx); ++j)
                    acc += x.series_coeff_a(j) * y.series_coeff_a(i - j);
                r.ca_[i] = mod_p(acc, p);
            }
        } else {
            r.cb_.assign(dr + 1, 0);
            const std::int64_t nu = R.nu();
            for (int i = 0; i <= dr; ++i) {
                std::int64_t acc_a = 0, acc_b = 0;
                for (int j = std::max(0, i - dy); j <= std::min(i, dx); ++j) {
                    std::int64_t xa = x.series_coeff_a(j), xb = x.series_coeff_b(j);
                    std::int64_t ya = y.series_coeff_a(i - j), yb = y.series_coeff_b(i - j);
                    acc_a += xa * ya + nu * (xb * yb % p);
                    acc_b += xa * yb + xb * ya;
                }
                r.ca_[i] = mod_p(acc_a, p);
                r.cb_[i] = mod_p(acc_b, p);
            }
        }
        r.exact_ = x.exact_ && y.exact_ && (dx + dy < n);
    } else {
        Int xa = x.pa_, xb = x.pb_, ya = y.pa_, yb = y.pb_;
        Int ca, cb;
        if (R.kind() == RingKind::padic_trivial) {
            ca = xa * ya;
            cb = 0;
        } else if (R.kind() == RingKind::padic_ramified) {
            // (a + b*y)(c + d*y) with y^2 = p
            ca = xa * ya + R.p() * (xb * yb);
            cb = xa * yb + xb * ya;
        } else {
            // (a + b*t)(c + d*t) with t^2 = nu
            ca = xa * ya + R.nu() * (xb * yb);
            cb = xa * yb + xb * ya;
        }
        r.pa_ = mod_pk(ca, R.p_to_k());
        r.pb_ = mod_pk(cb, R.p_to_k());
        if (x.exact_ && y.exact_) {
            Int bxa = balanced(xa, R.p_to_k(), R.balanced_bound()), bxb = balanced(xb, R.p_to_k(), R.balanced_bound());
            Int bya = balanced(ya, R.p_to_k(), R.balanced_bound()), byb = balanced(yb, R.p_to_k(), R.balanced_bound());
            Int ea, eb;
            if (R.kind() == RingKind::padic_trivial) {
                ea = bxa * bya;
                eb = 0;
            } else if (R.kind() == RingKind::padic_ramified) {
                ea = bxa * bya + R.p() * (bxb * byb);
                eb = bxa * byb + bxb * bya;
            } else {
                ea = bxa * bya + R.nu() * (bxb * byb);
                eb = bxa * byb + bxb * bya;
            }
            r.exact_ = (abs(ea) <= R.balanced_bound() && abs(eb) <= R.balanced_bound());
        }
    }
    r.reduce();
    return r;
}

RingElement RingElement::involute() const {
    const Ring& R = *ring_;
    RingElement r = *this;
    switch (R.kind()) {
        case RingKind::series_trivial:
        case RingKind::padic_trivial:
            break;
        case RingKind::series_ramified:
            for (std::size_t i = 1; i < r.ca_.size(); i += 2) r.ca_[i] = mod_p(-r.ca_[i], R.p());
            break;
        case RingKind::series_unramified:
            for (auto& c : r.cb_) c = mod_p(-c, R.p());
            break;
        case RingKind::padic_ramified:
        case RingKind::padic_unramified:
            r.pb_ = mod_pk(-r.pb_, R.p_to_k());
            break;
    }
    r.reduce();
    return r;
}

Valuation RingElement::valuation() const {
    const Ring& R = *ring_;
    if (payload_zero())
        return exact_ ? Valuation::infinite_val() : Valuation::at_least_bound(R.precision());
    if (R.is_series()) {
        int n = (int)std::max(ca_.size(), cb_.size());
        for (int i = 0; i < n; ++i)
            if (series_coeff_a(i) != 0 || series_coeff_b(i) != 0) return Valuation::finite(i);
        return Valuation::at_least_bound(R.precision());
    }
    switch (R.kind()) {
        case RingKind::padic_trivial:
            return Valuation::finite(int_valuation(pa_, R.p(), R.p_power()));
        case RingKind::padic_ramified: {
            // val(a + b*sqrt(p)) = min(2 v_p(a), 2 v_p(b) + 1)
            int v = R.precision();
            if (pa_ != 0) v = std::min(v, 2 * int_valuation(pa_, R.p(), R.p_power()));
            if (pb_ != 0) v = std::min(v, 2 * int_valuation(pb_, R.p(), R.p_power()) + 1);
            return Valuation::finite(v);
        }
        default: {
            // padic_unramified, valuation counted in powers of p
            int v = R.precision();
            if (pa_ != 0) v = std::min(v, int_valuation(pa_, R.p(), R.p_power()));
            if (pb_ != 0) v = std::min(v, int_valuation(pb_, R.p(), R.p_power()));
            return Valuation::finite(v);
        }
    }
}

RingElement RingElement::invert() const {
    const Ring& R = *ring_;
    Valuation v = valuation();
    if (!v.is_finite() || v.value != 0)
        throw NotAUnit("invert: element is not a unit (valuation " +
                       (v.is_finite() ? std::to_string(v.value)
                                      : std::string(v.is_infinite() ? "infinite" : "unknown at precision")) +
                       ")");
    RingElement r(ring_);
    if (R.is_series()) {
        const int n = R.precision();
        const std::int64_t p = R.p();
        if (R.kind() != RingKind::series_unramified) {
            // power series inversion by the standard recurrence
            std::int64_t c0inv = pow_mod(ca_[0], p - 2, p);
            r.ca_.assign(n, 0);
            r.ca_[0] = c0inv;
            for (int k = 1; k < n; ++k) {
                std::int64_t acc = 0;
                for (int j = 1; j <= k; ++j) acc += series_coeff_a(j) * r.ca_[k - j] % p;
                r.ca_[k] = mod_p(-acc % p * c0inv, p);
            }
            r.exact_ = exact_ && series_degree() == 0;
        } else {
            // coefficients in F_{p^2}
            const std::int64_t nu = R.nu();
            auto f2mul = [&](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
                return std::pair<std::int64_t, std::int64_t>{
                    mod_p(a * c % p + nu * (b * d % p), p), mod_p(a * d + b * c, p)};
            };
            std::int64_t a0 = series_coeff_a(0), b0 = series_coeff_b(0);
            std::int64_t norm = mod_p(a0 * a0 - nu * (b0 * b0 % p), p);
            std::int64_t ninv = pow_mod(norm, p - 2, p);
            std::pair<std::int64_t, std::int64_t> inv0{mod_p(a0 * ninv, p), mod_p(-b0 * ninv, p)};
            r.ca_.assign(n, 0);
            r.cb_.assign(n, 0);
            r.ca_[0] = inv0.first;
            r.cb_[0] = inv0.second;
            for (int k = 1; k < n; ++k) {
                std::int64_t acc_a = 0, acc_b = 0;
                for (int j = 1; j <= k; ++j) {
                    auto t = f2mul(series_coeff_a(j), series_coeff_b(j), r.ca_[k - j], r.cb_[k - j]);
                    acc_a += t.first;
                    acc_b += t.second;
                }
                auto t = f2mul(mod_p(-acc_a, p), mod_p(-acc_b, p), inv0.first, inv0.second);
                r.ca_[k] = t.first;
                r.cb_[k] = t.second;
            }
            r.exact_ = exact_ && series_degree() == 0;
        }
    } else if (R.kind() == RingKind::padic_trivial) {
        r.pa_ = mod_inverse(pa_, R.p_to_k());
        Int b = balanced(pa_, R.p_to_k(), R.balanced_bound());
        r.exact_ = exact_ && (b == 1 || b == -1);
    } else {
        // conjugate trick: 1/x = x* / (x x*), with x x* = a^2 - c b^2 in Z_p
        Int c = (R.kind() == RingKind::padic_ramified) ? Int(R.p()) : Int(R.nu());
        Int norm = mod_pk(pa_ * pa_ - c * pb_ * pb_, R.p_to_k());
        Int ninv = mod_inverse(norm, R.p_to_k());
        r.pa_ = mod_pk(pa_ * ninv, R.p_to_k());
        r.pb_ = mod_pk(-pb_ * ninv, R.p_to_k());
        Int ba = balanced(pa_, R.p_to_k(), R.balanced_bound());
        r.exact_ = exact_ && pb_ == 0 && (ba == 1 || ba == -1);
    }
    r.reduce();
    return r;
}

RingElement RingElement::divide_by_uniformiser(int k) const {
    if (k < 0) throw Error("divide_by_uniformiser: negative k");
    if (k == 0) return *this;
    const Ring& R = *ring_;
    if (is_exact_zero()) return *this;
    Valuation v = valuation();
    if (v.is_finite() && v.value < k)
        throw InsufficientValuation("divide_by_uniformiser: valuation " +
                                    std::to_string(v.value) + " < " + std::to_string(k));
    if (!v.at_least_certified(k))
        throw InsufficientValuation("divide_by_uniformiser: valuation not certified >= " +
                                    std::to_string(k));
    RingElement r(ring_);
    switch (R.kind()) {
        case RingKind::series_trivial:
        case RingKind::series_ramified: {
            if ((int)ca_.size() > k) r.ca_.assign(ca_.begin() + k, ca_.end());
            r.exact_ = exact_;
            break;
        }
        case RingKind::series_unramified: {
            // y = t*x: divide by x^k and by t^k
            int top = series_degree();
            if (top >= k) {
                r.ca_.assign(top - k + 1, 0);
                r.cb_.assign(top - k + 1, 0);
                for (int i = k; i <= top; ++i) {
                    r.ca_[i - k] = series_coeff_a(i);
                    r.cb_[i - k] = series_coeff_b(i);
                }
            }
            // multiply coefficientwise by t^{-k} = nu^{-k} t^k
            const std::int64_t p = R.p(), nu = R.nu();
            std::int64_t nuinv = pow_mod(nu, p - 2, p);
            std::int64_t scale = pow_mod(nuinv, k, p);       // nu^{-k}
            std::int64_t tpow_a = (k % 2 == 0) ? pow_mod(nu, k / 2, p) : 0;
            std::int64_t tpow_b = (k % 2 == 0) ? 0 : pow_mod(nu, k / 2, p); // t^k
            std::int64_t fa = mod_p(scale * tpow_a, p), fb = mod_p(scale * tpow_b, p);
            for (std::size_t i = 0; i < r.ca_.size(); ++i) {
                std::int64_t a = r.ca_[i], b = r.cb_[i];
                r.ca_[i] = mod_p(fa * a % p + nu * (fb * b % p), p);
                r.cb_[i] = mod_p(fa * b + fb * a, p);
            }
            r.exact_ = exact_;
            break;
        }
        case RingKind::padic_trivial: {
            Int b = exact_ ? balanced(pa_, R.p_to_k(), R.balanced_bound()) : pa_;
            for (int i = 0; i < k; ++i) b /= R.p();
            r.pa_ = mod_pk(b, R.p_to_k());
            r.exact_ = exact_;
            break;
        }
        case RingKind::padic_ramified: {
            // (a + b*y)/y = b + (a/p)*y
            Int a = exact_ ? balanced(pa_, R.p_to_k(), R.balanced_bound()) : pa_;
            Int b = exact_ ? balanced(pb_, R.p_to_k(), R.balanced_bound()) : pb_;
            for (int i = 0; i < k; ++i) {
                Int na = b, nb = a / R.p();
                a = na;
                b = nb;
            }
            r.pa_ = mod_pk(a, R.p_to_k());
            r.pb_ = mod_pk(b, R.p_to_k());
            r.exact_ = exact_;
            break;
        }
        case RingKind::padic_unramified: {
            // y = t*p: x/y = (b/p) + ((a/p) nu^{-1}) t
            Int a = exact_ ? balanced(pa_, R.p_to_k(), R.balanced_bound()) : pa_;
            Int b = exact_ ? balanced(pb_, R.p_to_k(), R.balanced_bound()) : pb_;
            bool still_exact = exact_;
            Int nuinv = mod_inverse(Int(R.nu()), R.p_to_k());
            for (int i = 0; i < k; ++i) {
                Int na = b / R.p();
                Int ap = a / R.p();
                Int nb;
                if (still_exact && ap % R.nu() == 0) {
                    nb = ap / R.nu();
                } else {
                    nb = mod_pk(ap * nuinv, R.p_to_k());
                    still_exact = false;
                }
                a = na;
                b = nb;
            }
            r.pa_ = mod_pk(a, R.p_to_k());
            r.pb_ = mod_pk(b, R.p_to_k());
            r.exact_ = still_exact && abs(a) <= R.balanced_bound() && abs(b) <= R.balanced_bound();
            break;
        }
    }
    r.reduce();
    return r;
}

RingElement RingElement::times_uniformiser(int k) const {
    if (k < 0) throw Error("times_uniformiser: negative k");
    if (k == 0 || is_exact_zero()) return *this;
    const Ring& R = *ring_;
    RingElement r(ring_);
    switch (R.kind()) {
        case RingKind::series_trivial:
        case RingKind::series_ramified: {
            int n = R.precision();
            int d = series_degree();
            if (d < 0) {
                r.exact_ = false;
                break;
            }
            int top = std::min(d + k, n - 1);
            r.ca_.assign(top + 1, 0);
            for (int i = 0; i <= d && i + k <= top; ++i) r.ca_[i + k] = ca_[i];
            r.exact_ = exact_ && (d + k < n);
            break;
        }
        case RingKind::series_unramified: {
            int n = R.precision();
            int d = series_degree();
            if (d < 0) {
                r.exact_ = false;
                break;
            }
            const std::int64_t p = R.p(), nu = R.nu();
            std::int64_t tp_a = (k % 2 == 0) ? pow_mod(nu, k / 2, p) : 0;
            std::int64_t tp_b = (k % 2 == 0) ? 0 : pow_mod(nu, k / 2, p); // t^k
            int top = std::min(d + k, n - 1);
            r.ca_.assign(top + 1, 0);
            r.cb_.assign(top + 1, 0);
            for (int i = 0; i <= d && i + k <= top; ++i) {
                std::int64_t a = series_coeff_a(i), b = series_coeff_b(i);
                r.ca_[i + k] = mod_p(tp_a * a % p + nu * (tp_b * b % p), p);
                r.cb_[i + k] = mod_p(tp_a * b + tp_b * a, p);
            }
            r.exact_ = exact_ && (d + k < n);
            break;
        }
        case RingKind::padic_trivial: {
            Int f = 1;
            for (int i = 0; i < k; ++i) f *= R.p();
            return *this * R.from_integer(f);
        }
        case RingKind::padic_ramified: {
            Int a = pa_, b = pb_;
            for (int i = 0; i < k; ++i) {
                Int na = mod_pk(b * R.p(), R.p_to_k()), nb = a;
                a = na;
                b = nb;
            }
            r.pa_ = a;
            r.pb_ = b;
            if (exact_) {
                Int ba = balanced(pa_, R.p_to_k(), R.balanced_bound()), bb = balanced(pb_, R.p_to_k(), R.balanced_bound());
                for (int i = 0; i < k; ++i) {
                    Int na = bb * R.p(), nb = ba;
                    ba = na;
                    bb = nb;
                }
                r.exact_ = abs(ba) <= R.balanced_bound() && abs(bb) <= R.balanced_bound();
            }
            break;
        }
        case RingKind::padic_unramified: {
            // multiply by (t*p)^k
            RingElement yk(ring_);
            std::int64_t p = R.p();
            Int pk1 = 1;
            for (int i = 0; i < k; ++i) pk1 *= p;
            Int nu_half = 1;
            for (int i = 0; i < k / 2; ++i) nu_half *= R.nu();
            if (k % 2 == 0) {
                yk.pa_ = mod_pk(pk1 * nu_half, R.p_to_k());
            } else {
                yk.pb_ = mod_pk(pk1 * nu_half, R.p_to_k());
            }
            yk.exact_ = (pk1 * nu_half <= R.balanced_bound());
            yk.reduce();
            return *this * yk;
        }
    }
    r.reduce();
    return r;
}

RingElement RingElement::symmetric_part() const {
    RingElement half = ring_->from_int(2).invert();
    return (*this + involute()) * half;
}

RingElement RingElement::skew_part() const {
    RingElement half = ring_->from_int(2).invert();
    return (*this - involute()) * half;
}

bool RingElement::is_symmetric() const { return payload_equal(involute()); }

bool RingElement::is_skew() const { return payload_equal(-involute()); }

bool RingElement::payload_equal(const RingElement& other) const {
    check_same(*this, other);
    if (ring_->is_series()) {
        std::size_t n = std::max({ca_.size(), other.ca_.size(), cb_.size(), other.cb_.size()});
        for (std::size_t i = 0; i < n; ++i)
            if (series_coeff_a((int)i) != other.series_coeff_a((int)i) ||
                series_coeff_b((int)i) != other.series_coeff_b((int)i))
                return false;
        return true;
    }
    return pa_ == other.pa_ && pb_ == other.pb_;
}

RingElement RingElement::change_ring(const RingPtr& target) const {
    const Ring& R = *ring_;
    const Ring& T = *target;
    if (R.kind() != T.kind() || R.p() != T.p())
        throw DescriptorMismatch("change_ring: incompatible instances");
    RingElement r(target);
    if (R.is_series()) {
        std::size_t n = (std::size_t)T.precision();
        r.ca_ = ca_;
        r.cb_ = cb_;
        bool dropped = false;
        if (r.ca_.size() > n) {
            for (std::size_t i = n; i < r.ca_.size(); ++i)
                if (r.ca_[i] != 0) dropped = true;
            r.ca_.resize(n);
        }
        if (r.cb_.size() > n) {
            for (std::size_t i = n; i < r.cb_.size(); ++i)
                if (r.cb_[i] != 0) dropped = true;
            r.cb_.resize(n);
        }
        r.exact_ = exact_ && !dropped;
    } else {
        if (exact_) {
            Int a = balanced(pa_, R.p_to_k(), R.balanced_bound());
            Int b = balanced(pb_, R.p_to_k(), R.balanced_bound());
            r.pa_ = mod_pk(a, T.pk_);
            r.pb_ = mod_pk(b, T.pk_);
            r.exact_ = (abs(a) <= T.half_ && abs(b) <= T.half_);
        } else {
            r.pa_ = mod_pk(pa_, T.pk_);
            r.pb_ = mod_pk(pb_, T.pk_);
            r.exact_ = false;
        }
    }
    r.reduce();
    return r;
}

std::string RingElement::to_string() const {
    const Ring& R = *ring_;
    std::ostringstream os;
    if (R.is_series()) {
        if (payload_zero()) return exact_ ? "0" : "O(y^N)";
        bool first = true;
        for (int i = 0; i < (int)std::max(ca_.size(), cb_.size()); ++i) {
            std::int64_t a = series_coeff_a(i), b = series_coeff_b(i);
            if (a == 0 && b == 0) continue;
            if (!first) os << " + ";
            first = false;
            if (R.kind() == RingKind::series_unramified) {
                os << "(" << a << "+" << b << "t)";
            } else {
                os << a;
            }
            if (i > 0) os << "*y^" << i;
        }
    } else {
        if (payload_zero()) return exact_ ? "0" : "O(p^K)";
        os << pa_;
        if (pb_ != 0) {
            os << " + " << pb_ << "*" << (R.kind() == RingKind::padic_ramified ? "y" : "t");
        }
    }
    return os.str();
}

} // namespace dvrforms
