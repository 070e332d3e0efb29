#include "tz/padic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>

#include "tz/arith.hpp"

namespace tz {

namespace {

constexpr long kExactPrec = 1L << 28;

Z zpow(long p, long n)
{
    Z r;
    mpz_ui_pow_ui(r.get_mpz_t(), (unsigned long)p, (unsigned long)n);
    return r;
}

Z zmod(const Z& a, const Z& n)
{
    Z r = a % n;
    if (r < 0) r += n;
    return r;
}

long vp(const Z& a, long p)
{
    if (a == 0) return kExactPrec;
    Z t = a;
    long v = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), (unsigned long)p)) {
        t /= p;
        ++v;
    }
    return v;
}

// ---- polynomials over F_p ----

using FPoly = std::vector<long>;

void ftrim(FPoly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

FPoly fmod_poly(FPoly a, const FPoly& h, long p)
{
    ftrim(a);
    long lead_inv = invmod(h.back(), p);
    int dh = (int)h.size() - 1;
    while ((int)a.size() - 1 >= dh) {
        long c = mod(a.back() * lead_inv, p);
        int s = (int)a.size() - 1 - dh;
        for (int j = 0; j <= dh; ++j) a[s + j] = mod(a[s + j] - c * h[j], p);
        ftrim(a);
    }
    return a;
}

FPoly fmulmod(const FPoly& a, const FPoly& b, const FPoly& h, long p)
{
    if (a.empty() || b.empty()) return {};
    FPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = mod(r[i + j] + a[i] * b[j], p);
    return fmod_poly(r, h, p);
}

FPoly fpowmod(FPoly a, Z e, const FPoly& h, long p)
{
    FPoly r{1};
    a = fmod_poly(a, h, p);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = fmulmod(r, a, h, p);
        a = fmulmod(a, a, h, p);
        e /= 2;
    }
    return r;
}

FPoly fgcd(FPoly a, FPoly b, long p)
{
    ftrim(a);
    ftrim(b);
    while (!b.empty()) {
        FPoly r = fmod_poly(a, b, p);
        a = b;
        b = r;
    }
    return a;
}

bool irreducible(const FPoly& h, long p)
{
    int f = (int)h.size() - 1;
    if (f == 1) return true;
    FPoly y{0, 1};
    auto frob_pow = [&](int k) { return fpowmod(y, zpow(p, k), h, p); };
    FPoly yq = frob_pow(f);
    FPoly d = yq;
    d.resize(std::max<size_t>(d.size(), 2), 0);
    d[1] = mod(d[1] - 1, p);
    ftrim(d);
    if (!d.empty()) return false;
    for (long l : prime_divisors(f)) {
        FPoly t = frob_pow(f / (int)l);
        t.resize(std::max<size_t>(t.size(), 2), 0);
        t[1] = mod(t[1] - 1, p);
        ftrim(t);
        FPoly g = fgcd(h, t, p);
        if (g.size() != 1) return false;
    }
    return true;
}

// least monic irreducible of degree f, ordered by sum c_j p^j
FPoly least_irreducible(long p, int f)
{
    if (f == 1) return {0, 1};
    long total = 1;
    for (int i = 0; i < f; ++i) total *= p;
    for (long t = 0; t < total; ++t) {
        FPoly h(f + 1, 0);
        long s = t;
        for (int j = 0; j < f; ++j) {
            h[j] = s % p;
            s /= p;
        }
        h[f] = 1;
        if (h[0] == 0) continue;
        if (irreducible(h, p)) return h;
    }
    throw std::runtime_error("no irreducible polynomial found");
}

// ---- O_H = Z_p[y]/(h) modulo p^n ----

using OH = std::vector<Z>;

OH oh_mul(const OH& a, const OH& b, const std::vector<Z>& h, const Z& mod_)
{
    int f = (int)a.size();
    if (f == 1) return {zmod(a[0] * b[0], mod_)};
    std::vector<Z> r(2 * f - 1, 0);
    for (int i = 0; i < f; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < f; ++j) r[i + j] += a[i] * b[j];
    }
    for (int d = 2 * f - 2; d >= f; --d) {
        if (r[d] == 0) continue;
        Z t = r[d];
        r[d] = 0;
        for (int j = 0; j < f; ++j) r[d - f + j] -= t * h[j];
    }
    OH out(f);
    for (int j = 0; j < f; ++j) out[j] = zmod(r[j], mod_);
    return out;
}

OH oh_pow(OH a, Z e, const std::vector<Z>& h, const Z& mod_)
{
    OH r(a.size(), 0);
    r[0] = 1;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = oh_mul(r, a, h, mod_);
        a = oh_mul(a, a, h, mod_);
        e /= 2;
    }
    return r;
}

// inverse of a unit of O_H modulo p^n
OH oh_inv(const OH& a, const std::vector<Z>& h, long p, long n)
{
    int f = (int)a.size();
    Z pz(p);
    OH abar(f);
    for (int j = 0; j < f; ++j) abar[j] = zmod(a[j], pz);
    Z q = zpow(p, f);
    OH z = oh_pow(abar, q - 2, h, pz);
    long prec = 1;
    while (prec < n) {
        prec = std::min(2 * prec, n);
        Z md = zpow(p, prec);
        OH az = oh_mul(a, z, h, md);
        OH two_minus(f);
        for (int j = 0; j < f; ++j) two_minus[j] = zmod(-az[j], md);
        two_minus[0] = zmod(two_minus[0] + 2, md);
        z = oh_mul(z, two_minus, h, md);
    }
    Z md = zpow(p, n);
    for (auto& x : z) x = zmod(x, md);
    return z;
}

// evaluate the polynomial with coefficients a (in y) at the O_H element t
OH oh_compose(const OH& a, const OH& t, const std::vector<Z>& h, const Z& mod_)
{
    int f = (int)a.size();
    OH r(f, 0);
    for (int j = f - 1; j >= 0; --j) {
        r = oh_mul(r, t, h, mod_);
        r[0] = zmod(r[0] + a[j], mod_);
    }
    return r;
}

OH frob_power_image(const LocalField& L, long a)
{
    a = mod(a, L.f);
    OH y(L.f, 0);
    if (L.f == 1) return OH{0};
    y[1] = 1;
    OH cur = y;
    for (long i = 0; i < a; ++i) cur = oh_compose(L.frob, cur, L.h, L.pcap);
    return cur;
}

void finish_field(LocalField& L)
{
    L.pcap = zpow(L.p, L.cap);
    FPoly hp = least_irreducible(L.p, L.f);
    L.h.assign(L.f, 0);
    for (int j = 0; j < L.f; ++j) L.h[j] = hp[j];
    L.frob.assign(L.f, 0);
    if (L.f == 1) return;
    // Newton for the root of h near y^p
    OH y(L.f, 0);
    y[1] = 1;
    OH z = oh_pow(y, L.p, L.h, L.pcap);
    std::vector<Z> hfull(L.h);
    hfull.push_back(1);
    std::vector<Z> dh(L.f, 0);
    for (int j = 1; j <= L.f; ++j) dh[j - 1] = hfull[j] * j;
    for (long it = 0; it < 2 * L.cap + 8; ++it) {
        // h(z) and h'(z)
        OH hz(L.f, 0), dz(L.f, 0);
        for (int j = L.f; j >= 0; --j) {
            hz = oh_mul(hz, z, L.h, L.pcap);
            hz[0] = zmod(hz[0] + hfull[j], L.pcap);
        }
        for (int j = L.f - 1; j >= 0; --j) {
            dz = oh_mul(dz, z, L.h, L.pcap);
            dz[0] = zmod(dz[0] + dh[j], L.pcap);
        }
        bool done = std::all_of(hz.begin(), hz.end(), [](const Z& v) { return v == 0; });
        if (done) break;
        OH corr = oh_mul(hz, oh_inv(dz, L.h, L.p, L.cap), L.h, L.pcap);
        for (int j = 0; j < L.f; ++j) z[j] = zmod(z[j] - corr[j], L.pcap);
    }
    L.frob = z;
}

void check_p(long p)
{
    if (p == 2) throw std::domain_error("p = 2 is not supported");
    if (!is_prime(p)) throw std::invalid_argument("p must be an odd prime");
}

// identical parameters give the same field object
LocalFieldPtr interned(const std::string& key, const std::function<LocalFieldPtr()>& build)
{
    static std::mutex mu;
    static std::map<std::string, LocalFieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache[key] = build();
}

std::string field_key(char kind, long p, int f, long level, const Z& unit, long prec)
{
    return std::string(1, kind) + ":" + std::to_string(p) + ":" + std::to_string(f) + ":" + std::to_string(level) + ":" +
           unit.get_str() + ":" + std::to_string(prec);
}

}  // namespace

long LocalField::q() const
{
    long r = 1;
    for (int i = 0; i < f; ++i) r *= p;
    return r;
}

std::string LocalField::describe() const
{
    std::ostringstream os;
    os << "Q_" << p;
    if (f > 1) os << " H_" << f;
    if (kind == Cyclotomic) os << "(zeta_" << p << "^" << level + 1 << ")";
    if (kind == Tame) os << "(pi^" << e << " = " << unit.get_str() << "*" << p << ")";
    return os.str();
}

json LocalField::tower_json() const
{
    json t{{"f", f}};
    if (kind == Cyclotomic) t["cyc_level"] = level;
    if (kind == Tame) t["tame"] = json{e, unit.get_str()};
    return t;
}

LocalFieldPtr make_unramified(long p, int f, long prec)
{
    check_p(p);
    return interned(field_key('u', p, f, 0, 1, prec), [&] {
        auto L = std::make_shared<LocalField>();
        L->p = p;
        L->f = f;
        L->e = 1;
        L->cap = prec;
        L->E = {Z(-p)};
        finish_field(*L);
        return LocalFieldPtr(L);
    });
}

LocalFieldPtr make_cyclotomic(long p, int f, int level, long prec)
{
    if (level < 0) return make_unramified(p, f, prec);
    check_p(p);
    return interned(field_key('c', p, f, level, 1, prec), [&] {
        auto L = std::make_shared<LocalField>();
        L->p = p;
        L->f = f;
        L->kind = LocalField::Cyclotomic;
        L->level = level;
        long pr = 1;
        for (int i = 0; i < level; ++i) pr *= p;
        L->e = (int)((p - 1) * pr);
        L->cap = prec;
        // Phi_{p^{level+1}}(1 + pi) = sum_{j<p} (1+pi)^{j p^level}
        std::vector<Z> poly(L->e + 1, 0);
        for (long j = 0; j < p; ++j) {
            long n = j * pr;
            Z b = 1;
            for (long i = 0; i <= n; ++i) {
                poly[i] += b;
                b = b * (n - i) / (i + 1);
            }
        }
        L->E.assign(poly.begin(), poly.begin() + L->e);
        finish_field(*L);
        return LocalFieldPtr(L);
    });
}

LocalFieldPtr make_tame(long p, int f, int e, const Z& unit, long prec)
{
    check_p(p);
    if (e < 1) throw std::invalid_argument("bad ramification index");
    if (unit % p == 0) throw std::invalid_argument("tame datum must be a unit");
    if (e == 1) return make_unramified(p, f, prec);
    Z pc = zpow(p, prec);
    Z u = zmod(unit, pc);
    return interned(field_key('t', p, f, e, u, prec), [&] {
        auto L = std::make_shared<LocalField>();
        L->p = p;
        L->f = f;
        L->e = e;
        L->kind = LocalField::Tame;
        L->cap = prec;
        L->unit = u;
        L->E.assign(e, 0);
        L->E[0] = zmod(-L->unit * p, pc);
        finish_field(*L);
        return LocalFieldPtr(L);
    });
}

// ---------------------------------------------------------------------------

// c_ coordinates, value c_ * p^-k_, c_ known modulo pi^m_ (m_ in pi-adic units)

PadicElem::PadicElem(LocalFieldPtr F, const Q& q) : F_(std::move(F))
{
    c_.assign(F_->degree(), 0);
    if (q == 0) {
        k_ = -kExactPrec;
        m_ = 0;
        return;
    }
    long p = F_->p;
    Z num = q.get_num(), den = q.get_den();
    long a = vp(num, p), b = vp(den, p);
    num /= zpow(p, a);
    den /= zpow(p, b);
    Z inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), F_->pcap.get_mpz_t());
    c_[0] = zmod(num * inv, F_->pcap);
    k_ = b - a;
    m_ = F_->cap * F_->e;
    normalize();
}

PadicElem PadicElem::zero(LocalFieldPtr F, long absprec)
{
    PadicElem r;
    r.F_ = std::move(F);
    r.c_.assign(r.F_->degree(), 0);
    r.k_ = -absprec;
    r.m_ = 0;
    return r;
}

PadicElem PadicElem::make(LocalFieldPtr F, std::vector<Z> c, long k, long mpi)
{
    PadicElem r;
    r.F_ = std::move(F);
    c.resize(r.F_->degree(), 0);
    r.c_ = std::move(c);
    r.k_ = k;
    r.m_ = mpi;
    r.normalize();
    return r;
}

PadicElem PadicElem::from_coords(LocalFieldPtr F, std::vector<Z> c, long k, long m)
{
    long e = F->e;
    return make(std::move(F), std::move(c), k, m * e);
}

PadicElem PadicElem::pi(LocalFieldPtr F)
{
    std::vector<Z> c(F->degree(), 0);
    if (F->e == 1) return PadicElem(F, F->p);
    c[F->f] = 1;
    long m = F->cap;
    return from_coords(std::move(F), std::move(c), 0, m);
}

PadicElem PadicElem::y(LocalFieldPtr F)
{
    if (F->f == 1) throw std::domain_error("y undefined for f = 1");
    std::vector<Z> c(F->degree(), 0);
    c[1] = 1;
    long m = F->cap;
    return from_coords(std::move(F), std::move(c), 0, m);
}

int PadicElem::vpi() const
{
    int e = F_->e, f = F_->f;
    for (int i = 0; i < e; ++i)
        for (int j = 0; j < f; ++j)
            if (!mpz_divisible_ui_p(c_[i * f + j].get_mpz_t(), (unsigned long)F_->p)) return i;
    return e;
}

void PadicElem::normalize()
{
    if (!F_) return;
    long p = F_->p;
    int e = F_->e, f = F_->f;
    auto to_zero = [&]() {
        std::fill(c_.begin(), c_.end(), Z(0));
        // keep 0 <= m_ < e
        long q = m_ >= 0 ? m_ / e : -((-m_ + e - 1) / e);
        k_ -= q;
        m_ -= q * e;
    };
    m_ = std::min(m_, F_->cap * (long)e);
    if (m_ <= 0) {
        to_zero();
        return;
    }
    bool all_zero = true;
    for (int i = 0; i < e; ++i) {
        long digits = (m_ - i + e - 1) / e;  // ceil((m - i)/e)
        Z md = digits > 0 ? zpow(p, digits) : Z(1);
        for (int j = 0; j < f; ++j) {
            Z& x = c_[i * f + j];
            x = digits > 0 ? zmod(x, md) : Z(0);
            if (x != 0) all_zero = false;
        }
    }
    if (all_zero) {
        to_zero();
        return;
    }
    for (;;) {
        bool div = true;
        for (const auto& x : c_)
            if (x != 0 && !mpz_divisible_ui_p(x.get_mpz_t(), (unsigned long)p)) {
                div = false;
                break;
            }
        if (!div) break;
        for (auto& x : c_) x /= p;
        m_ -= e;
        --k_;
    }
}

bool PadicElem::is_zero() const
{
    if (!F_) return true;
    return std::all_of(c_.begin(), c_.end(), [](const Z& v) { return v == 0; });
}

Q PadicElem::valuation() const
{
    if (is_zero()) throw std::domain_error("valuation of zero");
    Q r(vpi(), F_->e);
    r.canonicalize();
    return r - k_;
}

Q PadicElem::absprec_q() const
{
    if (!F_) return Q(kExactPrec);
    Q r(m_, F_->e);
    r.canonicalize();
    return r - k_;
}

long PadicElem::absprec() const
{
    if (!F_) return kExactPrec;
    Q a = absprec_q();
    Z fl;
    mpz_fdiv_q(fl.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    return fl.get_si();
}

Q PadicElem::val_or_prec() const { return is_zero() ? absprec_q() : valuation(); }

PadicElem PadicElem::operator-() const
{
    if (!F_) return *this;
    PadicElem r = *this;
    for (auto& x : r.c_) x = -x;
    r.normalize();
    return r;
}

PadicElem operator+(const PadicElem& a, const PadicElem& b)
{
    if (!a.F_) return b;
    if (!b.F_) return a;
    if (a.F_ != b.F_) throw std::invalid_argument("p-adic elements from different fields");
    long e = a.F_->e;
    long K = std::max(a.k_, b.k_);
    long ma = a.m_ + e * (K - a.k_), mb = b.m_ + e * (K - b.k_);
    long M = std::min(ma, mb);
    PadicElem r;
    r.F_ = a.F_;
    r.k_ = K;
    r.m_ = M;
    r.c_.assign(a.c_.size(), 0);
    if (M > 0) {
        auto acc = [&](const PadicElem& x) {
            long s = K - x.k_;
            if (x.is_zero() || s * e >= M) return;
            Z sc = zpow(x.F_->p, s);
            for (size_t i = 0; i < r.c_.size(); ++i)
                if (x.c_[i] != 0) r.c_[i] += x.c_[i] * sc;
        };
        acc(a);
        acc(b);
    }
    r.normalize();
    return r;
}

PadicElem operator*(const PadicElem& a, const PadicElem& b)
{
    if (!a.F_ || !b.F_) return PadicElem();
    if (a.F_ != b.F_) throw std::invalid_argument("p-adic elements from different fields");
    const LocalField& L = *a.F_;
    bool za = a.is_zero(), zb = b.is_zero();
    if (za || zb) {
        PadicElem r = PadicElem::zero(a.F_, 0);
        r.k_ = a.k_ + b.k_;
        r.m_ = (za ? a.m_ : a.vpi()) + (zb ? b.m_ : b.vpi());
        if (r.k_ < -kExactPrec) return PadicElem::zero(a.F_, kExactPrec);
        r.normalize();
        return r;
    }
    long M = std::min(a.m_ + b.vpi(), b.m_ + a.vpi());
    Z md = zpow(L.p, (M + L.e - 1) / L.e + 1);
    int e = L.e, f = L.f;
    std::vector<OH> P(2 * e - 1, OH(f, 0));
    for (int i1 = 0; i1 < e; ++i1) {
        OH x(a.c_.begin() + i1 * f, a.c_.begin() + (i1 + 1) * f);
        if (std::all_of(x.begin(), x.end(), [](const Z& v) { return v == 0; })) continue;
        for (int i2 = 0; i2 < e; ++i2) {
            OH yv(b.c_.begin() + i2 * f, b.c_.begin() + (i2 + 1) * f);
            if (std::all_of(yv.begin(), yv.end(), [](const Z& v) { return v == 0; })) continue;
            OH t = oh_mul(x, yv, L.h, md);
            for (int j = 0; j < f; ++j) P[i1 + i2][j] += t[j];
        }
    }
    for (int i = 2 * e - 2; i >= e; --i) {
        for (int j = 0; j < f; ++j) {
            if (P[i][j] == 0) continue;
            Z t = P[i][j];
            P[i][j] = 0;
            for (int l = 0; l < e; ++l)
                if (L.E[l] != 0) P[i - e + l][j] -= L.E[l] * t;
        }
    }
    PadicElem r;
    r.F_ = a.F_;
    r.c_.assign(e * f, 0);
    for (int i = 0; i < e; ++i)
        for (int j = 0; j < f; ++j) r.c_[i * f + j] = P[i][j];
    r.k_ = a.k_ + b.k_;
    r.m_ = M;
    r.normalize();
    return r;
}

PadicElem PadicElem::inv() const
{
    if (is_zero()) throw std::domain_error("inverse of a p-adic zero");
    const LocalField& L = *F_;
    int e = L.e, f = L.f;
    int w = vpi();
    long rel = m_ - w;  // relative precision in pi units
    PadicElem c = make(F_, c_, 0, L.cap * e);
    if (w > 0) c = c * pi(F_).pow(e - w);  // = p * unit
    std::vector<Z> cu_c = c.c_;
    long digits = L.cap;
    // residue inverse of the pi^0 block, then Newton
    OH block(cu_c.begin(), cu_c.begin() + f);
    OH r0 = oh_inv(block, L.h, L.p, 1);
    std::vector<Z> z(e * f, 0);
    for (int j = 0; j < f; ++j) z[j] = r0[j];
    PadicElem Z0 = make(F_, z, 0, digits * e);
    PadicElem cu = make(F_, cu_c, 0, digits * e);
    PadicElem one(F_, 1), two(F_, 2);
    for (int it = 0; it < 200; ++it) {
        PadicElem prod = cu * Z0;
        if ((prod - one).is_zero()) break;
        Z0 = Z0 * (two - prod);
        Z0 = make(F_, Z0.c_, Z0.k_, digits * e);
    }
    PadicElem out = Z0;
    if (w > 0) out = out * pi(F_).pow(e - w);
    // value: p^{k_} pi^{e-w} / (p cu) when w > 0, p^{k_} / cu otherwise
    long shift = w > 0 ? 1 : 0;
    long k0 = out.k_;
    out.k_ = k0 + shift - k_;
    out.m_ = std::min<long>(rel - w + e * (k0 + shift), L.cap * e);
    out.normalize();
    return out;
}

PadicElem PadicElem::pow(long n) const
{
    if (n < 0) return inv().pow(-n);
    PadicElem r(F_, 1), b = *this;
    while (n > 0) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

PadicElem PadicElem::with_prec(long A) const
{
    if (!F_ || absprec() <= A) return *this;
    PadicElem r = *this;
    r.m_ = (A + r.k_) * F_->e;
    r.normalize();
    return r;
}

PadicElem PadicElem::coord(int i, int j) const
{
    if (!F_) return *this;
    int e = F_->e;
    std::vector<Z> c(F_->degree(), 0);
    c[0] = c_[i * F_->f + j];
    long digits = (m_ - i + e - 1) / e;
    return make(F_, std::move(c), k_, digits * e);
}

bool PadicElem::in_Qp() const
{
    if (!F_) return true;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

PadicElem PadicElem::to_Qp(const LocalFieldPtr& base) const
{
    if (!F_) return *this;
    if (!in_Qp()) throw std::domain_error("element is not in Q_p");
    if (base->degree() != 1 || base->p != F_->p) throw std::invalid_argument("base must be Q_p");
    long digits = (m_ + F_->e - 1) / F_->e;
    return from_coords(base, {c_[0]}, k_, std::min(digits, base->cap));
}

Q PadicElem::as_rational() const
{
    if (is_zero()) return Q(0);
    long digits = (m_ + F_->e - 1) / F_->e;
    Z md = zpow(F_->p, digits);
    Z c = c_[0];
    if (2 * c > md) c -= md;
    Q r(c);
    if (k_ >= 0) r /= Q(zpow(F_->p, k_));
    else r *= Q(zpow(F_->p, -k_));
    r.canonicalize();
    return r;
}

Z PadicElem::residue_mod(long n) const
{
    if (is_zero()) {
        if (absprec() < n) throw std::domain_error("insufficient precision");
        return 0;
    }
    if (k_ > 0) throw std::domain_error("element is not integral");
    if (absprec() < n) throw std::domain_error("insufficient precision");
    Z r = c_[0] * zpow(F_->p, -k_);
    return zmod(r, zpow(F_->p, n));
}

PadicElem PadicElem::apply(long a, const PadicElem& pi_image) const
{
    if (!F_ || is_zero()) return *this;
    const LocalField& L = *F_;
    int e = L.e, f = L.f;
    OH fy = frob_power_image(L, a);
    PadicElem out = zero(F_, kExactPrec);
    PadicElem pw(F_, 1);
    for (int i = 0; i < e; ++i) {
        long digits = (m_ - i + e - 1) / e;
        if (digits > 0) {
            Z md = zpow(L.p, digits);
            OH block(c_.begin() + i * f, c_.begin() + (i + 1) * f);
            OH img = (f == 1) ? block : oh_compose(block, fy, L.h, md);
            std::vector<Z> cc(e * f, 0);
            for (int j = 0; j < f; ++j) cc[j] = img[j];
            out = out + make(F_, cc, 0, digits * e) * pw;
        }
        if (i + 1 < e) pw = pw * pi_image;
    }
    out.m_ = std::min(out.m_, m_ + e * out.k_);
    out.k_ += k_;
    out.normalize();
    return out;
}

json PadicElem::to_json() const
{
    if (!F_) return json{{"exact_zero", true}};
    json d = json::array();
    for (const auto& x : c_) d.push_back(x.get_str());
    json j{{"p", F_->p}, {"tower", F_->tower_json()}, {"digits", d}, {"scale", -k_}, {"prec", absprec()}};
    j["val"] = is_zero() ? json(nullptr) : json(q_str(valuation()));
    return j;
}

std::string PadicElem::str() const
{
    if (!F_) return "0";
    std::string O = "O(" + std::to_string(F_->p) + "^" + q_str(absprec_q()) + ")";
    if (is_zero()) return O;
    std::ostringstream os;
    if (in_Qp()) {
        os << as_rational().get_str();
    } else {
        os << "[";
        for (size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i].get_str();
        os << "]*" << F_->p << "^" << -k_;
    }
    os << " + " << O;
    return os.str();
}

PadicElem mul_int(const PadicElem& x, const Z& n)
{
    if (!x.field()) return x;
    return x * PadicElem(x.field(), Q(n));
}

PadicElem unit_like(const PadicElem& z)
{
    if (!z.field()) throw std::domain_error("unit_like needs a field");
    return PadicElem(z.field(), 1);
}

// ---------------------------------------------------------------------------

namespace {

PadicElem pi_image(const LocalFieldPtr& L, long b)
{
    PadicElem pi = PadicElem::pi(L);
    switch (L->kind) {
    case LocalField::Unramified:
        return pi;
    case LocalField::Cyclotomic:
        return (PadicElem(L, 1) + pi).pow(b) - PadicElem(L, 1);
    case LocalField::Tame:
        return root_of_unity(L, L->e).pow(b) * pi;
    }
    return pi;
}

}  // namespace

std::vector<LocalAut> galois_group(const LocalFieldPtr& L)
{
    std::vector<LocalAut> out;
    std::vector<long> bs;
    if (L->kind == LocalField::Cyclotomic) {
        long n = 1;
        for (int i = 0; i <= L->level; ++i) n *= L->p;
        for (long b = 1; b < n; ++b)
            if (b % L->p) bs.push_back(b);
    } else if (L->kind == LocalField::Tame) {
        if ((L->q() - 1) % L->e) throw std::domain_error("tame extension is not Galois over Q_p");
        for (long b = 0; b < L->e; ++b) bs.push_back(b);
    } else {
        bs.push_back(1);
    }
    for (long a = 0; a < L->f; ++a)
        for (long b : bs) out.push_back({a, b});
    return out;
}

PadicElem apply_aut(const PadicElem& x, const LocalAut& s)
{
    if (!x.field()) return x;
    return x.apply(s.a, pi_image(x.field(), s.b));
}

PadicElem frobenius(const PadicElem& x, long a)
{
    if (!x.field()) return x;
    return x.apply(a, PadicElem::pi(x.field()));
}

PadicElem local_trace(const PadicElem& x)
{
    if (!x.field()) return x;
    PadicElem s;
    for (const auto& g : galois_group(x.field())) s = s + apply_aut(x, g);
    return s;
}

PadicElem local_trace_matrix(const PadicElem& x)
{
    if (!x.field()) return x;
    const LocalFieldPtr& L = x.field();
    PadicElem s = PadicElem::zero(L, kExactPrec);
    PadicElem pi = PadicElem::pi(L);
    PadicElem pw(L, 1);
    for (int i = 0; i < L->e; ++i) {
        PadicElem yw(L, 1);
        for (int j = 0; j < L->f; ++j) {
            s = s + (x * pw * yw).coord(i, j);
            if (j + 1 < L->f) yw = yw * PadicElem::y(L);
        }
        pw = pw * pi;
    }
    return s;
}

PadicElem local_norm(const PadicElem& x)
{
    if (!x.field()) return x;
    PadicElem s(x.field(), 1);
    for (const auto& g : galois_group(x.field())) s = s * apply_aut(x, g);
    return s;
}

PadicElem plog(const PadicElem& u)
{
    if (u.is_zero()) throw std::domain_error("log of zero");
    const LocalFieldPtr& L = u.field();
    if (u.valuation() != 0) throw std::domain_error("plog needs a unit");
    PadicElem one(L, 1);
    PadicElem z = u - one;
    if (z.is_zero()) return PadicElem::zero(L, u.absprec());
    if (z.valuation() == 0) {
        long q1 = L->q() - 1;
        return plog(u.pow(q1)) * PadicElem(L, Q(1, q1));
    }
    long A = u.absprec();
    double v = z.valuation().get_d();
    double lp = std::log((double)L->p);
    double nmin = 1.0 / (v * lp);
    PadicElem sum = PadicElem::zero(L, A);
    PadicElem zn = z;
    for (long n = 1;; ++n) {
        PadicElem t = zn * PadicElem(L, Q(n % 2 ? 1 : -1, n));
        sum = sum + t;
        long n1 = n + 1;
        if (n1 > nmin && n1 * v - std::log((double)n1) / lp >= A + 1) break;
        zn = zn * z;
    }
    return sum;
}

PadicElem pexp(const PadicElem& x)
{
    if (!x.field()) return x;
    const LocalFieldPtr& L = x.field();
    long A = x.absprec();
    if (x.is_zero()) return PadicElem(L, 1) + PadicElem::zero(L, A);
    Q v = x.valuation();
    Q thr(1, L->p - 1);
    if (v <= thr) throw std::domain_error("pexp outside the convergence domain");
    double gap = Q(v - thr).get_d(), t = thr.get_d();
    PadicElem sum = PadicElem(L, 1) + PadicElem::zero(L, A);
    PadicElem term(L, 1);
    for (long n = 1;; ++n) {
        term = term * x * PadicElem(L, Q(1, n));
        sum = sum + term;
        long n1 = n + 1;
        if (n1 * gap + t >= A + 1) break;
    }
    return sum;
}

PadicElem teichmuller(const LocalFieldPtr& L, const std::vector<long>& residue)
{
    std::vector<Z> c(L->degree(), 0);
    for (int j = 0; j < L->f && j < (int)residue.size(); ++j) c[j] = mod(residue[j], L->p);
    OH x(c.begin(), c.begin() + L->f);
    if (std::all_of(x.begin(), x.end(), [](const Z& v) { return v == 0; })) return PadicElem::zero(L, L->cap);
    Z q = zpow(L->p, L->f);
    for (long it = 0; it < L->cap + 2; ++it) {
        OH nx = oh_pow(x, q, L->h, L->pcap);
        if (nx == x) break;
        x = nx;
    }
    std::vector<Z> out(L->degree(), 0);
    for (int j = 0; j < L->f; ++j) out[j] = x[j];
    return PadicElem::from_coords(L, out, 0, L->cap);
}

namespace {

// least generator of F_q^x in the order sum r_j p^j
std::vector<long> residue_generator(const LocalField& L)
{
    long q = L.q();
    Z pz(L.p);
    auto primes = prime_divisors(q - 1);
    for (long t = 1; t < q; ++t) {
        OH x(L.f, 0);
        long s = t;
        for (int j = 0; j < L.f; ++j) {
            x[j] = s % L.p;
            s /= L.p;
        }
        bool gen = true;
        for (long l : primes) {
            OH r = oh_pow(x, Z((q - 1) / l), L.h, pz);
            bool one = r[0] == 1 && std::all_of(r.begin() + 1, r.end(), [](const Z& v) { return v == 0; });
            if (one) {
                gen = false;
                break;
            }
        }
        if (gen) {
            std::vector<long> out(L.f);
            for (int j = 0; j < L.f; ++j) out[j] = x[j].get_si();
            return out;
        }
    }
    return {1};
}

}  // namespace

PadicElem root_of_unity(const LocalFieldPtr& L, long N)
{
    if (N <= 0) throw std::invalid_argument("bad root of unity order");
    long p = L->p;
    long a = 0, Np = N;
    while (Np % p == 0) {
        Np /= p;
        ++a;
    }
    long q1 = L->q() - 1;
    if (q1 % Np) throw std::domain_error("root of unity of order " + std::to_string(N) + " not in " + L->describe());
    if (a > 0 && (L->kind != LocalField::Cyclotomic || a > L->level + 1))
        throw std::domain_error("root of unity of order " + std::to_string(N) + " not in " + L->describe());
    PadicElem one(L, 1);
    PadicElem zp = one, w = one;
    long pa = 1;
    for (long i = 0; i < a; ++i) pa *= p;
    if (a > 0) {
        long sh = 1;
        for (int i = 0; i < L->level + 1 - a; ++i) sh *= p;
        zp = (one + PadicElem::pi(L)).pow(sh);
    }
    if (Np > 1) w = teichmuller(L, residue_generator(*L)).pow(q1 / Np);
    if (a == 0) return w;
    if (Np == 1) return zp;
    long x = invmod(mod(Np, pa), pa);
    long y = invmod(mod(pa, Np), Np);
    return zp.pow(x) * w.pow(y);
}

PadicElem embed_cyc(const LocalFieldPtr& L, const CycNum& x)
{
    long N = x.conductor();
    const auto& c = x.coeffs();
    if (N == 1) return c[0] == 0 ? PadicElem::zero(L, kExactPrec) : PadicElem(L, c[0]);
    PadicElem z = root_of_unity(L, N);
    PadicElem s = PadicElem::zero(L, kExactPrec), pw(L, 1);
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] != 0) s = s + PadicElem(L, c[i]) * pw;
        if (i + 1 < c.size()) pw = pw * z;
    }
    return s;
}

Z hensel_sqrt(const Z& a, long p, long residue, long prec)
{
    Z md = zpow(p, prec);
    Z r = residue;
    if (zmod(r * r - a, Z(p)) != 0) throw std::domain_error("bad residue for square root");
    Z inv2 = (md + 1) / 2;
    for (long cur = 1; cur < prec; cur *= 2) {
        Z m2 = zpow(p, std::min(2 * cur, prec));
        Z ir;
        mpz_invert(ir.get_mpz_t(), r.get_mpz_t(), m2.get_mpz_t());
        r = zmod((r + zmod(a, m2) * ir) * inv2, m2);
    }
    return zmod(r, md);
}

PadicElem padic_sqrt(const PadicElem& x)
{
    const LocalFieldPtr& L = x.field();
    if (x.is_zero()) throw std::domain_error("padic_sqrt of zero");
    if (x.valuation() != 0) {
        Q t = x.valuation() * L->e;
        if (t.get_den() != 1 || t.get_num() % 2 != 0) throw std::domain_error("odd valuation in padic_sqrt");
        long h = Z(t.get_num() / 2).get_si();
        PadicElem pi = PadicElem::pi(L);
        return pi.pow(h) * padic_sqrt(x * pi.pow(-2 * h));
    }
    // residue square root by search in F_q
    long q = L->q();
    Z pz(L->p);
    PadicElem xs = x;
    std::vector<Z> target(L->f);
    for (int j = 0; j < L->f; ++j) target[j] = x.coord(0, j).residue_mod(1);
    OH found;
    for (long t = 1; t < q && found.empty(); ++t) {
        OH r(L->f);
        long s = t;
        for (int j = 0; j < L->f; ++j) {
            r[j] = s % L->p;
            s /= L->p;
        }
        if (oh_mul(r, r, L->h, pz) == target) found = r;
    }
    if (found.empty()) throw std::domain_error("not a square in " + L->describe());
    std::vector<Z> c(L->degree(), 0);
    for (int j = 0; j < L->f; ++j) c[j] = found[j];
    PadicElem z = PadicElem::from_coords(L, c, 0, L->cap);
    PadicElem half(L, Q(1, 2));
    for (int it = 0; it < 80; ++it) {
        PadicElem nz = (z + x / z) * half;
        if ((nz - z).is_zero()) {
            z = nz;
            break;
        }
        z = nz;
    }
    return z;
}

SplitEmbedding split_embedding(const BaseField& k, long p, long prec)
{
    check_p(p);
    SplitEmbedding s;
    s.p = p;
    s.D = k.D;
    s.prec = prec;
    if (!k.quadratic()) return s;
    if (k.disc() % p == 0) throw std::domain_error("p ramifies in " + k.name() + "; only split p is supported");
    for (long r = 1; r < p; ++r)
        if (mod(r * r - k.D, p) == 0) {
            s.residue = r;
            s.root = hensel_sqrt(Z(k.D), p, r, prec);
            return s;
        }
    throw std::domain_error("p is inert in " + k.name() + "; only split p is supported");
}

PadicElem embed_k(const LocalFieldPtr& L, const SplitEmbedding& s, const KElem& x, int i)
{
    PadicElem a = x.a == 0 ? PadicElem::zero(L, kExactPrec) : PadicElem(L, x.a);
    if (x.b == 0 || s.D == 0) return a;
    Z r = i == 1 ? s.root : zmod(-s.root, zpow(s.p, s.prec));
    PadicElem root = PadicElem::from_coords(L, {r}, 0, std::min(s.prec, L->cap));
    return a + PadicElem(L, x.b) * root;
}

}  // namespace tz
