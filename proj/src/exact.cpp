#include "tz/exact.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

#include "tz/arith.hpp"

namespace tz {

std::string q_str(const Q& q) { return q.get_str(); }

Q q_parse(const std::string& s)
{
    Q q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

namespace {

struct CycCtx {
    long N = 1, phi = 1;
    std::vector<std::vector<long>> pw;  // coordinates of zeta^k, k < N
};

struct SubCtx {
    long gen = 1;               // generator of Gal(Q(mu_N)/Q(mu_M))
    std::vector<int> rows;      // pivot rows
    std::vector<std::vector<Q>> inv;
};

std::mutex g_mu;

const CycCtx& ctx(long N)
{
    static std::map<long, std::unique_ptr<CycCtx>> cache;
    std::lock_guard<std::mutex> lk(g_mu);
    auto& slot = cache[N];
    if (slot) return *slot;
    auto c = std::make_unique<CycCtx>();
    c->N = N;
    const auto& f = cyclotomic_poly(N);
    c->phi = (long)f.size() - 1;
    c->pw.assign(N, std::vector<long>(c->phi, 0));
    std::vector<long> cur(c->phi, 0);
    cur[0] = 1;
    for (long k = 0; k < N; ++k) {
        c->pw[k] = cur;
        // multiply by zeta
        long top = cur[c->phi - 1];
        for (long j = c->phi - 1; j > 0; --j) cur[j] = cur[j - 1];
        cur[0] = 0;
        if (top)
            for (long j = 0; j < c->phi; ++j) cur[j] -= top * f[j];
    }
    slot = std::move(c);
    return *slot;
}

std::vector<Q> lift_coords(long N, const std::vector<Q>& c, long M)
{
    if (N == M) return c;
    const CycCtx& cm = ctx(M);
    std::vector<Q> out(cm.phi, Q(0));
    long step = M / N;
    for (size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        const auto& v = cm.pw[(j * step) % M];
        for (long i = 0; i < cm.phi; ++i)
            if (v[i]) out[i] += c[j] * v[i];
    }
    return out;
}

// invert a square rational matrix by Gauss-Jordan
bool invert(std::vector<std::vector<Q>> A, std::vector<std::vector<Q>>& out)
{
    size_t n = A.size();
    out.assign(n, std::vector<Q>(n, Q(0)));
    for (size_t i = 0; i < n; ++i) out[i][i] = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && A[piv][col] == 0) ++piv;
        if (piv == n) return false;
        std::swap(A[piv], A[col]);
        std::swap(out[piv], out[col]);
        Q s = 1 / A[col][col];
        for (size_t j = 0; j < n; ++j) { A[col][j] *= s; out[col][j] *= s; }
        for (size_t r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Q f = A[r][col];
            for (size_t j = 0; j < n; ++j) {
                A[r][j] -= f * A[col][j];
                out[r][j] -= f * out[col][j];
            }
        }
    }
    return true;
}

const SubCtx& subctx(long N, long M)
{
    static std::map<std::pair<long, long>, std::unique_ptr<SubCtx>> cache;
    {
        std::lock_guard<std::mutex> lk(g_mu);
        auto it = cache.find({N, M});
        if (it != cache.end()) return *it->second;
    }
    auto s = std::make_unique<SubCtx>();
    long kern = euler_phi(N) / euler_phi(M);
    for (long t = 1; t < N; ++t) {
        if (std::gcd(t, N) != 1 || t % M != 1 % M) continue;
        if (mult_order(t, N) == kern) { s->gen = t; break; }
    }
    // lift matrix: columns are basis elements of Q(mu_M)
    long pm = euler_phi(M), pn = euler_phi(N);
    std::vector<std::vector<Q>> L(pn, std::vector<Q>(pm));
    for (long j = 0; j < pm; ++j) {
        std::vector<Q> e(pm, Q(0));
        e[j] = 1;
        auto col = lift_coords(M, e, N);
        for (long i = 0; i < pn; ++i) L[i][j] = col[i];
    }
    // choose independent rows greedily
    std::vector<std::vector<Q>> basis;
    for (long i = 0; i < pn && (long)s->rows.size() < pm; ++i) {
        auto trial = basis;
        trial.push_back(L[i]);
        // rank test via elimination copy
        auto B = trial;
        size_t r = 0;
        for (long c = 0; c < pm && r < B.size(); ++c) {
            size_t p = r;
            while (p < B.size() && B[p][c] == 0) ++p;
            if (p == B.size()) continue;
            std::swap(B[p], B[r]);
            for (size_t k = r + 1; k < B.size(); ++k) {
                if (B[k][c] == 0) continue;
                Q f = B[k][c] / B[r][c];
                for (long j = c; j < pm; ++j) B[k][j] -= f * B[r][j];
            }
            ++r;
        }
        if (r == trial.size()) {
            basis = trial;
            s->rows.push_back((int)i);
        }
    }
    invert(basis, s->inv);
    std::lock_guard<std::mutex> lk(g_mu);
    auto& slot = cache[{N, M}];
    if (!slot) slot = std::move(s);
    return *slot;
}

std::vector<Q> galois_coords(long N, const std::vector<Q>& c, long t)
{
    const CycCtx& cx = ctx(N);
    std::vector<Q> out(cx.phi, Q(0));
    for (size_t j = 0; j < c.size(); ++j) {
        if (c[j] == 0) continue;
        const auto& v = cx.pw[mod((long)j * t, N)];
        for (long i = 0; i < cx.phi; ++i)
            if (v[i]) out[i] += c[j] * v[i];
    }
    return out;
}

}  // namespace

CycNum CycNum::from_coeffs(long N, std::vector<Q> c)
{
    for (auto& q : c) q.canonicalize();
    if (N % 4 == 2) {
        // rewrite sum c_j e(j/N) in conductor N/2
        CycNum r;
        for (size_t j = 0; j < c.size(); ++j)
            if (c[j] != 0) r += CycNum(c[j]) * root((long)j, N);
        return r;
    }
    if ((long)c.size() != euler_phi(N)) throw std::invalid_argument("CycNum: coefficient count");
    CycNum r;
    r.N_ = N;
    r.c_ = std::move(c);
    r.minimize();
    return r;
}

CycNum CycNum::root(long k, long n)
{
    if (n <= 0) throw std::invalid_argument("root: n must be positive");
    k = mod(k, n);
    long g = std::gcd(k, n);
    if (k == 0) return CycNum(1);
    k /= g; n /= g;
    Q sign = 1;
    if (n % 4 == 2) {
        long m = n / 2;
        if (k % 2) sign = -1;
        k = mod(k * ((m + 1) / 2), m);
        n = m;
    }
    if (n == 1) return CycNum(sign);
    const CycCtx& cx = ctx(n);
    CycNum r;
    r.N_ = n;
    r.c_.assign(cx.phi, Q(0));
    for (long i = 0; i < cx.phi; ++i) r.c_[i] = sign * cx.pw[k][i];
    return r;
}

bool CycNum::is_zero() const
{
    return N_ == 1 && c_[0] == 0;
}

Q CycNum::rational() const
{
    if (N_ != 1) throw std::domain_error("CycNum: not rational");
    return c_[0];
}

void CycNum::minimize()
{
    bool changed = true;
    while (changed && N_ > 1) {
        changed = false;
        bool rat = true;
        for (size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) { rat = false; break; }
        if (rat) {
            Q q = c_[0];
            N_ = 1;
            c_.assign(1, q);
            return;
        }
        for (long l : prime_divisors(N_)) {
            long M = canonical_conductor(N_ / l);
            const SubCtx& s = subctx(N_, M);
            if (galois_coords(N_, c_, s.gen) != c_) continue;
            std::vector<Q> y(s.inv.size(), Q(0));
            for (size_t i = 0; i < y.size(); ++i)
                for (size_t j = 0; j < y.size(); ++j)
                    if (s.inv[i][j] != 0) y[i] += s.inv[i][j] * c_[s.rows[j]];
            N_ = M;
            c_ = std::move(y);
            changed = true;
            break;
        }
    }
}

std::vector<Q> CycNum::lift(long M) const { return lift_coords(N_, c_, M); }

CycNum& CycNum::operator+=(const CycNum& b)
{
    long M = std::lcm(N_, b.N_);
    auto x = lift_coords(N_, c_, M);
    auto y = lift_coords(b.N_, b.c_, M);
    for (size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    N_ = M;
    c_ = std::move(x);
    minimize();
    return *this;
}

CycNum& CycNum::operator-=(const CycNum& b) { return *this += -b; }

CycNum CycNum::operator-() const
{
    CycNum r = *this;
    for (auto& q : r.c_) q = -q;
    return r;
}

CycNum& CycNum::operator*=(const CycNum& b)
{
    if (b.N_ == 1) {
        for (auto& q : c_) q *= b.c_[0];
        if (b.c_[0] == 0) { N_ = 1; c_.assign(1, Q(0)); }
        return *this;
    }
    if (N_ == 1) {
        Q s = c_[0];
        *this = b;
        for (auto& q : c_) q *= s;
        if (s == 0) { N_ = 1; c_.assign(1, Q(0)); }
        return *this;
    }
    long M = std::lcm(N_, b.N_);
    auto x = lift_coords(N_, c_, M);
    auto y = lift_coords(b.N_, b.c_, M);
    const CycCtx& cx = ctx(M);
    std::vector<Q> out(cx.phi, Q(0));
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < y.size(); ++j) {
            if (y[j] == 0) continue;
            Q t = x[i] * y[j];
            const auto& v = cx.pw[(i + j) % M];
            for (long k = 0; k < cx.phi; ++k)
                if (v[k]) out[k] += t * v[k];
        }
    }
    N_ = M;
    c_ = std::move(out);
    minimize();
    return *this;
}

CycNum CycNum::galois(long t) const
{
    if (N_ == 1) return *this;
    if (std::gcd(mod(t, N_), N_) != 1) throw std::domain_error("galois: exponent not coprime to conductor");
    CycNum r;
    r.N_ = N_;
    r.c_ = galois_coords(N_, c_, t);
    return r;
}

CycNum CycNum::inv() const
{
    if (is_zero()) throw std::domain_error("CycNum: division by zero");
    if (N_ == 1) return CycNum(Q(1) / c_[0]);
    const CycCtx& cx = ctx(N_);
    size_t n = cx.phi;
    // columns: x * zeta^j
    std::vector<std::vector<Q>> A(n, std::vector<Q>(n, Q(0)));
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i) {
            if (c_[i] == 0) continue;
            const auto& v = cx.pw[(i + j) % N_];
            for (size_t k = 0; k < n; ++k)
                if (v[k]) A[k][j] += c_[i] * v[k];
        }
    std::vector<std::vector<Q>> Ai;
    invert(A, Ai);
    std::vector<Q> y(n);
    for (size_t i = 0; i < n; ++i) y[i] = Ai[i][0];
    return from_coeffs(N_, y);
}

CycNum CycNum::pow(long e) const
{
    if (e < 0) return inv().pow(-e);
    CycNum r(1), b = *this;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

Q CycNum::trace() const
{
    CycNum t;
    for (long s = 1; s < std::max(N_, 2L); ++s)
        if (std::gcd(s, N_) == 1) t += galois(s);
    return t.rational();
}

Q CycNum::norm() const
{
    CycNum r(1);
    for (long s = 1; s < std::max(N_, 2L); ++s)
        if (std::gcd(s, N_) == 1) r *= galois(s);
    return r.rational();
}

std::string CycNum::str() const
{
    if (N_ == 1) return c_[0].get_str();
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        Q a = c_[i];
        if (!first) os << (a < 0 ? " - " : " + ");
        else if (a < 0) os << "-";
        if (a < 0) a = -a;
        first = false;
        if (i == 0) { os << a.get_str(); continue; }
        if (a != 1) os << a.get_str() << "*";
        os << "z" << N_;
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

json CycNum::to_json() const
{
    json c = json::array();
    for (auto& q : c_) c.push_back(q_str(q));
    return json{{"conductor", N_}, {"coeffs", c}};
}

CycNum CycNum::from_json(const json& j)
{
    long N = j.at("conductor").get<long>();
    std::vector<Q> c;
    for (auto& s : j.at("coeffs")) c.push_back(q_parse(s.get<std::string>()));
    if (N == 1) {
        if (c.size() != 1) throw std::invalid_argument("CycNum json: bad length");
        return CycNum(c[0]);
    }
    return from_coeffs(N, c);
}

// ---------------------------------------------------------------------------

FinAbGroup::FinAbGroup(std::vector<long> orders)
{
    for (long o : orders) {
        if (o <= 0) throw std::invalid_argument("FinAbGroup: nonpositive order");
        if (o > 1) orders_.push_back(o);
    }
    for (size_t i = 1; i < orders_.size(); ++i)
        if (orders_[i] % orders_[i - 1])
            throw std::invalid_argument("FinAbGroup: orders must form a divisor chain");
    for (long o : orders_) size_ *= o;
}

long FinAbGroup::index(const Elem& e) const
{
    long idx = 0;
    for (size_t i = orders_.size(); i-- > 0;) idx = idx * orders_[i] + mod(e.at(i), orders_[i]);
    return idx;
}

Elem FinAbGroup::elem(long idx) const
{
    Elem e(orders_.size());
    for (size_t i = 0; i < orders_.size(); ++i) {
        e[i] = idx % orders_[i];
        idx /= orders_[i];
    }
    return e;
}

Elem FinAbGroup::normalize(Elem a) const
{
    for (size_t i = 0; i < a.size(); ++i) a[i] = mod(a[i], orders_[i]);
    return a;
}

Elem FinAbGroup::add(const Elem& a, const Elem& b) const
{
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i] + b[i], orders_[i]);
    return r;
}

Elem FinAbGroup::neg(const Elem& a) const
{
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod(-a[i], orders_[i]);
    return r;
}

Elem FinAbGroup::mul(const Elem& a, long k) const
{
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod((long)((__int128)a[i] * k % orders_[i]), orders_[i]);
    return r;
}

long FinAbGroup::order(const Elem& a) const
{
    long o = 1;
    for (size_t i = 0; i < a.size(); ++i) o = std::lcm(o, orders_[i] / std::gcd(mod(a[i], orders_[i]), orders_[i]));
    return o;
}

std::string FinAbGroup::label(long idx) const
{
    if (idx < (long)labels_.size()) return labels_[idx];
    auto e = elem(idx);
    std::string s = "(";
    for (size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
    return s + ")";
}

Elem GroupHom::apply(const Elem& e) const
{
    Elem r = dst->zero();
    for (size_t i = 0; i < e.size(); ++i) r = dst->add(r, dst->mul(images[i], e[i]));
    return r;
}

bool GroupHom::surjective() const
{
    return src->size() / kernel_size() == dst->size();
}

long GroupHom::kernel_size() const
{
    long k = 0;
    for (long i = 0; i < src->size(); ++i)
        if (apply_index(i) == 0) ++k;
    return k;
}

namespace {

// basis of the l-primary part: returns generators with their orders
bool extend_basis(size_t n, size_t id, const std::function<size_t(size_t, size_t)>& mul,
                  const std::vector<size_t>& cand, const std::vector<long>& ord,
                  std::vector<long> targets, std::set<size_t> S,
                  std::vector<size_t>& chosen)
{
    if (targets.empty()) return true;
    long want = targets.front();
    targets.erase(targets.begin());
    for (size_t x : cand) {
        if (ord[x] != want) continue;
        // <x> meets S trivially
        std::vector<size_t> cyc{id};
        size_t y = x;
        bool ok = true;
        for (long k = 1; k < want; ++k) {
            if (S.count(y)) { ok = false; break; }
            cyc.push_back(y);
            y = mul(y, x);
        }
        if (!ok) continue;
        std::set<size_t> T;
        for (size_t s : S)
            for (size_t c : cyc) T.insert(mul(s, c));
        chosen.push_back(x);
        if (extend_basis(n, id, mul, cand, ord, targets, T, chosen)) return true;
        chosen.pop_back();
    }
    return false;
}

}  // namespace

AbStructure decompose_group(size_t n, size_t identity,
                            const std::function<size_t(size_t, size_t)>& mul)
{
    std::vector<long> ord(n, 0);
    for (size_t x = 0; x < n; ++x) {
        long k = 1;
        size_t y = x;
        while (y != identity) { y = mul(y, x); ++k; }
        ord[x] = k;
    }
    // l-primary parts
    std::vector<std::vector<std::pair<size_t, long>>> parts;  // (generator, order)
    for (auto [l, e] : factor((long)n)) {
        std::vector<size_t> cand;
        for (size_t x = 0; x < n; ++x) {
            long o = ord[x];
            while (o % l == 0) o /= l;
            if (o == 1) cand.push_back(x);
        }
        // type from counts of elements killed by l^j
        std::vector<long> cnt;
        for (long j = 0, lj = 1; j <= e; ++j, lj *= l) {
            long c = 0;
            for (size_t x : cand)
                if (lj % ord[x] == 0) ++c;
            cnt.push_back(c);
        }
        // number of cyclic factors of order >= l^j is log_l(cnt[j]/cnt[j-1])
        std::vector<long> geq(e + 2, 0);
        for (int j = 1; j <= e; ++j) {
            long r = cnt[j] / cnt[j - 1], k = 0;
            while (r > 1) { r /= l; ++k; }
            geq[j] = k;
        }
        std::vector<long> targets;
        for (int j = e; j >= 1; --j) {
            long pj = 1;
            for (int t = 0; t < j; ++t) pj *= l;
            for (long k = geq[j + 1]; k < geq[j]; ++k) targets.push_back(pj);
        }
        std::sort(targets.rbegin(), targets.rend());
        std::vector<size_t> chosen;
        if (!extend_basis(n, identity, mul, cand, ord, targets, {identity}, chosen))
            throw std::logic_error("decompose_group: no basis found");
        std::vector<std::pair<size_t, long>> part;
        for (size_t i = 0; i < chosen.size(); ++i) part.emplace_back(chosen[i], targets[i]);
        parts.push_back(part);
    }
    // combine into invariant factors (largest first, then reverse)
    size_t r = 0;
    for (auto& p : parts) r = std::max(r, p.size());
    std::vector<size_t> gens(r, identity);
    std::vector<long> orders(r, 1);
    for (auto& p : parts)
        for (size_t i = 0; i < p.size(); ++i) {
            gens[i] = mul(gens[i], p[i].first);
            orders[i] *= p[i].second;
        }
    std::reverse(gens.begin(), gens.end());
    std::reverse(orders.begin(), orders.end());
    AbStructure out;
    auto G = std::make_shared<FinAbGroup>(orders);
    out.G = G;
    out.gens = gens;
    out.dlog.assign(n, -1);
    out.elem_of.assign(G->size(), identity);
    for (long idx = 0; idx < G->size(); ++idx) {
        Elem e = G->elem(idx);
        size_t x = identity;
        for (size_t i = 0; i < e.size(); ++i)
            for (long k = 0; k < e[i]; ++k) x = mul(x, gens[i]);
        out.dlog[x] = idx;
        out.elem_of[idx] = x;
    }
    for (long d : out.dlog)
        if (d < 0) throw std::logic_error("decompose_group: generators do not span");
    return out;
}

// ---------------------------------------------------------------------------

json gr_to_json(const GroupRingElem& x)
{
    json terms = json::array();
    for (auto& [i, v] : x.terms())
        terms.push_back({{"elem", x.group()->elem(i)}, {"coeff", v.to_json()}});
    return json{{"orders", x.group()->orders()}, {"terms", terms}};
}

GroupRingElem gr_from_json(const json& j)
{
    auto G = std::make_shared<FinAbGroup>(j.at("orders").get<std::vector<long>>());
    GroupRingElem x(G);
    for (auto& t : j.at("terms"))
        x.add_to(G->index(t.at("elem").get<Elem>()), CycNum::from_json(t.at("coeff")));
    return x;
}

std::string gr_str(const GroupRingElem& x)
{
    if (x.is_zero_elem()) return "0";
    std::string s;
    for (auto& [i, v] : x.terms()) {
        if (!s.empty()) s += " + ";
        s += "(" + v.str() + ")*" + x.group()->label(i);
    }
    return s;
}

CycNum Character::value(const Elem& e) const
{
    long E = G->exponent(), k = 0;
    for (size_t i = 0; i < e.size(); ++i) k += a[i] * e[i] * (E / G->orders()[i]);
    return CycNum::root(mod(k, E), E);
}

long Character::order() const
{
    long o = 1;
    for (size_t i = 0; i < a.size(); ++i)
        o = std::lcm(o, G->orders()[i] / std::gcd(mod(a[i], G->orders()[i]), G->orders()[i]));
    return o;
}

Character Character::conj() const { return Character{G, G->neg(a)}; }

bool Character::is_trivial() const
{
    for (size_t i = 0; i < a.size(); ++i)
        if (mod(a[i], G->orders()[i])) return false;
    return true;
}

std::vector<Character> all_characters(const GroupPtr& G)
{
    std::vector<Character> out;
    for (long i = 0; i < G->size(); ++i) out.push_back(Character{G, G->elem(i)});
    return out;
}

CycNum char_apply(const Character& chi, const GroupRingElem& x)
{
    CycNum s;
    for (auto& [i, v] : x.terms()) s += v * chi.value(i);
    return s;
}

GroupRingElem idempotent(const Character& chi)
{
    GroupRingElem e(chi.G);
    Q inv = Q(1, chi.G->size());
    for (long i = 0; i < chi.G->size(); ++i)
        e.set(chi.G->index(chi.G->neg(chi.G->elem(i))), chi.value(i) * CycNum(inv));
    return e;
}

GroupRingElem minus_idempotent(const GroupPtr& G, const std::vector<Elem>& cs)
{
    GroupRingElem e = GroupRingElem::identity(G, CycNum(1));
    for (auto& c : cs) {
        if (G->order(c) > 2) throw std::invalid_argument("minus_idempotent: element of order > 2");
        GroupRingElem f(G);
        f.add_to(0, CycNum(Q(1, 2)));
        f.add_to(G->index(c), CycNum(Q(-1, 2)));
        e = e * f;
    }
    return e;
}

}  // namespace tz
