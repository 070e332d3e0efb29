#include "tz/field.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

#include "tz/arith.hpp"

namespace tz {

namespace {

Z floor_q(const Q& q)
{
    Z r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Q qgcd(const Q& x, const Q& y)
{
    if (x == 0) return abs(y);
    if (y == 0) return abs(x);
    Z n = gcd(x.get_num(), y.get_num());
    Z d = lcm(x.get_den(), y.get_den());
    Q r(n, d);
    r.canonicalize();
    return r;
}

bool is_integer(const Q& q) { return q.get_den() == 1; }

}  // namespace

BaseField parse_field(const std::string& s0)
{
    std::string s;
    for (char c : s0)
        if (!std::isspace((unsigned char)c)) s += c;
    if (s == "Q" || s == "QQ") return BaseField{0};
    const std::string pre = "Q(sqrt";
    if (s.rfind(pre, 0) == 0 && s.back() == ')') {
        long D = std::stol(s.substr(pre.size(), s.size() - pre.size() - 1));
        if (D <= 1) throw std::invalid_argument("field: D must be > 1");
        for (auto& [p, e] : factor(D))
            if (e > 1) throw std::invalid_argument("field: D must be squarefree");
        return BaseField{D};
    }
    throw std::invalid_argument("unrecognised field: " + s0);
}

// ---------------------------------------------------------------------------

KElem KElem::omega(const BaseField& k)
{
    if (!k.quadratic()) return KElem(1, 0);
    return k.half() ? KElem(Q(1, 2), Q(1, 2), k.D) : KElem(Q(0), Q(1), k.D);
}

KElem KElem::from_omega(const BaseField& k, const Q& x, const Q& y)
{
    if (!k.quadratic()) return KElem(x, Q(0), 0);
    if (k.half()) return KElem(x + y / 2, y / 2, k.D);
    return KElem(x, y, k.D);
}

std::pair<Q, Q> KElem::omega_coords() const
{
    if (D == 0) return {a, Q(0)};
    if (D % 4 == 1) return {a - b, 2 * b};
    return {a, b};
}

KElem operator*(const KElem& x, const KElem& y)
{
    long D = x.D ? x.D : y.D;
    return KElem(x.a * y.a + x.b * y.b * D, x.a * y.b + x.b * y.a, D);
}

KElem KElem::inv() const
{
    Q n = norm();
    if (n == 0) throw std::domain_error("KElem: division by zero");
    return KElem(a / n, -b / n, D);
}

int KElem::sign(int i) const
{
    Q t = (i == 2) ? -b : b;
    auto sg = [](const Q& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); };
    if (D == 0 || t == 0) return sg(a);
    if (a == 0) return sg(t);
    if (sg(a) == sg(t)) return sg(a);
    // opposite signs: compare a^2 with t^2 D
    return (a * a > t * t * D) ? sg(a) : sg(t);
}

bool KElem::totally_positive() const
{
    if (D == 0) return a > 0;
    return sign(1) > 0 && sign(2) > 0;
}

bool KElem::integral() const
{
    auto [x, y] = omega_coords();
    return is_integer(x) && is_integer(y);
}

std::string KElem::str() const
{
    if (b == 0) return a.get_str();
    std::string r = (a != 0) ? a.get_str() : "";
    Q c = b;
    if (a != 0) r += (c < 0 ? "-" : "+");
    else if (c < 0) r += "-";
    if (c < 0) c = -c;
    if (c != 1) r += c.get_str() + "*";
    return r + "sqrt" + std::to_string(D);
}

namespace {

struct ElemParser {
    const BaseField& k;
    std::string s;
    size_t i = 0;

    char peek() { return i < s.size() ? s[i] : '\0'; }
    KElem expr()
    {
        KElem v = term();
        while (peek() == '+' || peek() == '-') {
            char op = s[i++];
            KElem t = term();
            v = (op == '+') ? v + t : v - t;
        }
        return v;
    }
    KElem term()
    {
        KElem v = unary();
        while (peek() == '*' || peek() == '/') {
            char op = s[i++];
            KElem t = unary();
            v = (op == '*') ? v * t : v / t;
        }
        return v;
    }
    KElem unary()
    {
        if (peek() == '-') { ++i; return -unary(); }
        if (peek() == '+') { ++i; return unary(); }
        return atom();
    }
    KElem atom()
    {
        if (peek() == '(') {
            ++i;
            KElem v = expr();
            if (peek() != ')') throw std::invalid_argument("element: missing ')'");
            ++i;
            return v;
        }
        if (std::isdigit((unsigned char)peek())) {
            size_t j = i;
            while (std::isdigit((unsigned char)peek())) ++i;
            KElem v(Q(Z(s.substr(j, i - j))), Q(0), k.D);
            // juxtaposition 2sqrt2
            if (std::isalpha((unsigned char)peek())) v = v * atom();
            return v;
        }
        if (s.compare(i, 4, "sqrt") == 0) {
            i += 4;
            size_t j = i;
            while (std::isdigit((unsigned char)peek())) ++i;
            long D = std::stol(s.substr(j, i - j));
            if (D != k.D) throw std::invalid_argument("element: sqrt" + std::to_string(D) + " not in " + k.name());
            return KElem(Q(0), Q(1), k.D);
        }
        if (peek() == 'w') { ++i; return KElem::omega(k); }
        throw std::invalid_argument("element: unexpected '" + std::string(1, peek()) + "' in " + s);
    }
};

}  // namespace

KElem parse_elem(const BaseField& k, const std::string& s0)
{
    std::string s;
    for (char c : s0)
        if (!std::isspace((unsigned char)c)) s += c;
    ElemParser p{k, s};
    KElem v = p.expr();
    if (p.i != s.size()) throw std::invalid_argument("element: trailing text in " + s0);
    v.D = k.D;
    return v;
}

std::vector<Q> solve_coords(const BaseField& k, const std::vector<KElem>& w, const KElem& x)
{
    if (w.size() == 1) {
        // x must be a rational multiple of w
        KElem t = x / w[0];
        if (t.b != 0) throw std::invalid_argument("solve_coords: not on the line");
        return {t.a};
    }
    if (!k.quadratic() || w.size() != 2) throw std::invalid_argument("solve_coords: bad basis");
    Q det = w[0].a * w[1].b - w[1].a * w[0].b;
    if (det == 0) throw std::invalid_argument("solve_coords: dependent basis");
    Q t1 = (x.a * w[1].b - w[1].a * x.b) / det;
    Q t2 = (w[0].a * x.b - x.a * w[0].b) / det;
    return {t1, t2};
}

// ---------------------------------------------------------------------------

Lattice Lattice::span(const BaseField& k, const std::vector<KElem>& gens)
{
    Lattice L;
    L.k = k;
    if (!k.quadratic()) {
        Q g = 0;
        for (auto& x : gens) g = qgcd(g, x.a);
        if (g == 0) throw std::invalid_argument("lattice: zero");
        L.A = g;
        L.B = 0;
        L.C = 1;
        return L;
    }
    Z den = 1;
    std::vector<std::pair<Q, Q>> cs;
    for (auto& x : gens) {
        cs.push_back(x.omega_coords());
        den = lcm(den, lcm(cs.back().first.get_den(), cs.back().second.get_den()));
    }
    std::vector<std::pair<Z, Z>> rows;
    for (auto& [x, y] : cs) {
        Q X = x * den, Y = y * den;
        rows.emplace_back(X.get_num(), Y.get_num());
    }
    // Euclid on the second coordinate
    while (true) {
        int piv = -1;
        for (size_t i = 0; i < rows.size(); ++i)
            if (rows[i].second != 0 && (piv < 0 || abs(rows[i].second) < abs(rows[piv].second))) piv = (int)i;
        if (piv < 0) throw std::invalid_argument("lattice: not of full rank");
        bool done = true;
        for (size_t i = 0; i < rows.size(); ++i) {
            if ((int)i == piv || rows[i].second == 0) continue;
            Z q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i].second.get_mpz_t(), rows[piv].second.get_mpz_t());
            rows[i].first -= q * rows[piv].first;
            rows[i].second -= q * rows[piv].second;
            if (rows[i].second != 0) done = false;
        }
        if (done) {
            Z a = 0;
            for (size_t i = 0; i < rows.size(); ++i)
                if ((int)i != piv) a = gcd(a, rows[i].first);
            if (a == 0) throw std::invalid_argument("lattice: not of full rank");
            auto pr = rows[piv];
            if (pr.second < 0) { pr.first = -pr.first; pr.second = -pr.second; }
            Z b;
            mpz_fdiv_r(b.get_mpz_t(), pr.first.get_mpz_t(), a.get_mpz_t());
            L.A = Q(a, den);
            L.B = Q(b, den);
            L.C = Q(pr.second, den);
            L.A.canonicalize();
            L.B.canonicalize();
            L.C.canonicalize();
            return L;
        }
    }
}

Lattice Lattice::ideal(const BaseField& k, const std::vector<KElem>& gens)
{
    std::vector<KElem> all;
    KElem w = KElem::omega(k);
    for (auto g : gens) {
        g.D = k.D;
        all.push_back(g);
        if (k.quadratic()) all.push_back(g * w);
    }
    return span(k, all);
}

std::vector<KElem> Lattice::basis() const
{
    if (!k.quadratic()) return {KElem(A, Q(0), 0)};
    return {KElem::from_omega(k, A, 0), KElem::from_omega(k, B, C)};
}

bool Lattice::contains(const KElem& x) const
{
    auto [u, v] = x.omega_coords();
    if (!k.quadratic()) return x.b == 0 && is_integer(x.a / A);
    Q n2 = v / C;
    if (!is_integer(n2)) return false;
    return is_integer((u - n2 * B) / A);
}

bool Lattice::contains(const Lattice& L) const
{
    for (auto& b : L.basis())
        if (!contains(b)) return false;
    return true;
}

bool Lattice::integral() const { return Lattice::unit(k).contains(*this); }

Lattice Lattice::operator*(const Lattice& o) const
{
    std::vector<KElem> g;
    for (auto& x : basis())
        for (auto& y : o.basis()) g.push_back(x * y);
    return span(k, g);
}

Lattice Lattice::scaled(const KElem& x) const
{
    std::vector<KElem> g;
    for (auto& b : basis()) g.push_back(x * b);
    return span(k, g);
}

Lattice Lattice::inverse() const
{
    if (!k.quadratic()) {
        Lattice L = *this;
        L.A = 1 / A;
        return L;
    }
    std::vector<KElem> g;
    Q n = norm();
    for (auto& b : basis()) g.push_back((1 / n) * b.conj());
    return span(k, g);
}

Lattice Lattice::sum(const Lattice& o) const
{
    auto g = basis();
    for (auto& b : o.basis()) g.push_back(b);
    return span(k, g);
}

Q Lattice::rational_generator() const { return A; }

KElem Lattice::primitive_along(const KElem& v) const
{
    if (v.is_zero()) throw std::invalid_argument("primitive_along: zero direction");
    if (!k.quadratic()) return KElem(v.a > 0 ? A : -A, Q(0), 0);
    auto [vx, vy] = v.omega_coords();
    if (vy == 0) return KElem(vx > 0 ? A : -A, Q(0), k.D);
    Q r = (C * vx / vy - B) / A;
    Q q(r.get_den());
    Q t = q * C / abs(vy);
    return t * v;
}

std::string Lattice::str() const
{
    if (!k.quadratic()) return "(" + A.get_str() + ")";
    std::ostringstream os;
    os << "<" << A.get_str() << ", " << B.get_str() << "+" << C.get_str() << "w>";
    return os.str();
}

// ---------------------------------------------------------------------------

std::vector<PrimeIdeal> primes_above(const BaseField& k, long p)
{
    if (!k.quadratic()) return {PrimeIdeal{Lattice::unit(k).scaled(KElem(p, 0)), p, p}};
    // minimal polynomial of omega: X^2 - tX - n
    long t = k.half() ? 1 : 0;
    long n = k.half() ? (k.D - 1) / 4 : k.D;
    std::vector<long> roots;
    for (long r = 0; r < p; ++r)
        if (mod(r * r - t * r - n, p) == 0) roots.push_back(r);
    KElem w = KElem::omega(k), P(p, k.D);
    if (roots.empty()) return {PrimeIdeal{Lattice::ideal(k, {P}), p, p * p}};
    std::vector<PrimeIdeal> out;
    for (long r : roots) out.push_back(PrimeIdeal{Lattice::ideal(k, {P, w - KElem(r, k.D)}), p, p});
    return out;
}

std::vector<std::pair<PrimeIdeal, int>> factor_ideal(const Lattice& I)
{
    std::vector<std::pair<PrimeIdeal, int>> out;
    Q n = I.norm();
    if (!is_integer(n)) throw std::invalid_argument("factor_ideal: not integral");
    for (long p : prime_divisors(n.get_num().get_si())) {
        for (auto& P : primes_above(I.k, p)) {
            int e = 0;
            Lattice Pe = P.P;
            while (Pe.contains(I)) { ++e; Pe = Pe * P.P; }
            if (e) out.emplace_back(P, e);
        }
    }
    return out;
}

std::optional<KElem> find_generator(const Lattice& I, long bound)
{
    Q n = I.norm();
    auto b = I.basis();
    if (!I.k.quadratic()) return b[0];
    for (long r = 0; r <= bound; ++r)
        for (long i = -r; i <= r; ++i)
            for (long j = -r; j <= r; ++j) {
                if (std::max(std::abs(i), std::abs(j)) != r) continue;
                KElem x = Q(i) * b[0] + Q(j) * b[1];
                if (x.is_zero()) continue;
                if (abs(x.norm()) == n) return x;
            }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

KElem fundamental_unit(const BaseField& k)
{
    if (!k.quadratic()) return KElem(1, 0);
    long D = k.D;
    // smallest y > 0 with x^2 - D y^2 = +-c, c = 4 (half basis) or 1
    long c = k.half() ? 4 : 1;
    for (long y = 1; y < 100000000; ++y) {
        Z Dy2 = Z(D) * y * y;
        for (int s : {-1, 1}) {
            Z t = Dy2 + s * c;
            if (t <= 0) continue;
            Z x = sqrt(t);
            if (x * x != t) continue;
            if (c == 4 && ((x - y) % 2) != 0) continue;
            Q den = (c == 4) ? Q(2) : Q(1);
            return KElem(Q(x) / den, Q(y) / den, D);
        }
    }
    throw std::runtime_error("fundamental_unit: search exhausted");
}

UnitData unit_data(const BaseField& k)
{
    UnitData u;
    u.eps = fundamental_unit(k);
    u.norm_eps = k.quadratic() ? u.eps.norm() : Q(1);
    if (!k.quadratic()) u.eps_plus = KElem(1, 0);
    else u.eps_plus = (u.norm_eps == -1) ? u.eps * u.eps : u.eps;
    return u;
}

KElem different_generator(const BaseField& k)
{
    if (!k.quadratic()) return KElem(1, 0);
    KElem d = k.half() ? KElem(Q(0), Q(1), k.D) : KElem(Q(0), Q(2), k.D);
    UnitData u = unit_data(k);
    if (d.norm() < 0) {
        if (u.norm_eps != -1) throw std::domain_error("different has no totally positive generator");
        d = d * u.eps;
    }
    if (d.sign(1) < 0) d = -d;
    return d;
}

KElem totally_positive_generator(const Lattice& I)
{
    if (!I.k.quadratic()) return KElem(I.A, Q(0), 0);
    auto g = find_generator(I);
    if (!g) throw std::domain_error("ideal " + I.str() + ": no generator found (not principal?)");
    KElem x = *g;
    if (x.norm() < 0) {
        UnitData u = unit_data(I.k);
        if (u.norm_eps != -1) throw std::domain_error("no totally positive generator");
        x = x * u.eps;
    }
    if (x.sign(1) < 0) x = -x;
    return x;
}

bool narrow_class_number_one(const BaseField& k)
{
    if (!k.quadratic()) return true;
    if (unit_data(k).norm_eps != -1) return false;
    double mink = std::sqrt((double)k.disc()) / 2.0;
    for (long p = 2; p <= (long)mink; ++p) {
        if (!is_prime(p)) continue;
        for (auto& P : primes_above(k, p))
            if (P.normP <= mink && !find_generator(P.P)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

std::string Cycle::str() const
{
    std::string s;
    if (!k.quadratic()) s = f.A.get_str();
    else {
        auto g = find_generator(f);
        s = g ? "(" + g->str() + ")" : f.str();
    }
    for (int v : z) s += k.quadratic() ? "*inf" + std::to_string(v) : "*inf";
    return s;
}

std::string Cycle::key() const
{
    std::string s = k.name() + "|" + f.A.get_str() + "," + f.B.get_str() + "," + f.C.get_str() + "|";
    for (int v : z) s += std::to_string(v);
    return s;
}

Cycle parse_cycle(const BaseField& k, const std::string& s0)
{
    std::string s;
    for (char c : s0)
        if (!std::isspace((unsigned char)c)) s += c;
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == '*' && depth == 0) { parts.push_back(cur); cur.clear(); }
        else cur += c;
    }
    parts.push_back(cur);
    Cycle m;
    m.k = k;
    m.f = Lattice::unit(k);
    std::set<int> z;
    for (auto& p : parts) {
        if (p.empty()) throw std::invalid_argument("cycle: empty factor in " + s0);
        if (p == "inf" && !k.quadratic()) { z.insert(1); continue; }
        if (p == "inf" && k.quadratic()) { z.insert(1); z.insert(2); continue; }
        if (p == "inf1" || p == "inf2") {
            if (!k.quadratic() && p == "inf2") throw std::invalid_argument("cycle: Q has one real place");
            z.insert(p == "inf1" ? 1 : 2);
            continue;
        }
        KElem g = parse_elem(k, p);
        if (!g.integral() || g.is_zero()) throw std::invalid_argument("cycle: factor " + p + " is not a nonzero integer");
        m.f = m.f * Lattice::ideal(k, {g});
    }
    m.z.assign(z.begin(), z.end());
    return m;
}

// ---------------------------------------------------------------------------

ResidueRing::ResidueRing(const Lattice& f) : f_(f)
{
    if (!f.integral()) throw std::invalid_argument("residue ring: modulus not integral");
    A_ = f.A.get_num();
    B_ = f.B.get_num();
    C_ = f.C.get_num();
    nA_ = A_.get_si();
    nC_ = f.k.quadratic() ? C_.get_si() : 1;
}

long ResidueRing::index(const KElem& x) const
{
    auto [u, v] = x.omega_coords();
    if (!is_integer(u) || !is_integer(v)) throw std::invalid_argument("residue: element not integral");
    Z X = u.get_num(), Y = v.get_num();
    if (f_.k.quadratic()) {
        Z q;
        mpz_fdiv_q(q.get_mpz_t(), Y.get_mpz_t(), C_.get_mpz_t());
        Y -= q * C_;
        X -= q * B_;
    }
    Z r;
    mpz_fdiv_r(r.get_mpz_t(), X.get_mpz_t(), A_.get_mpz_t());
    return Y.get_si() * nA_ + r.get_si();
}

KElem ResidueRing::elem(long idx) const
{
    return KElem::from_omega(f_.k, Q(idx % nA_), Q(idx / nA_));
}

bool ResidueRing::is_unit(long i) const
{
    if (elem(i).is_zero()) return size() == 1;
    Lattice s = Lattice::ideal(f_.k, {elem(i)}).sum(f_);
    return s == Lattice::unit(f_.k);
}

long RayClassData::class_of(const KElem& alpha) const
{
    long r = R->index(alpha);
    long c = coset_of_unit.at(r);
    if (c < 0) throw std::invalid_argument("class_of: element not prime to f");
    return c;
}

long RayClassData::class_of_ideal(const Lattice& a) const
{
    KElem g = totally_positive_generator(a);
    return class_of(g);
}

KElem RayClassData::positive_rep(long g) const
{
    KElem x = R->elem(rep.at(g));
    KElem N(m.f.rational_generator().get_num().get_si(), m.k.D);
    while (!x.totally_positive()) x = x + N;
    return x;
}

std::string RayClassData::label(long g) const
{
    KElem x = R->elem(rep.at(g));
    if (!m.k.quadratic()) return "s" + x.a.get_str();
    return "[" + x.str() + "]";
}

RayClassData ray_class_group(const Cycle& m)
{
    const BaseField& k = m.k;
    if (k.quadratic() && !narrow_class_number_one(k))
        throw std::domain_error("unsupported field " + k.name() + ": narrow class number > 1");
    RayClassData rc;
    rc.m = m;
    rc.R = std::make_shared<ResidueRing>(m.f);
    const ResidueRing& R = *rc.R;
    long n = R.size();
    rc.coset_of_unit.assign(n, -1);
    std::vector<long> pos(n, -1);
    for (long i = 0; i < n; ++i)
        if (R.is_unit(i)) { pos[i] = (long)rc.units.size(); rc.units.push_back(i); }
    rc.unit_count = (long)rc.units.size();

    // E_z
    UnitData ud = unit_data(k);
    std::vector<KElem> cand;
    if (!k.quadratic()) cand = {KElem(-1, 0)};
    else cand = {KElem(-1, k.D), ud.eps, -ud.eps, ud.eps * ud.eps};
    for (auto& u : cand) {
        bool ok = true;
        for (int v : m.z) ok = ok && u.sign(v) > 0;
        if (ok) rc.Ez.push_back(u);
    }
    // image of E_z in (O/f)^x
    long one = R.index(KElem(1, k.D));
    std::set<long> H{one};
    std::vector<long> frontier{one};
    std::vector<long> gen_res;
    for (auto& u : rc.Ez) gen_res.push_back(R.index(u));
    while (!frontier.empty()) {
        long x = frontier.back();
        frontier.pop_back();
        for (long g : gen_res) {
            long y = R.mul(x, g);
            if (H.insert(y).second) frontier.push_back(y);
        }
    }
    rc.image_Ez = (long)H.size();

    // cosets of H
    std::vector<long> coset(rc.units.size(), -1);
    std::vector<long> coset_rep;
    for (size_t i = 0; i < rc.units.size(); ++i) {
        if (coset[i] >= 0) continue;
        long id = (long)coset_rep.size();
        coset_rep.push_back(rc.units[i]);
        for (long h : H) coset[pos[R.mul(rc.units[i], h)]] = id;
    }
    size_t nc = coset_rep.size();
    auto S = decompose_group(nc, (size_t)coset[pos[one]], [&](size_t a, size_t b) {
        return (size_t)coset[pos[R.mul(coset_rep[a], coset_rep[b])]];
    });
    auto G = std::make_shared<FinAbGroup>(*S.G);
    rc.rep.assign(G->size(), 0);
    for (size_t i = 0; i < rc.units.size(); ++i) {
        long g = S.dlog[coset[i]];
        rc.coset_of_unit[rc.units[i]] = g;
    }
    for (long g = 0; g < G->size(); ++g) {
        long best = -1;
        for (size_t i = 0; i < rc.units.size(); ++i)
            if (rc.coset_of_unit[rc.units[i]] == g && (best < 0 || rc.units[i] < best)) best = rc.units[i];
        rc.rep[g] = best;
    }
    // exactness of E_z -> (O/f)^x -> Cl_m -> Cl_z -> 1 with Cl_z trivial
    if (G->size() * rc.image_Ez != rc.unit_count)
        throw std::logic_error("ray class group: exact sequence check failed");
    std::vector<std::string> labels;
    rc.G = G;
    for (long g = 0; g < G->size(); ++g) labels.push_back(rc.label(g));
    G->set_labels(labels);

    // generator of E_m modulo torsion
    if (k.quadratic()) {
        KElem e = ud.eps_plus;
        KElem x = e;
        rc.eps_m_steps = 1;
        while (R.index(x) != one) { x = x * e; ++rc.eps_m_steps; }
        rc.eps_m = x;
        // -1 lies in E_m only when z is empty and -1 = 1 mod f
        rc.eps_m_sign_free = m.z.empty() && R.index(KElem(-1, k.D)) == one;
    } else {
        rc.eps_m = KElem(1, 0);
        rc.eps_m_sign_free = m.z.empty() && R.index(KElem(-1, 0)) == one;
    }
    return rc;
}

GroupHom ray_projection(const RayClassData& big, const RayClassData& small)
{
    if (!small.m.f.contains(big.m.f)) throw std::invalid_argument("ray_projection: f~ does not divide f");
    for (int v : small.m.z)
        if (std::find(big.m.z.begin(), big.m.z.end(), v) == big.m.z.end())
            throw std::invalid_argument("ray_projection: z~ not contained in z");
    GroupHom h;
    h.src = big.G;
    h.dst = small.G;
    for (size_t i = 0; i < big.G->rank(); ++i) {
        Elem e = big.G->zero();
        e[i] = 1;
        KElem a = big.positive_rep(big.G->index(e));
        h.images.push_back(small.G->elem(small.class_of(a)));
    }
    return h;
}

long unit_index(const RayClassData& n, const RayClassData& m)
{
    if (n.m.z != m.m.z) throw std::invalid_argument("unit_index: cycles differ at infinity");
    return m.image_Ez / n.image_Ez;
}

// ---------------------------------------------------------------------------

namespace {

KElem reduce_mod(const Lattice& I, const KElem& x)
{
    auto [u, v] = x.omega_coords();
    if (!I.k.quadratic()) {
        Q t = u - Q(floor_q(u / I.A)) * I.A;
        return KElem(t, Q(0), 0);
    }
    Q n2 = Q(floor_q(v / I.C));
    u -= n2 * I.B;
    v -= n2 * I.C;
    u -= Q(floor_q(u / I.A)) * I.A;
    return KElem::from_omega(I.k, u, v);
}

}  // namespace

std::vector<KElem> torsion_classes(const Lattice& g, const Lattice& I)
{
    const BaseField& k = g.k;
    Lattice L = g.inverse() * I;
    auto lb = L.basis();
    long ni = Q(I.A / L.A).get_num().get_si();
    long nj = k.quadratic() ? Q(I.C / L.C).get_num().get_si() : 1;
    auto fac = factor_ideal(g);
    std::vector<Lattice> bad;
    for (auto& [P, e] : fac) bad.push_back(P.P * g.inverse() * I);
    std::vector<KElem> out;
    for (long j = 0; j < nj; ++j)
        for (long i = 0; i < ni; ++i) {
            KElem y = Q(i) * lb[0];
            if (k.quadratic()) y = y + Q(j) * lb[1];
            y.D = k.D;
            bool exact = true;
            for (auto& B : bad) exact = exact && !B.contains(y);
            if (exact) out.push_back(reduce_mod(I, y));
        }
    return out;
}

long class_of_torsion(const RayClassData& n, const KElem& y, const Lattice& J)
{
    const BaseField& k = n.m.k;
    Lattice mod = n.m.f * J.inverse();
    Q q = mod.rational_generator();
    KElem b = y;
    b.D = k.D;
    auto positive = [&](const KElem& x) {
        for (int v : n.m.z)
            if (x.sign(v) <= 0) return false;
        return !x.is_zero();
    };
    while (!positive(b)) b = b + KElem(q, Q(0), k.D);
    KElem j = totally_positive_generator(J);
    return n.class_of(b * j);
}

GroupRingElem build_A(const RayClassData& n)
{
    const BaseField& k = n.m.k;
    KElem delta = different_generator(k);
    Lattice Dk = Lattice::ideal(k, {delta});
    Lattice J = n.m.f * Dk;
    GroupRingElem A(n.G);
    for (auto& y : torsion_classes(n.m.f, Dk.inverse())) {
        Q t = y.trace();
        CycNum e = CycNum::root(t.get_num().get_si() % t.get_den().get_si(), t.get_den().get_si());
        A.add_to(class_of_torsion(n, y, J), e);
    }
    return A;
}

CycNum WClass::xi(const KElem& x) const
{
    Q t = (alpha * x).trace();
    Z num = t.get_num(), den = t.get_den();
    Z r;
    mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return CycNum::root(r.get_si(), den.get_si());
}

std::vector<WClass> w_orbit(const RayClassData& m)
{
    const BaseField& k = m.m.k;
    Lattice Dk = Lattice::ideal(k, {different_generator(k)});
    Lattice I = (m.m.f * Dk).inverse();
    std::vector<WClass> out;
    for (long c = 0; c < m.G->size(); ++c) out.push_back(WClass{m.positive_rep(c), I, m.m.f});
    return out;
}

bool w_equivalent(const RayClassData& m, const WClass& u, const WClass& v)
{
    if (!(u.I == v.I)) return false;
    return m.class_of(u.alpha) == m.class_of(v.alpha);
}

}  // namespace tz
