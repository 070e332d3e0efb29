// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "tz/arith.hpp"
#include "tz/coleman.hpp"

using namespace tz;

namespace {

// pinned tolerances and budgets
constexpr long kIntegralityDigits = 10;  // criteria 4 and 6
constexpr long kTwoPathDigits = 3;       // criterion 7
constexpr long kPrec = 40;               // p-adic precision M
constexpr int kCap = 32;                 // series cap N
constexpr int kRandomUnits = 5;
constexpr unsigned kSeed = 17;

const BaseField QQ{0};

Cycle qcyc(const std::string& s) { return parse_cycle(QQ, s); }

struct Result {
    bool pass = true;
    std::string note;
    void need(bool ok, const std::string& why)
    {
        if (!ok && pass) note = why;
        pass = pass && ok;
    }
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Result()>& body)
{
    auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r.pass = false;
        r.note = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > budget_s) r.need(false, "over time budget");
    if (!r.pass) ++failures;
    std::printf("[%s] %2d %-48s %7.2f s / %3.0f s%s%s\n", r.pass ? "PASS" : "FAIL", id, title, dt, budget_s,
                r.note.empty() ? "" : "  ", r.note.c_str());
    std::fflush(stdout);
}

std::vector<std::pair<std::string, SemilocalUnit>> random_units(const LocalSetup& S, int count, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::string, SemilocalUnit>> us;
    for (int i = 0; i < count; ++i) us.push_back({"random" + std::to_string(i), random_semilocal(S, rng)});
    return us;
}

const std::vector<std::pair<long, int>> kCyclotomic = {{3, 0}, {3, 1}, {5, 0}, {7, 0}};

}  // namespace

int main()
{
    criterion(1, "closed-form twisted zetas (k = Q)", 5, [] {
        Result r;
        Lattice Z1 = Lattice::unit(QQ);
        ConeDecomp C = cone_decomp(QQ, KElem(1, 0), KElem(1, 0));
        for (long f : {3L, 4L, 5L, 7L, 9L, 12L})
            for (long a = 1; a < f; ++a) {
                if (std::gcd(a, f) != 1) continue;
                AddChar xi = [a, f](const KElem& x) { return CycNum::root(mod(a * x.a.get_num().get_si(), f), f); };
                CycNum z = CycNum::root(a, f);
                r.need(twisted_zeta_zero(xi, Z1, C) == z / (CycNum(1) - z),
                       "f=" + std::to_string(f) + " a=" + std::to_string(a));
            }
        return r;
    });

    criterion(2, "Phi_m(0)^* equals the divisor sum", 60, [] {
        Result r;
        for (long f = 1; f <= 12; ++f)
            for (const char* inf : {"*inf", ""}) {
                Cycle m = qcyc(std::to_string(f) + inf);
                r.need(verify_thm22(m).equal, m.str());
            }
        Cycle m = parse_cycle(BaseField{2}, "(sqrt2)*(3+sqrt2)*inf1*inf2");
        r.need(verify_thm22(m).equal, m.str());
        return r;
    });

    criterion(3, "character support of Phi(0)", 5, [] {
        Result r;
        for (const char* c : {"3*inf", "4*inf", "5*inf", "7*inf", "12*inf", "8*inf"})
            r.need(prop21_check(full_extension(ray_data(qcyc(c)))).ok(), c);
        for (auto [D, c] : std::vector<std::pair<long, const char*>>{
                 {2, "(sqrt2)*(3+sqrt2)*inf1*inf2"}, {2, "(3+sqrt2)*inf"}, {2, "7*inf"}, {5, "11*inf"}})
            r.need(prop21_check(full_extension(ray_data(parse_cycle(BaseField{D}, c)))).ok(), c);
        Extension Ki = full_extension(ray_data(qcyc("4*inf")));
        GroupRingElem phi = phi_field(Ki);
        Character chi0{Ki.G, Ki.G->zero()};
        r.need(char_apply(chi0, phi) == CycNum(Q(-1, 4)), "chi_0 on Q(i)");
        return r;
    });

    criterion(4, "integrality of s for Q(mu_{p^{n+1}})", 60, [] {
        Result r;
        for (auto [p, n] : kCyclotomic) {
            LocalSetup S = cyclotomic_setup(p, n, kPrec);
            std::vector<Theta> th;
            for (auto& [label, u] : random_units(S, kRandomUnits, kSeed)) th.push_back(Theta{{u}, label});
            IntegralityReport rep = integrality_check(S, th);
            std::string tag = "p=" + std::to_string(p) + " n=" + std::to_string(n);
            r.need(rep.in_Qp, tag + " coefficients outside Q_p");
            r.need(rep.min_valuation >= 0, tag + " negative valuation");
            r.need(rep.precision >= kIntegralityDigits, tag + " precision");
        }
        return r;
    });

    criterion(5, "s_bar = H((1 - zeta)^-1, u) mod p^{n+1}", 30, [] {
        Result r;
        for (auto [p, n] : kCyclotomic) {
            LocalSetup S = cyclotomic_setup(p, n, kPrec);
            auto units = random_units(S, kRandomUnits, kSeed);
            units.push_back({"4", SemilocalUnit{{{PadicElem(S.L, 4)}}}});
            Conj44Report rep = conj44_check(p, n, units, S);
            r.need(rep.pass, "p=" + std::to_string(p) + " n=" + std::to_string(n));
        }
        LocalSetup S3 = cyclotomic_setup(3, 0, kPrec);
        PGroupRing s = s_value(S3, {SemilocalUnit{{{PadicElem(S3.L, 4)}}}});
        for (auto& c : s.c) r.need(c.residue_mod(2) == 2, "alpha_c mod 9 for u = 4");
        r.need(hilbert_pair(eta_one(), PadicElem(S3.L, 4)) == 2, "pairing with 4 mod 3");
        return r;
    });

    criterion(6, "Q(sqrt2), p = 7 desk instance", 120, [] {
        Result r;
        Extension K = full_extension(ray_data(parse_cycle(BaseField{2}, "(sqrt2)*(3+sqrt2)*inf1*inf2")));
        LocalSetup S = local_setup(K, 7, kPrec);
        std::mt19937_64 rng(kSeed);
        Theta th = build_theta(S, rng);
        IntegralityReport rep = integrality_check(S, {th});
        r.need(th.regulator_unit, "R(theta_0) not invertible");
        r.need(rep.in_Qp, "coefficients outside Q_p");
        r.need(rep.min_valuation >= 0, "negative valuation");
        r.need(rep.precision >= kIntegralityDigits, "precision");
        return r;
    });

    criterion(7, "a_h power series path vs regulator path", 60, [] {
        Result r;
        struct Inst {
            const char* m;
            int N;
        };
        // K = k(m) is Q(mu_3) for 6*inf and Q(mu_9) for 18*inf
        for (Inst c : {Inst{"6*inf", kCap}, Inst{"18*inf", 2 * kCap}}) {
            Cycle m = qcyc(c.m);
            LocalSetup S = local_setup(full_extension(ray_data(m)), 3, kPrec);
            std::mt19937_64 rng(kSeed);
            std::vector<PadicElem> us{PadicElem(S.L, 4)};
            for (int i = 0; i < 2; ++i) us.push_back(random_semilocal(S, rng).comp[0][0]);
            for (auto& u : us) {
                AhReport a = a_h_path(m, 3, u, c.N, kPrec);
                r.need(a.agree, std::string(c.m) + " paths differ");
                r.need(a.integral, std::string(c.m) + " a_h not in Z_3");
                r.need(a.precision >= kTwoPathDigits, std::string(c.m) + " precision");
            }
        }
        return r;
    });

    criterion(8, "V_r filter, idempotence, distribution relation", 30, [] {
        Result r;
        const int N = kCap;
        CycNum z0, one(1);
        using S = TruncSeries<CycNum>;
        std::mt19937_64 rng(kSeed);
        std::uniform_int_distribution<long> kd(0, N), cd(-5, 5);
        for (int t = 0; t < 100; ++t) {
            long p = t % 2 ? 3 : 5, k = kd(rng);
            int rr = 1 + t % 2;
            long pr = rr == 1 ? p : p * p;
            CycNum c = CycNum(cd(rng)) * CycNum::root(t % 4, 4);
            S b = (S::constant(1, N, z0, one) + S::binomial_power(1, N, z0, one, k)).scaled(c);
            S v = b.V(p, {rr});
            r.need(v == (k % pr == 0 ? b : S(1, N, z0)), "exponent filter k=" + std::to_string(k));
            r.need(v.V(p, {rr}) == v, "idempotence");
        }
        for (long p : {3L, 5L})
            for (long fp : {2L, 4L, 7L})
                for (int m : {0, 1}) {
                    auto rho = int_char(1, fp);
                    auto [lhs, rhs] = distribution_sides(rho, p, m, 1);
                    r.need(lhs == rhs, "distribution polynomial p=" + std::to_string(p));
                    r.need(distribution_series_check(rho, p, m, 1, N), "distribution series p=" + std::to_string(p));
                }
        return r;
    });

    criterion(9, "Q(mu_5), p = 3 unramified: valuation >= delta", 30, [] {
        Result r;
        LocalSetup S = local_setup(full_extension(ray_data(qcyc("5*inf"))), 3, kPrec);
        std::mt19937_64 rng(kSeed);
        std::vector<Theta> th{build_theta(S, rng)};
        for (auto& [label, u] : random_units(S, kRandomUnits, kSeed)) th.push_back(Theta{{u}, label});
        IntegralityReport rep = integrality_check(S, th);
        r.need(rep.delta == 1, "delta");
        r.need(rep.min_valuation >= rep.delta, "min valuation " + q_str(rep.min_valuation));
        r.need(rep.precision >= rep.delta + 5, "precision");
        return r;
    });

    criterion(10, "Gauss sums and A for z-only cycles", 5, [] {
        Result r;
        for (long f : {3L, 4L, 5L, 7L}) {
            auto R = ray_data(qcyc(std::to_string(f) + "*inf"));
            GroupRingElem A = build_A(*R);
            for (auto& chi : all_characters(R->G)) {
                if (!(conductor(kernel_field(R, chi)).m.f == R->m.f)) continue;
                CycNum g = char_apply(chi.conj(), A);
                r.need(g * g.conj() == CycNum(f), "f=" + std::to_string(f));
            }
        }
        for (auto [D, c] : std::vector<std::pair<long, const char*>>{{0, "1*inf"}, {2, "1*inf1*inf2"}, {5, "1*inf"}}) {
            auto R = ray_data(parse_cycle(BaseField{D}, c));
            r.need(build_A(*R) == GroupRingElem::identity(R->G, CycNum(1)), c);
        }
        return r;
    });

    std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
