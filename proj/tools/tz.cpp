#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <iomanip>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "toml.hpp"
#include "tz/arith.hpp"
#include "tz/coleman.hpp"

using namespace tz;
namespace fs = std::filesystem;

static const char* kSchema = "tz-report/1";

enum Exit { kOk = 0, kFail = 1, kScope = 2, kPrecision = 3 };

struct RunConfig {
    std::string field = "Q";
    std::string cycle;
    long p = 0;
    int n = 0;
    long prec = 40;
    int cap = 32;
    unsigned long seed = 17;
    std::string path = "direct";
    std::string units;
    std::string thetas = "auto:1";
    std::string output;

    json to_json() const
    {
        return json{{"field", field}, {"cycle", cycle}, {"p", p},       {"n", n},           {"prec", prec},
                    {"cap", cap},     {"seed", seed},   {"path", path}, {"units", units}, {"thetas", thetas}};
    }
};

struct Outcome {
    int code = kOk;
    std::string status = "ok";
    std::string message;
    json result = json::object();
    json provenance = json::object();
    std::string summary;
};

struct ScopeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// configuration

struct CliValues {
    std::optional<std::string> field, cycle, path, units, thetas, output;
    std::optional<long> p, prec;
    std::optional<int> n, cap;
    std::optional<unsigned long> seed;
};

static void load_toml(RunConfig& c, const std::string& file)
{
    toml::table t;
    try {
        t = toml::parse_file(file);
    } catch (const toml::parse_error& e) {
        throw std::invalid_argument("config " + file + ": " + std::string(e.description()));
    }
    if (auto v = t["field"].value<std::string>()) c.field = *v;
    if (auto v = t["cycle"].value<std::string>()) c.cycle = *v;
    if (auto v = t["p"].value<int64_t>()) c.p = *v;
    if (auto v = t["n"].value<int64_t>()) c.n = (int)*v;
    if (auto v = t["prec"].value<int64_t>()) c.prec = *v;
    if (auto v = t["cap"].value<int64_t>()) c.cap = (int)*v;
    if (auto v = t["seed"].value<int64_t>()) c.seed = (unsigned long)*v;
    if (auto v = t["path"].value<std::string>()) c.path = *v;
    if (auto v = t["units"].value<std::string>()) c.units = *v;
    if (auto v = t["thetas"].value<std::string>()) c.thetas = *v;
    if (auto v = t["output"].value<std::string>()) c.output = *v;
}

static void merge(RunConfig& c, const CliValues& v)
{
    if (v.field) c.field = *v.field;
    if (v.cycle) c.cycle = *v.cycle;
    if (v.path) c.path = *v.path;
    if (v.units) c.units = *v.units;
    if (v.thetas) c.thetas = *v.thetas;
    if (v.output) c.output = *v.output;
    if (v.p) c.p = *v.p;
    if (v.prec) c.prec = *v.prec;
    if (v.n) c.n = *v.n;
    if (v.cap) c.cap = *v.cap;
    if (v.seed) c.seed = *v.seed;
}

static void add_options(CLI::App* sub, CliValues& v, const std::vector<std::string>& which)
{
    for (const auto& w : which) {
        if (w == "field") sub->add_option("--field", v.field, "base field: Q or Q(sqrtD)");
        if (w == "cycle") sub->add_option("--cycle", v.cycle, "cycle, e.g. \"12*inf\" or \"(sqrt2)*(3+sqrt2)*inf1*inf2\"");
        if (w == "p") sub->add_option("--p", v.p, "odd prime");
        if (w == "n") sub->add_option("--n", v.n, "level: K = Q(mu_{p^{n+1}})");
        if (w == "prec") sub->add_option("--prec", v.prec, "p-adic precision M (default 40)");
        if (w == "cap") sub->add_option("--cap", v.cap, "power series cap N (default 32)");
        if (w == "seed") sub->add_option("--seed", v.seed, "seed for randomized choices (default 17)");
        if (w == "path") sub->add_option("--path", v.path, "direct | thm22 | cor23");
        if (w == "units") sub->add_option("--units", v.units, "random:N or a comma list of integers");
        if (w == "thetas") sub->add_option("--thetas", v.thetas, "auto:N");
    }
}

// ---------------------------------------------------------------------------
// helpers

static Cycle require_cycle(const RunConfig& c, const BaseField& k)
{
    if (c.cycle.empty()) throw std::invalid_argument("--cycle is required");
    return parse_cycle(k, c.cycle);
}

static void require_prime(long p)
{
    if (p <= 2 || !is_prime(p)) throw ScopeError("--p must be an odd prime");
}

static long ipow(long p, long n)
{
    long r = 1;
    for (long i = 0; i < n; ++i) r *= p;
    return r;
}

static long parse_count(const std::string& spec, const std::string& prefix)
{
    if (spec.rfind(prefix, 0) != 0) return -1;
    long n = std::stol(spec.substr(prefix.size()));
    if (n < 1) throw std::invalid_argument(spec + ": count must be positive");
    return n;
}

static std::vector<std::pair<std::string, SemilocalUnit>> parse_units(const LocalSetup& S, const std::string& spec,
                                                                      unsigned long seed)
{
    std::vector<std::pair<std::string, SemilocalUnit>> us;
    long r = parse_count(spec, "random:");
    if (r > 0) {
        std::mt19937_64 rng(seed);
        for (long i = 0; i < r; ++i) us.push_back({"random:" + std::to_string(i), random_semilocal(S, rng)});
        return us;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        long a = std::stol(item);
        if (a == 0 || a % S.p == 0) throw ScopeError("unit " + item + " is not prime to p");
        KNum x;
        x.z = CycNum(a);
        x.a = KElem(a, S.k.D);
        us.push_back({item, semilocal_from_global(S, x)});
    }
    if (us.empty()) throw std::invalid_argument("no units given");
    return us;
}

static json residues(const PGroupRing& s, int digits)
{
    json r = json::array();
    for (auto& c : s.c) {
        if (c.exact_zero() || c.is_zero()) r.push_back(0);
        else if (!c.in_Qp() || c.val_or_prec() < 0 || c.absprec() < digits) r.push_back(nullptr);
        else r.push_back(c.residue_mod(digits).get_str());
    }
    return r;
}

static json group_json(const GroupPtr& G)
{
    json labels = json::array();
    for (long g = 0; g < G->size(); ++g) labels.push_back(G->label(g));
    return json{{"orders", G->orders()}, {"labels", labels}};
}

// ---------------------------------------------------------------------------
// commands

static Outcome cmd_theta(const RunConfig& c)
{
    BaseField k = parse_field(c.field);
    Cycle m = require_cycle(c, k);
    Outcome o;
    GroupRingElem t = theta_zero(m);
    o.result = {{"cycle", m.str()}, {"group", group_json(ray_data(m)->G)}, {"value", gr_to_json(t)}, {"exact", true}};
    o.provenance = {{"path", k.quadratic() ? "shintani" : "bernoulli"}};
    o.summary = "Theta_m(0) = " + gr_str(t);
    return o;
}

static GroupRingElem phi_by(const std::string& path, const Cycle& m)
{
    if (path == "direct") return phi_zero(m);
    if (path == "thm22") return verify_thm22(m).rhs.involution();
    throw std::invalid_argument("unknown path " + path);
}

static Outcome cmd_phi(const RunConfig& c)
{
    BaseField k = parse_field(c.field);
    Cycle m = require_cycle(c, k);
    Outcome o;
    o.provenance = {{"path", c.path}};
    if (c.path == "cor23") {
        Extension K = full_extension(ray_data(m));
        GroupRingElem a = cor23_phi(K), b = phi_field(K);
        o.result = {{"object", "Phi_{K/k}(0), K = k(m)"},
                    {"cycle", m.str()},
                    {"conductor", conductor(K).m.str()},
                    {"value", gr_to_json(a)},
                    {"cross_check", {{"path", "field"}, {"equal", a == b}}},
                    {"exact", true}};
        o.summary = "Phi_{K/k}(0) = " + gr_str(a);
        if (!(a == b)) o.code = kFail;
        return o;
    }
    GroupRingElem a = phi_by(c.path, m);
    std::string other = c.path == "direct" ? "thm22" : "direct";
    bool eq = a == phi_by(other, m);
    o.result = {{"object", "Phi_m(0)"},
                {"cycle", m.str()},
                {"group", group_json(ray_data(m)->G)},
                {"value", gr_to_json(a)},
                {"cross_check", {{"path", other}, {"equal", eq}}},
                {"exact", true}};
    o.summary = "Phi_m(0) = " + gr_str(a);
    if (!eq) o.code = kFail;
    return o;
}

static Outcome cmd_gauss(const RunConfig& c)
{
    BaseField k = parse_field(c.field);
    Cycle m = require_cycle(c, k);
    auto R = ray_data(m);
    Outcome o;
    GroupRingElem A = build_A(*R);
    Q Nf = m.f.norm();
    json rows = json::array();
    bool ok = true;
    for (auto& chi : all_characters(R->G)) {
        Extension K = kernel_field(R, chi);
        bool primitive = conductor(K).m.f == m.f;
        CycNum g = gauss_sum(R, chi);
        json row{{"character", chi.a}, {"value", g.to_json()}, {"primitive", primitive}};
        if (primitive) {
            bool law = g * g.conj() == CycNum(Nf);
            row["norm_law"] = law;
            ok = ok && law;
        }
        rows.push_back(row);
    }
    bool identity = Nf != 1 || A == GroupRingElem::identity(R->G, CycNum(1));
    o.result = {{"cycle", m.str()}, {"A", gr_to_json(A)}, {"characters", rows}, {"A_is_identity_when_f_trivial", identity}};
    o.provenance = {{"path", "torsion classes"}};
    o.summary = std::string("Gauss sums ") + (ok && identity ? "satisfy" : "violate") + " |g|^2 = N f";
    if (!ok || !identity) o.code = kFail;
    return o;
}

static Outcome cmd_thm22(const RunConfig& c)
{
    BaseField k = parse_field(c.field);
    Cycle m = require_cycle(c, k);
    Thm22Report r = verify_thm22(m);
    Outcome o;
    json terms = json::array();
    for (auto& [label, x] : r.terms) terms.push_back({{"divisor", label}, {"value", gr_to_json(x)}});
    o.result = {{"cycle", m.str()},
                {"lhs", gr_to_json(r.lhs)},
                {"rhs", gr_to_json(r.rhs)},
                {"terms", terms},
                {"equal", r.equal}};
    o.provenance = {{"path", "direct vs divisor sum"}};
    o.summary = std::string("Phi_m(0)^* vs divisor sum: ") + (r.equal ? "equal" : "DIFFER");
    if (!r.equal) {
        o.code = kFail;
        o.result["diff"] = gr_to_json(r.lhs - r.rhs);
    }
    return o;
}

static Outcome cmd_prop21(const RunConfig& c)
{
    BaseField k = parse_field(c.field);
    Cycle m = require_cycle(c, k);
    Prop21Report r = prop21_check(full_extension(ray_data(m)));
    Outcome o;
    json vals = json::array();
    for (auto& [chi, v] : r.values) vals.push_back({{"character", chi}, {"value", v.to_json()}});
    o.result = {{"cycle", m.str()},
                {"minus_part", r.idempotent_ok},
                {"support_on_odd_characters", r.support_ok},
                {"trivial_character_value", r.q_value_ok},
                {"values", vals},
                {"pass", r.ok()}};
    o.provenance = {{"path", "characters of Gal(K/k)"}};
    o.summary = std::string("character support of Phi(0): ") + (r.ok() ? "as predicted" : "MISMATCH");
    if (!r.ok()) o.code = kFail;
    return o;
}

static std::string default_cycle(const BaseField& k, long p)
{
    if (!k.quadratic()) return std::to_string(p) + "*inf";
    if (k.D == 2) return "(sqrt2)*(3+sqrt2)*inf1*inf2";
    throw std::invalid_argument("--cycle is required for " + k.name());
}

static void finish_integrality(Outcome& o, const IntegralityReport& r)
{
    if (r.integral) return;
    o.code = r.precision_ok ? kFail : kPrecision;
    o.status = r.precision_ok ? "fail" : "precision";
}

static Outcome cmd_integrality(const RunConfig& c, bool unramified)
{
    BaseField k = parse_field(c.field);
    long p = c.p ? c.p : (unramified ? 3 : 0);
    require_prime(p);
    split_embedding(k, p, 1);
    std::string cyc = !c.cycle.empty() ? c.cycle : unramified ? "5*inf" : default_cycle(k, p);
    Cycle m = parse_cycle(k, cyc);
    LocalSetup S = local_setup(full_extension(ray_data(m)), p, c.prec);
    if (unramified && S.places[0].ramified) throw ScopeError("p ramifies in K; the unramified bound needs p unramified");
    long count = parse_count(c.thetas, "auto:");
    if (count < 1) throw std::invalid_argument("--thetas must be auto:N");
    std::mt19937_64 rng(c.seed);
    std::vector<Theta> th;
    for (long i = 0; i < count; ++i) {
        th.push_back(build_theta(S, rng));
        th.back().origin += "#" + std::to_string(i);
    }
    IntegralityReport r = integrality_check(S, th);
    Outcome o;
    o.result = r.to_json();
    o.result["cycle"] = m.str();
    json units = json::array();
    for (auto& t : th) units.push_back({{"origin", t.origin}, {"regulator_invertible", t.regulator_unit}});
    o.result["thetas"] = units;
    o.provenance = {{"path", "regulator"}, {"precision", r.precision}, {"seed", c.seed}};
    o.summary = "min valuation " + q_str(r.min_valuation) + ", delta " + std::to_string(r.delta) + ", precision " +
                std::to_string(r.precision) + ": " + o.result["verdict"].get<std::string>();
    finish_integrality(o, r);
    return o;
}

static Outcome cmd_artin_hasse(const RunConfig& c)
{
    require_prime(c.p);
    if (c.n < 0) throw ScopeError("--n must be >= 0");
    LocalSetup S = cyclotomic_setup(c.p, c.n, c.prec);
    auto units = parse_units(S, c.units.empty() ? "random:5" : c.units, c.seed);
    std::vector<Theta> th;
    for (auto& [label, u] : units) th.push_back(Theta{{u}, label});
    IntegralityReport r = integrality_check(S, th);
    Outcome o;
    o.result = r.to_json();
    json res = json::array();
    for (size_t i = 0; i < r.s.size(); ++i)
        res.push_back({{"unit", units[i].first}, {"residues_mod_p^(n+1)", residues(r.s[i], c.n + 1)}});
    o.result["residues"] = res;
    o.result["field"] = "Q(mu_" + std::to_string(ipow(c.p, c.n + 1)) + ")";
    o.provenance = {{"path", "regulator"}, {"precision", r.precision}, {"seed", c.seed}};
    o.summary = "s_{K/Q}(u) for " + std::to_string(units.size()) + " units: " + o.result["verdict"].get<std::string>();
    finish_integrality(o, r);
    return o;
}

static Outcome cmd_conj44(const RunConfig& c)
{
    require_prime(c.p);
    if (c.n < 0) throw ScopeError("--n must be >= 0");
    LocalSetup S = cyclotomic_setup(c.p, c.n, c.prec);
    auto units = parse_units(S, c.units.empty() ? "random:5" : c.units, c.seed);
    Conj44Report r = conj44_check(c.p, c.n, units, S);
    Outcome o;
    o.result = r.to_json();
    o.result["field"] = "Q(mu_" + std::to_string(ipow(c.p, c.n + 1)) + ")";
    o.provenance = {{"path", "regulator vs trace formula"}, {"precision", c.prec}, {"seed", c.seed}};
    bool skipped = false;
    for (auto& row : r.rows) skipped = skipped || !row.integral;
    o.summary = std::string("s_bar = H((1 - zeta)^-1, u) mod p^(n+1): ") + (r.pass ? "holds" : skipped ? "skipped" : "FAILS");
    if (skipped) {
        o.code = kPrecision;
        o.status = "precision";
        o.message = "integrality not established for some unit; congruence skipped";
    } else if (!r.pass) {
        o.code = kFail;
        o.status = "fail";
    }
    return o;
}

static Outcome cmd_two_path(const RunConfig& c)
{
    require_prime(c.p);
    BaseField k = parse_field(c.field);
    if (k.quadratic()) throw ScopeError("regulator path only for " + k.name());
    Cycle m = require_cycle(c, k);
    LocalSetup S = local_setup(full_extension(ray_data(m)), c.p, c.prec);
    auto units = parse_units(S, c.units.empty() ? "random:2" : c.units, c.seed);
    Outcome o;
    json rows = json::array();
    bool agree = true, integral = true;
    long prec = c.prec;
    for (auto& [label, u] : units) {
        AhReport r = a_h_path(m, c.p, u.comp[0][0], c.cap, c.prec);
        json row = r.to_json();
        row["unit"] = label;
        rows.push_back(row);
        agree = agree && r.agree;
        integral = integral && r.integral;
        prec = std::min(prec, r.precision);
    }
    o.result = {{"cycle", m.str()}, {"rows", rows}, {"agree", agree}, {"integral", integral}, {"precision", prec}};
    o.provenance = {{"path", "power series vs regulator"}, {"precision", prec}, {"series_cap", c.cap}, {"seed", c.seed}};
    o.summary = std::string("a_h two paths ") + (agree ? "agree" : "DIFFER") + " to p^" + std::to_string(prec);
    if (prec < 1) {
        o.code = kPrecision;
        o.status = "precision";
        o.message = "series cap too small for any guaranteed digit; raise --cap";
    } else if (!agree || !integral) {
        o.code = kFail;
    }
    return o;
}

// ---------------------------------------------------------------------------
// cache

static fs::path cache_dir()
{
    if (const char* d = std::getenv("TZ_CACHE_DIR")) return d;
    if (const char* x = std::getenv("XDG_CACHE_HOME")) return fs::path(x) / "tz";
    if (const char* h = std::getenv("HOME")) return fs::path(h) / ".cache" / "tz";
    return fs::temp_directory_path() / "tz-cache";
}

static std::string fnv1a(const std::string& s)
{
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

static std::string slug(const std::string& cmd)
{
    std::string s;
    for (char ch : cmd) s += std::isalnum((unsigned char)ch) ? ch : '-';
    return s;
}

static void write_atomic(const fs::path& target, const std::string& text)
{
    fs::create_directories(target.parent_path());
    static std::atomic<unsigned> counter{0};
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream f(tmp, std::ios::binary);
        f << text;
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

static std::optional<json> cache_read(const fs::path& file, const json& key)
{
    std::ifstream f(file, std::ios::binary);
    if (!f) return std::nullopt;
    try {
        json j = json::parse(f);
        if (j.at("key") != key) return std::nullopt;
        return j;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

static int cmd_cache_ls()
{
    json out = json::array();
    fs::path d = cache_dir();
    if (fs::exists(d))
        for (auto& e : fs::directory_iterator(d)) {
            if (e.path().extension() != ".json") continue;
            json row{{"file", e.path().filename().string()}, {"bytes", (long)e.file_size()}};
            try {
                std::ifstream f(e.path());
                json j = json::parse(f);
                row["command"] = j.at("key").at("command");
                row["exit"] = j.at("exit");
            } catch (const std::exception&) {
                row["command"] = nullptr;
            }
            out.push_back(row);
        }
    std::cout << json{{"schema", kSchema}, {"cache_dir", d.string()}, {"entries", out}}.dump(2) << "\n";
    return kOk;
}

static int cmd_cache_clear()
{
    fs::path d = cache_dir();
    long removed = 0;
    if (fs::exists(d))
        for (auto& e : fs::directory_iterator(d)) {
            auto name = e.path().filename().string();
            if (e.path().extension() == ".json" || name.find(".json.tmp.") != std::string::npos) {
                fs::remove(e.path());
                ++removed;
            }
        }
    std::cout << json{{"schema", kSchema}, {"cache_dir", d.string()}, {"removed", removed}}.dump(2) << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

static int run(const std::string& command, const RunConfig& c, bool use_cache, bool quiet,
               const std::function<Outcome(const RunConfig&)>& fn)
{
    json key{{"schema", kSchema}, {"command", command}, {"config", c.to_json()}};
    fs::path file = cache_dir() / (slug(command) + "-" + fnv1a(key.dump()) + ".json");
    json report;
    int code = kOk;
    std::string summary;
    bool hit = false;
    if (use_cache)
        if (auto j = cache_read(file, key)) {
            report = j->at("report");
            code = j->at("exit").get<int>();
            summary = j->value("summary", "");
            hit = true;
        }
    if (!hit) {
        Outcome o;
        bool cacheable = true;
        try {
            o = fn(c);
        } catch (const ScopeError& e) {
            o.code = kScope, o.status = "scope", o.message = e.what(), cacheable = false;
        } catch (const std::domain_error& e) {
            std::string msg = e.what();
            bool prec = msg.find("precision") != std::string::npos;
            o.code = prec ? kPrecision : kScope;
            o.status = prec ? "precision" : "scope";
            o.message = msg;
            cacheable = false;
        } catch (const std::invalid_argument& e) {
            o.code = kScope, o.status = "scope", o.message = e.what(), cacheable = false;
        }
        if (o.code == kFail && o.status == "ok") o.status = "fail";
        report = json{{"schema", kSchema},
                      {"command", command},
                      {"config", c.to_json()},
                      {"status", o.status},
                      {"provenance", o.provenance},
                      {"result", o.result}};
        if (!o.message.empty()) report["message"] = o.message;
        code = o.code;
        summary = o.summary.empty() ? o.message : o.summary;
        if (use_cache && cacheable)
            write_atomic(file, json{{"key", key}, {"report", report}, {"exit", code}, {"summary", summary}}.dump());
    }
    std::string text = report.dump(2) + "\n";
    if (c.output.empty()) std::cout << text;
    else write_atomic(c.output, text);
    if (!quiet) {
        std::cerr << std::left << std::setw(22) << command << std::setw(11) << report["status"].get<std::string>()
                  << summary << (hit ? "  [cached]" : "") << "\n";
    }
    return code;
}

int main(int argc, char** argv)
{
    CLI::App app{"twisted zeta elements, p-adic regulators and their integrality checks"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_file;
    bool no_cache = false, quiet = false;
    CliValues v;
    app.add_option("--config", config_file, "TOML file with RunConfig keys")->check(CLI::ExistingFile);
    app.add_flag("--no-cache", no_cache, "bypass the report cache");
    app.add_flag("-q,--quiet", quiet, "no summary line on stderr");
    app.add_option("-o,--output", v.output, "write the JSON report to a file");

    std::string command;
    std::function<Outcome(const RunConfig&)> fn;
    auto bind = [&](CLI::App* sub, const std::string& name, std::function<Outcome(const RunConfig&)> f) {
        sub->callback([&, name, f] {
            command = name;
            fn = f;
        });
    };

    auto* theta = app.add_subcommand("theta", "Theta_n(0) for a cycle");
    add_options(theta, v, {"field", "cycle"});
    bind(theta, "theta", cmd_theta);

    auto* phi = app.add_subcommand("phi", "Phi_m(0) by one of the independent paths");
    add_options(phi, v, {"field", "cycle", "path"});
    bind(phi, "phi", cmd_phi);

    auto* gauss = app.add_subcommand("gauss", "Gauss sums chi^-1(A_m)");
    add_options(gauss, v, {"field", "cycle"});
    bind(gauss, "gauss", cmd_gauss);

    auto* verify = app.add_subcommand("verify", "identity and integrality checks");
    verify->require_subcommand(1);
    verify->fallthrough();
    auto* t22 = verify->add_subcommand("thm2-2", "Phi_m(0)^* against the divisor sum");
    add_options(t22, v, {"field", "cycle"});
    bind(t22, "verify thm2-2", cmd_thm22);
    auto* p21 = verify->add_subcommand("prop2-1", "character support of Phi_{K/k}(0)");
    add_options(p21, v, {"field", "cycle"});
    bind(p21, "verify prop2-1", cmd_prop21);
    auto* integ = verify->add_subcommand("integrality", "integrality of s_{K/k}(theta)");
    add_options(integ, v, {"field", "cycle", "p", "prec", "seed", "thetas"});
    bind(integ, "verify integrality", [](const RunConfig& c) { return cmd_integrality(c, false); });
    auto* ah = verify->add_subcommand("artin-hasse", "integrality of s for K = Q(mu_{p^{n+1}})");
    add_options(ah, v, {"p", "n", "prec", "seed", "units"});
    bind(ah, "verify artin-hasse", cmd_artin_hasse);
    auto* c44 = verify->add_subcommand("conj4-4", "congruence between s and the Hilbert pairing");
    add_options(c44, v, {"p", "n", "prec", "seed", "units"});
    bind(c44, "verify conj4-4", cmd_conj44);
    auto* unr = verify->add_subcommand("unramified", "valuation bound delta for p unramified in K");
    add_options(unr, v, {"field", "cycle", "p", "prec", "seed", "thetas"});
    bind(unr, "verify unramified", [](const RunConfig& c) { return cmd_integrality(c, true); });

    auto* two = verify->add_subcommand("two-path", "a_h by power series against the regulator (k = Q)");
    add_options(two, v, {"field", "cycle", "p", "prec", "cap", "seed", "units"});
    bind(two, "verify two-path", cmd_two_path);

    auto* cache = app.add_subcommand("cache", "report cache in $TZ_CACHE_DIR");
    cache->require_subcommand(1);
    bool do_ls = false, do_clear = false;
    cache->add_subcommand("ls", "list cached reports")->callback([&] { do_ls = true; });
    cache->add_subcommand("clear", "remove cached reports")->callback([&] { do_clear = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kScope;
    }
    try {
        if (do_ls) return cmd_cache_ls();
        if (do_clear) return cmd_cache_clear();
        RunConfig c;
        if (!config_file.empty()) load_toml(c, config_file);
        merge(c, v);
        return run(command, c, !no_cache, quiet, fn);
    } catch (const std::exception& e) {
        std::cerr << "tz: " << e.what() << "\n";
        return kScope;
    }
}
