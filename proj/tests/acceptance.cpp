// Acceptance suite: one PASS/FAIL line per criterion, with its runtime limit.
//
// usage: limsup_acceptance PINS.json CLI CONFIG.json [criterion...]
//
// Regression pins (first-run exact values) live in PINS.json. A criterion
// whose pin is missing prints the measured value and fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "limsup/arith.hpp"
#include "limsup/circle_set.hpp"
#include "limsup/harness.hpp"
#include "limsup/overlap.hpp"
#include "limsup/psi.hpp"
#include "limsup/sampling.hpp"
#include "limsup/schedule.hpp"

using namespace limsup;
using json = nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

json g_pins;
std::string g_cli;
std::string g_config;

/// Compares against a pinned exact rational; records the measured value.
bool check_pin(Outcome& out, const std::string& key, const Rational& value) {
    const std::string measured = value.str();
    if (!g_pins.contains(key)) {
        out.pass = false;
        out.detail += " [" + key + " unpinned; measured " + measured + "]";
        return false;
    }
    if (g_pins.at(key).get<std::string>() != measured) {
        out.pass = false;
        out.detail += " [" + key + " drifted: pinned " + g_pins.at(key).get<std::string>() + ", measured " +
                      measured + "]";
        return false;
    }
    return true;
}

std::string approx(const Rational& q) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", q.to_double());
    return buf;
}

void fail(Outcome& out, const std::string& why) {
    out.pass = false;
    out.detail += " [" + why + "]";
}

// ---------------------------------------------------------------------------

Outcome measure_law() {
    Outcome out;
    std::size_t checked = 0;
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        // phi by gcd count, independent of factor_phi
        std::uint64_t phi = 0;
        for (std::uint64_t a = 1; a <= n; ++a) phi += std::gcd(a, n) == 1;
        for (const Rational& radius :
             {Rational(1, 2), Rational(std::uint64_t{1}, n), Rational(std::uint64_t{1}, 2 * n)}) {
            if (radius > Rational(1, 2)) continue;  // 1/n at n = 1 lies outside the set's domain
            const auto e = build_E(n, radius);
            if (!e.validate().empty()) fail(out, "non-canonical E_" + std::to_string(n));
            if (measure(e) != Rational(2) * radius * Rational(phi) / Rational(n))
                fail(out, "n=" + std::to_string(n) + " r=" + radius.str());
            ++checked;
        }
    }
    out.detail = std::to_string(checked) + " sets, exact" + out.detail;
    return out;
}

Outcome decomposition_identities() {
    Outcome out;
    constexpr std::uint64_t top = 2000;
    // phi table up to top^2 by a sieve, independent of factor_phi
    std::vector<std::uint32_t> phi(top * top + 1);
    std::iota(phi.begin(), phi.end(), 0u);
    for (std::uint64_t p = 2; p <= top * top; ++p)
        if (phi[p] == p)
            for (std::uint64_t k = p; k <= top * top; k += p) phi[k] -= phi[k] / static_cast<std::uint32_t>(p);

    std::vector<FactorPhi> fp(top + 1);
    for (std::uint64_t n = 1; n <= top; ++n) fp[n] = factor_phi(n);
    const Rational half(1, 2);
    std::size_t pairs = 0;
    for (std::uint64_t m = 2; m <= top && out.pass; ++m)
        for (std::uint64_t n = m + 1; n <= top; ++n) {
            const auto d = decompose_pair(fp[m], fp[n], half, half);
            const std::uint64_t g = std::gcd(m, n);
            const bool ok = m * n == d.r * d.r * d.s * d.t && g == d.g && g == d.r * d.s && d.t % d.s == 0 &&
                            std::uint64_t{phi[d.s]} * phi[d.r] * phi[d.r] * phi[d.t] ==
                                std::uint64_t{phi[m]} * phi[n];
            if (!ok) {
                fail(out, "(" + std::to_string(m) + ", " + std::to_string(n) + ")");
                break;
            }
            ++pairs;
        }
    out.detail = std::to_string(pairs) + " pairs, exact" + out.detail;
    return out;
}

Outcome disjointness() {
    Outcome out;
    SeededRng rng(20240611);
    const PsiFunction half = normalize_psi(PsiFunction::half());
    const PsiFunction recip = normalize_psi(PsiFunction::reciprocal());
    std::size_t hits = 0, draws = 0, nonempty_sets = 0;
    while (hits < 1000) {
        ++draws;
        const std::uint64_t m = rng.in_range(2, 2001), n = rng.in_range(2, 2001);
        if (m == n) continue;
        const unsigned k = static_cast<unsigned>(rng.below(9));
        const PsiFunction& psi = rng.below(2) == 0 ? half : recip;
        const auto d = decompose_pair(m, n, psi);
        if (!disjoint_predicted(d, k)) continue;
        ++hits;
        const Rational e = exp_rational(k);
        const auto a = build_E(m, psi(m) / e), b = build_E(n, psi(n) / e);
        if (!a.empty() && !b.empty()) ++nonempty_sets;
        if (!intersection_measure(a, b).is_zero())
            fail(out, "(" + std::to_string(m) + ", " + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    out.detail = std::to_string(hits) + " predicted-disjoint triples (" + std::to_string(draws) + " draws, " +
                 std::to_string(nonempty_sets) + " with both sets non-empty), zero tolerance" + out.detail;
    return out;
}

Outcome sieve_chain() {
    Outcome out;
    std::size_t checked = 0;
    for (unsigned k = 1; k <= 8; ++k) {
        const Rational X = exp_rational(k);
        for (std::uint64_t t = 1; t <= 5000; ++t) {
            const auto s = sieve_upper_bound(t, X);
            if (s.bound != s.all_primes * s.dividing_primes) fail(out, "identity t=" + std::to_string(t));
            if (coprime_harmonic(t, X) > s.bound) fail(out, "inequality t=" + std::to_string(t));
            ++checked;
        }
    }
    out.detail = std::to_string(checked) + " (t, X) cases, exact" + out.detail;
    return out;
}

Outcome pollington_vaughan() {
    Outcome out;
    for (const char* spec : {"half", "recip"}) {
        OverlapEngine engine(normalize_psi(PsiFunction::parse(spec)));
        std::optional<Rational> worst;
        std::pair<std::uint64_t, std::uint64_t> at{0, 0};
        std::size_t used = 0;
        for (std::uint64_t m = 2; m <= 300; ++m)
            for (std::uint64_t n = m + 1; n <= 300; ++n) {
                const auto d = engine.decompose(m, n);
                const Rational ratio = engine.P_or_zero(m, n, 0) / pv_bound(d, 0);
                ++used;
                if (!worst || *worst < ratio) {
                    worst = ratio;
                    at = {m, n};
                }
            }
        out.detail += std::string(" ") + spec + ": max P/pv = " + worst->str() + " ~ " + approx(*worst) + " at (" +
                      std::to_string(at.first) + ", " + std::to_string(at.second) + ") over " +
                      std::to_string(used) + " pairs;";
        check_pin(out, std::string("pv_max_") + spec, *worst);
    }
    return out;
}

Outcome averaging() {
    Outcome out;
    const PsiFunction psi = normalize_psi(PsiFunction::half());
    const Rational eps(3);
    const unsigned K = K_of_h(2, eps);
    OverlapEngine engine(psi);
    std::optional<Rational> worst;
    std::pair<std::uint64_t, std::uint64_t> at{0, 0};
    const auto pairs = all_pairs(16, 256);
    for (auto [m, n] : pairs) {
        const auto res = averaged_sum(engine, m, n, K);
        const Rational mean = res.total / Rational(static_cast<long>(K));
        if (!worst || *worst < mean) {
            worst = mean;
            at = {m, n};
        }
    }
    const auto endup = endup_bound(K, at.second);
    out.detail = "K=" + std::to_string(K) + ", " + std::to_string(pairs.size()) + " pairs: max sum_k P_k / K = " +
                 worst->str() + " ~ " + approx(*worst) + " at (" + std::to_string(at.first) + ", " +
                 std::to_string(at.second) + "); (log K)(log log n) = " + endup.str() +
                 ", at n = 255: " + endup_bound(K, 255).str();
    check_pin(out, "avg_max_block2", *worst);
    return out;
}

Outcome oracle_equivalence() {
    Outcome out;
    SeededRng rng(7);
    const PsiFunction psi = normalize_psi(PsiFunction::half());
    const std::uint64_t M = 1000000;
    Rational worst_slack_used(0);
    for (int i = 0; i < 200; ++i) {
        const std::uint64_t m = rng.in_range(1, 2001), n = rng.in_range(1, 2001);
        const unsigned k = static_cast<unsigned>(rng.below(4));
        const Rational e = exp_rational(k);
        const auto a = build_E(m, psi(m) / e), b = build_E(n, psi(n) / e);
        const Rational err = (grid_oracle(a, b, M) - intersection_measure(a, b)).abs();
        const Rational bound(a.size() + b.size() + 2, M);
        if (err > bound) fail(out, "(" + std::to_string(m) + ", " + std::to_string(n) + ")");
        worst_slack_used = max(worst_slack_used, err / bound);
    }
    out.detail = "200 pairs at M = 10^6; worst error / bound = " + approx(worst_slack_used) + out.detail;
    return out;
}

Outcome select_k_brute_force() {
    Outcome out;
    const PsiFunction psi = normalize_psi(PsiFunction::half());
    const Rational eps(3);
    const auto pairs = all_pairs(16, 256);
    const auto report = select_k(2, psi, eps, pairs, 2);

    // Independent path: sets built directly, sums over pairs in a single thread.
    const unsigned K = K_of_h(2, eps);
    std::vector<Rational> mass(256);
    for (std::uint64_t n = 16; n < 256; ++n) mass[n] = measure(build_E(n, psi(n)));
    Rational s2(0);
    for (auto [m, n] : pairs) s2 += mass[m] * mass[n];
    std::optional<Rational> best;
    unsigned best_k = 0;
    for (unsigned k = 1; k <= K; ++k) {
        const Rational e = exp_rational(k);
        std::vector<CircleIntervalSet> sets(256);
        for (std::uint64_t n = 16; n < 256; ++n) sets[n] = build_E(n, psi(n) / e);
        Rational s1(0);
        for (auto [m, n] : pairs) s1 += measure(intersect(sets[m], sets[n]));
        s1 *= e * e;
        if (report.per_k[k - 1].scaled_overlap != s1 || report.per_k[k - 1].product_mass != s2)
            fail(out, "sums differ at k=" + std::to_string(k));
        const Rational ratio = s1 / s2;
        if (!best || ratio < *best) {
            best = ratio;
            best_k = k;
        }
    }
    if (report.chosen_k != best_k) fail(out, "chosen " + std::to_string(report.chosen_k));
    out.detail = "K=" + std::to_string(K) + ", chosen k(2) = " + std::to_string(report.chosen_k) +
                 ", brute-force argmin = " + std::to_string(best_k) + ", ratio ~ " + approx(*best) + out.detail;
    return out;
}

Outcome psi_star_audit() {
    Outcome out;
    const PsiFunction psi = normalize_psi(PsiFunction::half());
    PipelineConfig pc;
    pc.base = 2;
    pc.epsilon = Rational(3);
    pc.N = 256;
    const auto res = run_pipeline(psi, pc, 1);
    if (!res.off_block_support.empty()) fail(out, "psi* off even blocks");
    if (!res.mismatched.empty()) fail(out, "psi* != psi / e_k(h)");
    // Re-audit directly from the block edges.
    for (std::uint64_t n = 1; n <= 256; ++n) {
        unsigned h = 0;
        bool even = false;
        for (; h < 4; ++h) {
            const auto r = block_bounds(h, 2);
            if (r.contains(n)) {
                even = h % 2 == 0;
                break;
            }
        }
        const Rational expected = even ? psi(n) / exp_rational(res.chosen.at(h)) : Rational(0);
        if (res.psi_star(n) != expected) fail(out, "n=" + std::to_string(n));
    }
    const auto& w = res.window;
    if (!w.low || !w.high) {
        fail(out, "empty support");
        return out;
    }
    // The window endpoints are pinned as decimal strings to 15 significant
    // digits; each ratio's enclosure must lie within them up to 1e-14 relative.
    char lo[40], hi[40];
    std::snprintf(lo, sizeof lo, "%.15g", w.low->value());
    std::snprintf(hi, sizeof hi, "%.15g", w.high->value());
    out.detail = "support " + std::to_string(w.support_size) + ", k(h) = {";
    for (auto [h, k] : res.chosen) out.detail += " h" + std::to_string(h) + ":" + std::to_string(k);
    out.detail += " }, window [" + std::string(lo) + ", " + hi + "]";
    if (!g_pins.contains("star_window_low") || !g_pins.contains("star_window_high")) {
        fail(out, "window unpinned");
        return out;
    }
    const double pin_lo = std::stod(g_pins.at("star_window_low").get<std::string>());
    const double pin_hi = std::stod(g_pins.at("star_window_high").get<std::string>());
    if (w.low->value() - w.low->error() < pin_lo * (1 - 1e-14) || w.high->value() + w.high->error() > pin_hi * (1 + 1e-14) ||
        std::abs(w.low->value() - pin_lo) > 1e-14 * pin_lo || std::abs(w.high->value() - pin_hi) > 1e-14 * pin_hi)
        fail(out, "window moved from pinned [" + g_pins.at("star_window_low").get<std::string>() + ", " +
                      g_pins.at("star_window_high").get<std::string>() + "]");
    return out;
}

Outcome borel_cantelli() {
    Outcome out;
    const PsiFunction psi = normalize_psi(PsiFunction::half());
    const auto r3 = bc_ratio(psi, 3);
    if (r3.ratio != Rational(169, 198)) fail(out, "N=3 gives " + r3.ratio.str());
    out.detail = "N=3: " + r3.ratio.str();
    const auto r500 = bc_ratio(psi, 500);
    for (const auto& p : r500.partials)
        if (p.ratio && (*p.ratio < Rational(0) || *p.ratio > Rational(1))) fail(out, "ratio outside [0, 1]");
    const Rational& r100 = *r500.partials[99].ratio;
    const Rational& r200 = *r500.partials[199].ratio;
    if (r100 != bc_ratio(psi, 100).ratio) fail(out, "N=100 prefix disagrees with a direct run");
    out.detail += "; N=100 ~ " + approx(r100) + "; N=200 ~ " + approx(r200) + "; N=500 ~ " + approx(r500.ratio);
    check_pin(out, "bc_100", r100);
    check_pin(out, "bc_200", r200);
    check_pin(out, "bc_500", r500.ratio);
    return out;
}

std::string run_cli_to_file(const std::string& path) {
    const std::string cmd = "\"" + g_cli + "\" run \"" + g_config + "\" --out \"" + path + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {};
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Outcome determinism() {
    Outcome out;
    const std::string a = run_cli_to_file("acceptance_run_a.csv");
    const std::string b = run_cli_to_file("acceptance_run_b.csv");
    if (a.empty()) fail(out, "run failed or produced no CSV");
    if (a != b) fail(out, "CSV bytes differ");
    out.detail = "two CLI invocations, " + std::to_string(a.size()) + " bytes each" + out.detail;
    return out;
}

struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::cerr << "usage: limsup_acceptance PINS.json CLI CONFIG.json [criterion...]\n";
        return 2;
    }
    {
        std::ifstream in(argv[1]);
        if (!in) {
            std::cerr << "cannot read pins " << argv[1] << '\n';
            return 2;
        }
        g_pins = json::parse(in);
    }
    g_cli = argv[2];
    g_config = argv[3];
    std::set<int> only;
    for (int i = 4; i < argc; ++i) only.insert(std::atoi(argv[i]));

    const std::vector<Criterion> criteria = {
        {1, "exact measure law", 30, measure_law},
        {2, "decomposition identities", 120, decomposition_identities},
        {3, "disjointness theorem", 60, disjointness},
        {4, "sieve chain", 180, sieve_chain},
        {5, "Pollington-Vaughan ratio pin", 180, pollington_vaughan},
        {6, "averaging bound pin", 120, averaging},
        {7, "grid oracle equivalence", 120, oracle_equivalence},
        {8, "select_k brute force", 60, select_k_brute_force},
        {9, "psi* audit", 60, psi_star_audit},
        {10, "Borel-Cantelli ratio", 300, borel_cantelli},
        {11, "determinism", 60, determinism},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail += std::string(" [exception: ") + e.what() + "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.limit_s;
        const bool pass = o.pass && in_time;
        failures += !pass;
        char head[160];
        std::snprintf(head, sizeof head, "%s %2d %-30s %7.2fs / %4.0fs%s", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                      c.limit_s, in_time ? "" : " (over time limit)");
        std::cout << head << "  " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
