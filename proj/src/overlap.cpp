#include "limsup/overlap.hpp"

#include <algorithm>
#include <limits>

#include "limsup/error.hpp"

namespace limsup {

namespace {

std::uint64_t checked_pow(std::uint64_t p, unsigned e) {
    unsigned __int128 v = 1;
    for (unsigned i = 0; i < e; ++i) {
        v *= p;
        if (v > std::numeric_limits<std::uint64_t>::max())
            throw CapExceeded("prime power " + std::to_string(p) + "^" + std::to_string(e) + " exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(v);
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 v = static_cast<unsigned __int128>(a) * b;
    if (v > std::numeric_limits<std::uint64_t>::max()) throw CapExceeded("product exceeds 64 bits");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

std::string to_string(ThresholdClass c) {
    switch (c) {
        case ThresholdClass::below_one: return "below-1";
        case ThresholdClass::in_window: return "in-window";
        case ThresholdClass::above_window: return "above-window";
    }
    return "unknown";
}

PairDecomposition decompose_pair(const FactorPhi& m, const FactorPhi& n, Rational psi_m, Rational psi_n) {
    PairDecomposition d;
    d.m = m.factorization.value;
    d.n = n.factorization.value;
    if (d.m == 0 || d.n == 0) throw DomainError("decompose_pair: m and n must be positive");
    if (d.m == d.n) throw DomainError("decompose_pair: m and n must differ (m = n = " + std::to_string(d.m) + ")");
    d.fm = m.factorization;
    d.fn = n.factorization;
    d.quotient.value = 1;
    d.ft.value = 1;

    const auto& a = d.fm.factors;
    const auto& b = d.fn.factors;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        std::uint64_t p;
        unsigned u = 0;
        unsigned v = 0;
        if (j == b.size() || (i < a.size() && a[i].prime < b[j].prime)) {
            p = a[i].prime;
            u = a[i++].exponent;
        } else if (i == a.size() || b[j].prime < a[i].prime) {
            p = b[j].prime;
            v = b[j++].exponent;
        } else {
            p = a[i].prime;
            u = a[i++].exponent;
            v = b[j++].exponent;
        }
        if (u == v) {
            d.r = checked_mul(d.r, checked_pow(p, u));
            continue;
        }
        const unsigned lo = std::min(u, v);
        const unsigned hi = std::max(u, v);
        d.s = checked_mul(d.s, checked_pow(p, lo));
        d.t = checked_mul(d.t, checked_pow(p, hi));
        d.ft.factors.push_back({p, hi});
        d.quotient.factors.push_back({p, hi - lo});
        d.quotient.value = checked_mul(d.quotient.value, checked_pow(p, hi - lo));
    }
    d.ft.value = d.t;
    d.g = gcd(d.m, d.n);
    d.psi_m = std::move(psi_m);
    d.psi_n = std::move(psi_n);
    const Rational x = d.psi_m / Rational(d.m);
    const Rational y = d.psi_n / Rational(d.n);
    d.delta = min(x, y);
    d.Delta = max(x, y);
    return d;
}

PairDecomposition decompose_pair(std::uint64_t m, std::uint64_t n, const PsiFunction& psi) {
    if (m == 0 || n == 0) throw DomainError("decompose_pair: m and n must be positive");
    if (m == n) throw DomainError("decompose_pair: m and n must differ (m = n = " + std::to_string(m) + ")");
    return decompose_pair(factor_phi(m), factor_phi(n), psi(m), psi(n));
}

Rational scaled_D(const PairDecomposition& dec, unsigned k) {
    const Rational a = Rational(dec.n) * dec.psi_m;
    const Rational b = Rational(dec.m) * dec.psi_n;
    return max(a, b) / (exp_rational(k) * Rational(dec.g));
}

Rational pv_bound(const PairDecomposition& dec, unsigned k) {
    return restricted_prime_product(dec.quotient, scaled_D(dec, k));
}

Rational integral_window(const PairDecomposition& dec, unsigned k) {
    return Rational(4) * dec.Delta * Rational(dec.r) * Rational(dec.t) / exp_rational(k);
}

Rational exact_P(std::uint64_t m, std::uint64_t n, const PsiFunction& psi, unsigned k) {
    const Rational scale = exp_rational(k);
    const auto em = build_E(m, psi(m) / scale);
    const auto en = build_E(n, psi(n) / scale);
    const Rational mm = measure(em);
    const Rational mn = measure(en);
    if (mm.is_zero() || mn.is_zero())
        throw UndefinedRatioError("exact_P(" + std::to_string(m) + ", " + std::to_string(n) + ", k=" +
                                  std::to_string(k) + "): a scaled set has measure zero");
    return intersection_measure(em, en) / (mm * mn);
}

BoundedReal integral_bound(const PairDecomposition& dec, unsigned k, int precision) {
    const Rational window = integral_window(dec, k);
    if (window <= Rational(1)) return BoundedReal(Rational(0), precision);
    // (t / phi(t)) / (Delta r t / e_k) = 4 t / (phi(t) W)
    const Rational factor = Rational(4) * Rational(dec.t) / (Rational(totient(dec.ft)) * window);
    return integral_S(dec.t, window, precision) * BoundedReal(factor, precision + 64);
}

bool disjoint_predicted(const PairDecomposition& dec, unsigned k) {
    return Rational(2) * dec.Delta * Rational(dec.r) * Rational(dec.t) <= exp_rational(k);
}

ThresholdClass threshold_class(const PairDecomposition& dec, unsigned k, unsigned K) {
    const Rational window = integral_window(dec, k);
    if (window < Rational(1)) return ThresholdClass::below_one;
    if (window < exp_rational(K)) return ThresholdClass::in_window;
    return ThresholdClass::above_window;
}

OverlapEngine::OverlapEngine(PsiFunction psi, int precision) : psi_(std::move(psi)), precision_(precision) {}

const FactorPhi& OverlapEngine::factor(std::uint64_t n) {
    auto it = factors_.find(n);
    if (it == factors_.end()) it = factors_.emplace(n, factor_phi(n)).first;
    return it->second;
}

PairDecomposition OverlapEngine::decompose(std::uint64_t m, std::uint64_t n) {
    if (m == 0 || n == 0) throw DomainError("decompose_pair: m and n must be positive");
    if (m == n) throw DomainError("decompose_pair: m and n must differ (m = n = " + std::to_string(m) + ")");
    return decompose_pair(factor(m), factor(n), psi_(m), psi_(n));
}

const std::pair<CircleIntervalSet, Rational>& OverlapEngine::scaled_set(std::uint64_t n, unsigned k) {
    const auto key = std::make_pair(n, k);
    auto it = sets_.find(key);
    if (it == sets_.end()) {
        auto set = build_E(n, psi_(n) / exp_rational(k));
        Rational mu = measure(set);
        cached_arcs_ += set.size();
        it = sets_.emplace(key, std::make_pair(std::move(set), std::move(mu))).first;
    }
    return it->second;
}

void OverlapEngine::evict_if_full() {
    if (cached_arcs_ > kArcBudget) clear_sets();
}

Rational OverlapEngine::intersection(std::uint64_t m, std::uint64_t n, unsigned k) {
    evict_if_full();
    const auto& a = scaled_set(m, k).first;
    const auto& b = scaled_set(n, k).first;
    return intersection_measure(a, b);
}

Rational OverlapEngine::P_or_zero(std::uint64_t m, std::uint64_t n, unsigned k) {
    evict_if_full();
    const auto& [a, mu_a] = scaled_set(m, k);
    const auto& [b, mu_b] = scaled_set(n, k);
    if (mu_a.is_zero() || mu_b.is_zero()) return Rational(0);
    return intersection_measure(a, b) / (mu_a * mu_b);
}

OverlapRecord OverlapEngine::record(const PairDecomposition& dec, unsigned k, unsigned K) {
    OverlapRecord rec;
    rec.m = dec.m;
    rec.n = dec.n;
    rec.k = k;
    rec.r = dec.r;
    rec.s = dec.s;
    rec.t = dec.t;
    rec.g = dec.g;
    rec.delta = dec.delta;
    rec.Delta = dec.Delta;
    rec.D_k = scaled_D(dec, k);
    rec.pv_product = restricted_prime_product(dec.quotient, rec.D_k);
    rec.P_exact = P_or_zero(dec.m, dec.n, k);
    rec.integral_bound = integral_bound(dec, k, precision_);
    rec.disjoint_predicted = disjoint_predicted(dec, k);
    rec.threshold = threshold_class(dec, k, K);
    return rec;
}

BoundedReal endup_bound(unsigned K, std::uint64_t n, int precision) {
    const BoundedReal logK = floor_log(BoundedReal(Rational(static_cast<long>(K)), precision));
    const BoundedReal loglogn = floor_log(floor_log(BoundedReal(Rational(n), precision)));
    return logK * loglogn;
}

AveragedSum averaged_sum(OverlapEngine& engine, std::uint64_t m, std::uint64_t n, unsigned K) {
    if (K == 0) throw DomainError("averaged_sum: K must be at least 1");
    const PairDecomposition dec = engine.decompose(m, n);
    AveragedSum out;
    for (unsigned k = 1; k <= K; ++k) {
        out.per_k.push_back(engine.record(dec, k, K));
        out.total += out.per_k.back().P_exact;
    }
    out.endup_bound = endup_bound(K, std::max(m, n));
    return out;
}

AveragedSum averaged_sum(std::uint64_t m, std::uint64_t n, const PsiFunction& psi, unsigned K, int precision) {
    OverlapEngine engine(psi, precision);
    return averaged_sum(engine, m, n, K);
}

}  // namespace limsup
