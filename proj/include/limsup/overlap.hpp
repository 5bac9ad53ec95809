#ifndef LIMSUP_OVERLAP_HPP
#define LIMSUP_OVERLAP_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "limsup/arith.hpp"
#include "limsup/bounded_real.hpp"
#include "limsup/circle_set.hpp"
#include "limsup/psi.hpp"
#include "limsup/rational.hpp"

namespace limsup {

/// The split of a pair (m, n) by equal and unequal prime exponents:
/// r collects p^u with u_p = v_p, s and t the min and max powers of the
/// remaining primes. Then m n = r^2 s t and gcd(m, n) = r s.
struct PairDecomposition {
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    Factorization fm;
    Factorization fn;
    std::uint64_t r = 1;
    std::uint64_t s = 1;
    std::uint64_t t = 1;
    std::uint64_t g = 1;
    /// Factorization of t / s = m n / gcd(m, n)^2.
    Factorization quotient;
    /// Factorization of t.
    Factorization ft;
    Rational psi_m;
    Rational psi_n;
    /// min / max of psi(m)/m and psi(n)/n
    Rational delta;
    Rational Delta;
};

enum class ThresholdClass { below_one, in_window, above_window };

std::string to_string(ThresholdClass c);

/// One (m, n, k) row of the overlap analysis.
struct OverlapRecord {
    std::uint64_t m = 0;
    std::uint64_t n = 0;
    unsigned k = 0;
    std::uint64_t r = 1;
    std::uint64_t s = 1;
    std::uint64_t t = 1;
    std::uint64_t g = 1;
    Rational delta;
    Rational Delta;
    Rational D_k;
    Rational pv_product;
    /// Zero when either scaled set is empty.
    Rational P_exact;
    BoundedReal integral_bound;
    bool disjoint_predicted = false;
    ThresholdClass threshold = ThresholdClass::below_one;
};

/// Throws DomainError when m == n or either is zero.
PairDecomposition decompose_pair(std::uint64_t m, std::uint64_t n, const PsiFunction& psi);
PairDecomposition decompose_pair(const FactorPhi& m, const FactorPhi& n, Rational psi_m, Rational psi_n);

/// max(n psi(m), m psi(n)) / (e_k gcd(m, n)), with e_k = exp_rational(k).
Rational scaled_D(const PairDecomposition& dec, unsigned k);

/// prod over primes p | m n / gcd^2 with p > D_k of (1 - 1/p)^{-1}.
Rational pv_bound(const PairDecomposition& dec, unsigned k);

/// 4 Delta r t / e_k, the upper end of the overlap integral.
Rational integral_window(const PairDecomposition& dec, unsigned k);

/// lambda(E_m^(k) cap E_n^(k)) / (lambda(E_m^(k)) lambda(E_n^(k))).
/// Throws UndefinedRatioError when either scaled set has measure zero.
Rational exact_P(std::uint64_t m, std::uint64_t n, const PsiFunction& psi, unsigned k);

/// (t / phi(t)) * int_1^W S_t / (Delta r t / e_k) with W = 4 Delta r t / e_k;
/// exactly 0 when W <= 1.
BoundedReal integral_bound(const PairDecomposition& dec, unsigned k, int precision = kDefaultPrecision);

/// 2 Delta r t / e_k <= 1, which forces the scaled sets to be disjoint.
bool disjoint_predicted(const PairDecomposition& dec, unsigned k);

/// Position of 4 Delta r t / e_k relative to [1, e_K).
ThresholdClass threshold_class(const PairDecomposition& dec, unsigned k, unsigned K);

/// Computes overlap records while caching the scaled sets E_n^(k) it builds.
/// Not thread-safe; give each worker its own engine.
class OverlapEngine {
public:
    OverlapEngine(PsiFunction psi, int precision = kDefaultPrecision);

    const PsiFunction& psi() const { return psi_; }

    const FactorPhi& factor(std::uint64_t n);
    PairDecomposition decompose(std::uint64_t m, std::uint64_t n);

    /// E_n with radius psi(n) / e_k, and its measure.
    const std::pair<CircleIntervalSet, Rational>& scaled_set(std::uint64_t n, unsigned k);

    /// Exact P_k, or 0 when a scaled set is empty.
    Rational P_or_zero(std::uint64_t m, std::uint64_t n, unsigned k);

    /// lambda(E_m^(k) cap E_n^(k)).
    Rational intersection(std::uint64_t m, std::uint64_t n, unsigned k);

    /// Full record; K positions the window for the threshold class.
    OverlapRecord record(const PairDecomposition& dec, unsigned k, unsigned K);

    void clear_sets() {
        sets_.clear();
        cached_arcs_ = 0;
    }

    /// Drops cached sets once they hold more than this many arcs in total.
    static constexpr std::size_t kArcBudget = 1u << 20;

private:
    void evict_if_full();

    PsiFunction psi_;
    int precision_;
    std::size_t cached_arcs_ = 0;
    std::map<std::uint64_t, FactorPhi> factors_;
    std::map<std::pair<std::uint64_t, unsigned>, std::pair<CircleIntervalSet, Rational>> sets_;
};

struct AveragedSum {
    /// sum_{k=1}^K P_k(m, n), empty scaled sets contributing 0
    Rational total;
    std::vector<OverlapRecord> per_k;
    /// (log K)(log log n) with log x := max(1, log x)
    BoundedReal endup_bound;
};

AveragedSum averaged_sum(std::uint64_t m, std::uint64_t n, const PsiFunction& psi, unsigned K,
                         int precision = kDefaultPrecision);
AveragedSum averaged_sum(OverlapEngine& engine, std::uint64_t m, std::uint64_t n, unsigned K);

/// (log K)(log log n) with the floored logarithm.
BoundedReal endup_bound(unsigned K, std::uint64_t n, int precision = kDefaultPrecision);

}  // namespace limsup

#endif
