#include "limsup/circle_set.hpp"

#include <algorithm>

#include "limsup/arith.hpp"
#include "limsup/error.hpp"

namespace limsup {

void ArcBuilder::append(Rational left, Rational right) {
    if (!(left < right)) return;
    if (!arcs_.empty() && left <= arcs_.back().right) {
        if (arcs_.back().right < right) arcs_.back().right = std::move(right);
        return;
    }
    arcs_.push_back({std::move(left), std::move(right)});
}

CircleIntervalSet ArcBuilder::finish() && {
    CircleIntervalSet s;
    s.arcs_ = std::move(arcs_);
    return s;
}

CircleIntervalSet CircleIntervalSet::from_arcs(std::vector<Arc> arcs) {
    for (const auto& a : arcs) {
        if (a.left.sign() < 0 || a.right > Rational(1) || a.right < a.left)
            throw DomainError("arc [" + a.left.str() + ", " + a.right.str() + ") is not inside [0, 1)");
    }
    std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.left < y.left; });
    ArcBuilder b;
    for (auto& a : arcs) b.append(std::move(a.left), std::move(a.right));
    return std::move(b).finish();
}

CircleIntervalSet CircleIntervalSet::full() { return from_arcs({{Rational(0), Rational(1)}}); }

bool CircleIntervalSet::contains(const Rational& x) const {
    const auto it = std::upper_bound(arcs_.begin(), arcs_.end(), x,
                                     [](const Rational& v, const Arc& a) { return v < a.left; });
    if (it == arcs_.begin()) return false;
    return x < std::prev(it)->right;
}

std::string CircleIntervalSet::validate() const {
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        const Arc& a = arcs_[i];
        if (a.left.sign() < 0) return "arc " + std::to_string(i) + " starts below 0";
        if (a.right > Rational(1)) return "arc " + std::to_string(i) + " ends above 1";
        if (!(a.left < a.right)) return "arc " + std::to_string(i) + " is empty or reversed";
        if (i > 0 && !(arcs_[i - 1].right < a.left))
            return "arcs " + std::to_string(i - 1) + " and " + std::to_string(i) + " overlap or touch";
    }
    if (measure(*this) > Rational(1)) return "measure exceeds 1";
    return {};
}

CircleIntervalSet build_E(std::uint64_t n, const Rational& radius) {
    if (n == 0) throw DomainError("build_E: n must be positive");
    if (radius.sign() < 0) throw DomainError("build_E: negative radius " + radius.str());
    if (radius > Rational(1, 2)) throw DomainError("build_E: radius " + radius.str() + " exceeds 1/2");
    if (n > kMaxSetModulus)
        throw CapExceeded("build_E: modulus " + std::to_string(n) + " exceeds cap " + std::to_string(kMaxSetModulus));
    ArcBuilder b;
    if (radius.is_zero()) return std::move(b).finish();

    const Rational width = radius / Rational(n);
    if (n == 1) {
        // The only centre is 1 = 0 mod 1; its interval wraps and splits at 0.
        b.append(Rational(0), width);
        b.append(Rational(1) - width, Rational(1));
        return std::move(b).finish();
    }
    // For n >= 2 every centre a/n with gcd(a, n) = 1 lies in [1/n, 1 - 1/n],
    // so radius <= 1/2 keeps each interval inside (0, 1).
    for (std::uint64_t a = 1; a < n; ++a) {
        if (gcd(a, n) != 1) continue;
        const Rational centre(a, n);
        b.append(centre - width, centre + width);
    }
    return std::move(b).finish();
}

Rational measure(const CircleIntervalSet& s) {
    Rational total;
    for (const auto& a : s.arcs()) total += a.length();
    return total;
}

CircleIntervalSet intersect(const CircleIntervalSet& a, const CircleIntervalSet& b) {
    ArcBuilder out;
    const auto xs = a.arcs();
    const auto ys = b.arcs();
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < xs.size() && j < ys.size()) {
        const Rational& lo = max(xs[i].left, ys[j].left);
        const bool x_ends_first = xs[i].right < ys[j].right;
        const Rational& hi = x_ends_first ? xs[i].right : ys[j].right;
        if (lo < hi) out.append(lo, hi);
        if (x_ends_first) ++i; else ++j;
    }
    return std::move(out).finish();
}

Rational intersection_measure(const CircleIntervalSet& a, const CircleIntervalSet& b) {
    const auto xs = a.arcs();
    const auto ys = b.arcs();
    Rational total;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < xs.size() && j < ys.size()) {
        const Rational& lo = max(xs[i].left, ys[j].left);
        const bool x_ends_first = xs[i].right < ys[j].right;
        const Rational& hi = x_ends_first ? xs[i].right : ys[j].right;
        if (lo < hi) total += hi - lo;
        if (x_ends_first) ++i; else ++j;
    }
    return total;
}

Rational union_measure(std::span<const CircleIntervalSet> sets) {
    std::vector<const Arc*> all;
    for (const auto& s : sets)
        for (const auto& a : s.arcs()) all.push_back(&a);
    std::sort(all.begin(), all.end(), [](const Arc* x, const Arc* y) { return x->left < y->left; });
    Rational total;
    const Rational* run_lo = nullptr;
    const Rational* run_hi = nullptr;
    for (const Arc* a : all) {
        if (run_hi != nullptr && a->left <= *run_hi) {
            if (*run_hi < a->right) run_hi = &a->right;
            continue;
        }
        if (run_hi != nullptr) total += *run_hi - *run_lo;
        run_lo = &a->left;
        run_hi = &a->right;
    }
    if (run_hi != nullptr) total += *run_hi - *run_lo;
    return total;
}

namespace {

/// Marks grid cells i (point (2i+1)/(2M)) covered by s into `hits`.
/// Point p_i lies in [l, r) iff ceil(l*M - 1/2) <= i < ceil(r*M - 1/2).
void mark_grid(const CircleIntervalSet& s, std::uint64_t M, std::vector<std::uint8_t>& hits) {
    std::vector<std::int64_t> diff(M + 1, 0);
    const Rational half(1, 2);
    const Rational scale{static_cast<std::uint64_t>(M)};
    const BigInt bigM = to_bigint(M);
    auto clamp = [&](const BigInt& v) -> std::uint64_t {
        if (sgn(v) < 0) return 0;
        if (v > bigM) return M;
        return v.get_ui();
    };
    for (const auto& a : s.arcs()) {
        const std::uint64_t first = clamp((a.left * scale - half).ceil());
        const std::uint64_t last = clamp((a.right * scale - half).ceil());
        if (first < last) {
            ++diff[first];
            --diff[last];
        }
    }
    std::int64_t running = 0;
    for (std::uint64_t i = 0; i < M; ++i) {
        running += diff[i];
        if (running > 0) ++hits[i];
    }
}

}  // namespace

Rational grid_oracle(const CircleIntervalSet& a, const CircleIntervalSet& b, std::uint64_t M) {
    if (M == 0) throw DomainError("grid_oracle: M must be positive");
    std::vector<std::uint8_t> hits(M, 0);
    mark_grid(a, M, hits);
    mark_grid(b, M, hits);
    const auto both = static_cast<std::uint64_t>(std::count(hits.begin(), hits.end(), std::uint8_t{2}));
    return Rational(both, M);
}

}  // namespace limsup
