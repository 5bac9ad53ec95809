#include "limsup/psi.hpp"

#include <fstream>
#include <sstream>

#include "limsup/arith.hpp"
#include "limsup/error.hpp"

namespace limsup {

std::string to_string(PsiGenerator g) {
    switch (g) {
        case PsiGenerator::half: return "half";
        case PsiGenerator::reciprocal: return "recip";
        case PsiGenerator::prime_support: return "primes";
        case PsiGenerator::file: return "file";
        case PsiGenerator::derived: return "derived";
    }
    return "unknown";
}

PsiFunction PsiFunction::half() {
    PsiFunction f;
    f.generator_ = PsiGenerator::half;
    f.label_ = "half";
    return f;
}

PsiFunction PsiFunction::reciprocal() {
    PsiFunction f;
    f.generator_ = PsiGenerator::reciprocal;
    f.label_ = "recip";
    return f;
}

PsiFunction PsiFunction::prime_support(Rational radius) {
    if (radius.sign() < 0) throw DomainError("prime-support radius must be non-negative");
    PsiFunction f;
    f.generator_ = PsiGenerator::prime_support;
    f.label_ = "primes:" + radius.str();
    f.radius_ = std::move(radius);
    return f;
}

PsiFunction PsiFunction::from_table(std::map<std::uint64_t, Rational> table, std::uint64_t n_max,
                                    PsiGenerator tag) {
    PsiFunction f;
    for (const auto& [n, v] : table) {
        if (n == 0 || n > n_max) throw DomainError("psi table index " + std::to_string(n) + " outside 1.." + std::to_string(n_max));
        if (v.sign() < 0) throw DomainError("psi(" + std::to_string(n) + ") is negative");
    }
    std::erase_if(table, [](const auto& kv) { return kv.second.is_zero(); });
    f.generator_ = tag;
    f.label_ = to_string(tag);
    f.table_ = std::move(table);
    f.n_max_ = n_max;
    return f;
}

PsiFunction PsiFunction::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open psi file '" + path + "'");
    std::map<std::uint64_t, Rational> table;
    std::uint64_t n_max = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        std::string n_text, num_text, den_text;
        if (!std::getline(fields, n_text, ',') || !std::getline(fields, num_text, ',') ||
            !std::getline(fields, den_text))
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected n,num,den");
        try {
            const Rational n = Rational::parse(n_text);
            if (n.den() != 1 || n.sign() <= 0) throw DomainError("n must be a positive integer");
            const std::uint64_t idx = n.num().get_ui();
            const Rational value = Rational::parse(num_text) / Rational::parse(den_text);
            if (value.sign() < 0) throw DomainError("negative value");
            table[idx] = value;
            n_max = std::max(n_max, idx);
        } catch (const DomainError& e) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    auto f = from_table(std::move(table), std::max<std::uint64_t>(n_max, 1), PsiGenerator::file);
    f.label_ = "file:" + path;
    return f;
}

PsiFunction PsiFunction::parse(std::string_view spec) {
    if (spec == "half") return half();
    if (spec == "recip") return reciprocal();
    if (spec.starts_with("primes:")) {
        try {
            return prime_support(Rational::parse(spec.substr(7)));
        } catch (const DomainError& e) {
            throw ConfigError("bad psi generator '" + std::string(spec) + "': " + e.what());
        }
    }
    if (spec.starts_with("file:")) return from_file(std::string(spec.substr(5)));
    throw ConfigError("unknown psi generator '" + std::string(spec) + "' (expected half, recip, primes:R, file:PATH)");
}

Rational PsiFunction::operator()(std::uint64_t n) const {
    if (n == 0) throw DomainError("psi is defined on positive integers");
    if (n > n_max_) return Rational(0);
    Rational v;
    switch (generator_) {
        case PsiGenerator::half: v = Rational(1, 2); break;
        case PsiGenerator::reciprocal: v = Rational(std::uint64_t{1}, n); break;
        case PsiGenerator::prime_support: v = is_prime(n) ? radius_ : Rational(0); break;
        case PsiGenerator::file:
        case PsiGenerator::derived: {
            const auto it = table_.find(n);
            if (it == table_.end()) return Rational(0);
            return it->second;  // tables are normalized eagerly
        }
    }
    return normalized_ ? normalize_value(v, n) : v;
}

Rational normalize_value(const Rational& value, std::uint64_t n) {
    if (value.sign() < 0) throw DomainError("psi(" + std::to_string(n) + ") is negative");
    if (value > Rational(1, 2)) return Rational(1, 2);
    // For n = 1 the window [1/n, 1/2] is empty; only the clamp applies.
    if (n >= 2 && value.sign() > 0 && value < Rational(std::uint64_t{1}, n)) return Rational(0);
    return value;
}

PsiFunction normalize_psi(const PsiFunction& psi) {
    PsiFunction out = psi;
    if (!out.table_.empty() || psi.generator_ == PsiGenerator::file || psi.generator_ == PsiGenerator::derived) {
        for (auto& [n, v] : out.table_) v = normalize_value(v, n);
        std::erase_if(out.table_, [](const auto& kv) { return kv.second.is_zero(); });
    } else if (psi.generator_ == PsiGenerator::prime_support && psi.radius_.sign() < 0) {
        throw DomainError("negative prime-support radius");
    }
    out.normalized_ = true;
    return out;
}

}  // namespace limsup
