#ifndef LIMSUP_HARNESS_HPP
#define LIMSUP_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "limsup/bounded_real.hpp"
#include "limsup/overlap.hpp"
#include "limsup/psi.hpp"
#include "limsup/rational.hpp"
#include "limsup/sampling.hpp"
#include "limsup/schedule.hpp"

namespace limsup {

// Size limits of the exact engine.
inline constexpr std::uint64_t kMaxExhaustivePairBound = 2000;  // largest n in an exhaustive pair corpus
inline constexpr std::uint64_t kMaxBcN = 500;
inline constexpr std::uint64_t kMaxTableN = 10'000'000;

// ---------------------------------------------------------------------------
// Second-moment ratio

struct BcPartial {
    std::uint64_t N = 0;
    /// sum_{n <= N} lambda(E_n)
    Rational mass;
    /// sum_{m, n <= N} lambda(E_m cap E_n), diagonal included once
    Rational overlap;
    /// mass^2 / overlap, absent while overlap is 0
    std::optional<Rational> ratio;
};

struct BcResult {
    Rational ratio;
    std::vector<BcPartial> partials;  // one per N' = 1..N
};

/// (sum lambda(E_n))^2 / sum_{m,n} lambda(E_m cap E_n) over 1..N.
/// Requires a normalized psi; throws UndefinedRatioError when every set is
/// empty and CapExceeded above kMaxBcN.
BcResult bc_ratio(const PsiFunction& psi, std::uint64_t N, unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Divergence factor comparison

struct DivergenceRow {
    std::uint64_t N = 0;
    /// sum psi(n) phi(n) / n
    Rational plain;
    /// ... / (log n)^eps
    BoundedReal extra_log;
    /// ... / exp(c log n / log log n)
    BoundedReal hpv;
    /// ... / (log n)^(eps log log log n)
    BoundedReal bhhv;
};

/// Partial sums at N' = 1, 2, 4, ... and N, with log x := max(1, log x).
std::vector<DivergenceRow> divergence_table(const Rational& epsilon, std::uint64_t N, const PsiFunction& psi,
                                            const Rational& hpv_c = Rational(1),
                                            int precision = kDefaultPrecision);

// ---------------------------------------------------------------------------
// CSV

/// Fixed overlap CSV header (no trailing newline).
const std::string& overlap_csv_header();
void write_overlap_csv(std::ostream& os, const std::vector<OverlapRecord>& records);
std::string format_real(double v);

// ---------------------------------------------------------------------------
// Experiments

struct PairCorpus {
    enum class Kind { none, list, exhaustive, sample } kind = Kind::none;
    PairList pairs;          // kind == list
    std::uint64_t lo = 0;    // exhaustive / sample: lo <= m < n < hi
    std::uint64_t hi = 0;
    std::size_t count = 0;   // sample
    std::optional<std::uint64_t> seed;

    PairList materialize() const;
};

struct PipelineConfig {
    unsigned base = 2;
    Rational epsilon;
    std::uint64_t N = 0;
    /// Pairs sampled per block; 0 means the full pair set.
    std::size_t sample = 0;
    std::optional<std::uint64_t> seed;
    std::string psi_star_output;
};

struct ExperimentConfig {
    std::string psi = "half";
    bool normalize = true;
    int precision = kDefaultPrecision;
    unsigned jobs = 1;
    std::string output;

    PairCorpus overlap;
    unsigned K = 1;
    unsigned k_from = 1;

    std::optional<PipelineConfig> pipeline;
    std::optional<std::uint64_t> bc_N;

    /// Checks caps and required fields; throws ConfigError / CapExceeded.
    void validate() const;
};

/// Parses the JSON document; throws ConfigError on malformed input.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct PipelineResult {
    std::vector<BlockReport> blocks;  // every block meeting 2..N, odd ones without selection
    std::map<unsigned, unsigned> chosen;
    PsiFunction psi_star;
    StarWindow window;
    /// n <= N with psi*(n) > 0 outside an even block; must stay empty.
    std::vector<std::uint64_t> off_block_support;
    /// n in an even block where psi*(n) != psi(n) / e_{k(h)}; must stay empty.
    std::vector<std::uint64_t> mismatched;
};

/// Block selection on every even block meeting 2..N, then psi*.
PipelineResult run_pipeline(const PsiFunction& psi, const PipelineConfig& config, unsigned jobs,
                            int precision = kDefaultPrecision);

/// Overlap rows for each pair and k in [k_from, K], sorted by (m, n, k).
std::vector<OverlapRecord> overlap_sweep(const PsiFunction& psi, const PairList& pairs, unsigned k_from, unsigned K,
                                         unsigned jobs, int precision = kDefaultPrecision);

struct RunSummary {
    std::size_t rows = 0;
    /// max P_exact / pv_product over rows with P_exact > 0
    std::optional<Rational> max_p_over_pv;
    /// max over pairs of sum_k P_k / (number of k)
    std::optional<Rational> max_avg_P;
    std::optional<PipelineResult> pipeline;
    std::optional<BcResult> bc;
};

/// Runs every section present in the config. Overlap rows go to `csv`.
RunSummary run_experiment(const ExperimentConfig& config, std::ostream& csv);

void print_summary(std::ostream& os, const ExperimentConfig& config, const RunSummary& summary);

}  // namespace limsup

#endif
