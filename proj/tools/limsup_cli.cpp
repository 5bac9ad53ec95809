// limsup: batch command line front end for the overlap, block and
// second-moment computations.
//
// Exit codes: 0 success, 2 configuration error, 3 precision-guard abort,
// 4 cap exceeded.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "limsup/arith.hpp"
#include "limsup/error.hpp"
#include "limsup/harness.hpp"
#include "limsup/overlap.hpp"
#include "limsup/psi.hpp"
#include "limsup/schedule.hpp"

namespace {

using namespace limsup;

enum ExitCode { kOk = 0, kConfig = 2, kPrecision = 3, kCap = 4 };

struct Common {
    std::string out;
    unsigned jobs = 1;
    int precision = kDefaultPrecision;
};

/// Writes to --out when given, otherwise stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw ConfigError("cannot write '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    /// Where human-readable notes go: stdout when data goes to a file.
    std::ostream& notes() { return file_ ? std::cout : std::cerr; }

private:
    std::unique_ptr<std::ofstream> file_;
};

PsiFunction load_psi(const std::string& spec) { return normalize_psi(PsiFunction::parse(spec)); }

std::string factor_string(const Factorization& f) {
    if (f.factors.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
        if (i) os << " * ";
        os << f.factors[i].prime;
        if (f.factors[i].exponent > 1) os << '^' << f.factors[i].exponent;
    }
    return os.str();
}

int cmd_phi(std::uint64_t n) {
    const auto fp = factor_phi(n);
    std::cout << n << " = " << factor_string(fp.factorization) << "\nphi(" << n << ") = " << fp.phi << '\n';
    return kOk;
}

int cmd_pair(std::uint64_t m, std::uint64_t n, const std::string& psi_spec) {
    const auto psi = load_psi(psi_spec);
    const auto d = decompose_pair(m, n, psi);
    std::cout << "m = " << d.m << " = " << factor_string(d.fm) << '\n'
              << "n = " << d.n << " = " << factor_string(d.fn) << '\n'
              << "r = " << d.r << "\ns = " << d.s << "\nt = " << d.t << "\ngcd = " << d.g << '\n'
              << "mn/gcd^2 = " << d.quotient.value << " = " << factor_string(d.quotient) << '\n'
              << "psi(m) = " << d.psi_m << "\npsi(n) = " << d.psi_n << '\n'
              << "delta = " << d.delta << "\nDelta = " << d.Delta << '\n'
              << "D = " << scaled_D(d, 0) << "\npv_product = " << pv_bound(d, 0) << '\n';
    return kOk;
}

int cmd_overlap(std::uint64_t m, std::uint64_t n, unsigned k, unsigned window_K, const std::string& psi_spec,
                const Common& common) {
    OverlapEngine engine(load_psi(psi_spec), common.precision);
    const auto dec = engine.decompose(m, n);
    Sink sink(common.out);
    write_overlap_csv(sink.stream(), {engine.record(dec, k, window_K == 0 ? std::max(k, 1u) : window_K)});
    return kOk;
}

int cmd_avgsum(std::uint64_t m, std::uint64_t n, unsigned K, const std::string& psi_spec, const Common& common) {
    OverlapEngine engine(load_psi(psi_spec), common.precision);
    const auto res = averaged_sum(engine, m, n, K);
    Sink sink(common.out);
    write_overlap_csv(sink.stream(), res.per_k);
    const Rational mean = res.total / Rational(static_cast<long>(K));
    sink.notes() << "total = " << res.total << " ~ " << format_real(res.total.to_double()) << '\n'
                 << "total / K = " << mean << " ~ " << format_real(mean.to_double()) << '\n'
                 << "(log K)(log log n) = " << res.endup_bound.str() << '\n';
    return kOk;
}

int cmd_block(unsigned h, unsigned base, const std::string& eps_text, std::size_t sample, std::uint64_t seed,
              bool have_seed, const std::string& psi_spec, const Common& common) {
    const Rational eps = Rational::parse(eps_text);
    const auto psi = load_psi(psi_spec);
    const BlockRange range = block_bounds(h, base);
    if (!range.hi.fits_ulong_p() && sample == 0)
        throw CapExceeded("block upper edge " + range.hi.get_str() + " is beyond 64 bits; pass --sample and --seed");
    const std::uint64_t lo = range.lo.get_ui();
    const std::uint64_t hi = range.hi.fits_ulong_p() ? range.hi.get_ui() : UINT64_MAX;
    if (sample > 0 && !have_seed) throw ConfigError("--sample requires --seed");
    if (sample == 0 && hi - 1 > kMaxExhaustivePairBound)
        throw CapExceeded("full pair set up to " + std::to_string(hi - 1) + " exceeds cap " +
                          std::to_string(kMaxExhaustivePairBound) + "; pass --sample and --seed");
    if (hi - 1 > kMaxSetModulus)
        throw CapExceeded("block reaches n = " + std::to_string(hi - 1) + ", beyond the set modulus cap " +
                          std::to_string(kMaxSetModulus) + "; use a smaller h or base 2");
    const PairList pairs = sample > 0 ? sample_pairs(lo, hi, sample, seed) : all_pairs(lo, hi);
    BlockReport report = select_k(h, psi, eps, pairs, base, common.jobs);
    if (sample > 0) report.seed = seed;

    Sink sink(common.out);
    auto& os = sink.stream();
    os << "k,scaled_overlap,product_mass,ratio,ratio_approx\n";
    for (const auto& s : report.per_k) {
        const auto r = s.ratio();
        os << s.k << ',' << s.scaled_overlap << ',' << s.product_mass << ',' << (r ? r->str() : std::string("")) << ','
           << (r ? format_real(r->to_double()) : std::string("")) << '\n';
    }
    sink.notes() << "block h=" << h << " base=" << base << " [" << range.lo << ", " << range.hi << ")\n"
                 << "eps = " << eps << ", K = " << report.K << ", pairs = " << report.pair_count
                 << (report.seed ? ", seed = " + std::to_string(*report.seed) : std::string(", exhaustive")) << '\n'
                 << "chosen k(h) = " << report.chosen_k << '\n';
    return kOk;
}

int cmd_bc(const std::string& psi_spec, std::uint64_t N, const Common& common) {
    const auto res = bc_ratio(load_psi(psi_spec), N, common.jobs);
    Sink sink(common.out);
    auto& os = sink.stream();
    os << "N,mass,overlap,ratio,ratio_approx\n";
    for (const auto& p : res.partials)
        os << p.N << ',' << p.mass << ',' << p.overlap << ',' << (p.ratio ? p.ratio->str() : std::string("")) << ','
           << (p.ratio ? format_real(p.ratio->to_double()) : std::string("")) << '\n';
    sink.notes() << "bc ratio at N=" << N << ": " << res.ratio << " ~ " << format_real(res.ratio.to_double()) << '\n';
    return kOk;
}

int cmd_table(const std::string& eps_text, std::uint64_t N, const std::string& psi_spec, const std::string& c_text,
              const Common& common) {
    const auto rows = divergence_table(Rational::parse(eps_text), N, load_psi(psi_spec), Rational::parse(c_text),
                                       common.precision);
    Sink sink(common.out);
    auto& os = sink.stream();
    os << "N,plain,plain_approx,extra_log,extra_log_err,hpv,hpv_err,bhhv,bhhv_err\n";
    for (const auto& r : rows) {
        os << r.N << ',' << r.plain << ',' << format_real(r.plain.to_double());
        for (const BoundedReal* v : {&r.extra_log, &r.hpv, &r.bhhv}) {
            char err[32];
            std::snprintf(err, sizeof err, "%.3e", v->error());
            os << ',' << format_real(v->value()) << ',' << err;
        }
        os << '\n';
    }
    return kOk;
}

int cmd_run(const std::string& path, const Common& common, bool jobs_set, bool precision_set) {
    ExperimentConfig config = load_config(path);
    if (!common.out.empty()) config.output = common.out;
    if (jobs_set) config.jobs = common.jobs;
    if (precision_set) config.precision = common.precision;
    config.validate();
    Sink sink(config.output);
    const auto summary = run_experiment(config, sink.stream());
    print_summary(sink.notes(), config, summary);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact overlap, sieve and second-moment computations for coprime approximation sets"};
    app.require_subcommand(1);
    Common common;
    auto* out_opt = app.add_option("--out", common.out, "Write CSV output to PATH");
    auto* jobs_opt = app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
    auto* prec_opt = app.add_option("--precision", common.precision, "Binary precision for logarithms")
                         ->check(CLI::Range(32, 4096));
    (void)out_opt;
    app.fallthrough();

    std::uint64_t n_arg = 0, m_arg = 0;
    std::string psi_spec = "half";
    unsigned k_arg = 0, K_arg = 1, window_K = 0, h_arg = 1, base_arg = kDefaultBlockBase;
    std::string eps_text = "1", c_text = "1";
    std::size_t sample = 0;
    std::uint64_t seed = 0, N_arg = 0;

    auto* phi = app.add_subcommand("phi", "Factorization and Euler totient of N");
    phi->add_option("N", n_arg)->required()->check(CLI::PositiveNumber);

    auto* pair = app.add_subcommand("pair", "r, s, t decomposition of a pair");
    pair->add_option("M", m_arg)->required();
    pair->add_option("N", n_arg)->required();
    pair->add_option("--psi", psi_spec, "half | recip | primes:R | file:PATH");

    auto* overlap = app.add_subcommand("overlap", "One overlap record (m, n, k) as CSV");
    overlap->add_option("M", m_arg)->required();
    overlap->add_option("N", n_arg)->required();
    overlap->add_option("--k", k_arg, "Scale index k");
    overlap->add_option("--window-K", window_K, "K for the threshold window (default max(k, 1))");
    overlap->add_option("--psi", psi_spec, "half | recip | primes:R | file:PATH");

    auto* avgsum = app.add_subcommand("avgsum", "sum_{k=1}^K P_k for one pair");
    avgsum->add_option("M", m_arg)->required();
    avgsum->add_option("N", n_arg)->required();
    avgsum->add_option("--K", K_arg, "Number of scales")->check(CLI::PositiveNumber);
    avgsum->add_option("--psi", psi_spec, "half | recip | primes:R | file:PATH");

    auto* block = app.add_subcommand("block", "Select k(h) on one block");
    block->set_help_flag("--help", "Print this help message and exit");
    block->add_option("--h", h_arg, "Block index")->required();
    block->add_option("--base", base_arg, "Block base (blocks 2^(base^h) <= n < 2^(base^(h+1)))");
    block->add_option("--eps", eps_text, "epsilon as a rational, e.g. 3 or 1/2");
    block->add_option("--sample", sample, "Number of sampled pairs (0 = all pairs)");
    auto* seed_opt = block->add_option("--seed", seed, "Sampling seed");
    block->add_option("--psi", psi_spec, "half | recip | primes:R | file:PATH");

    auto* bc = app.add_subcommand("bc", "Second-moment ratio series up to N");
    bc->add_option("--psi", psi_spec, "half | recip | primes:R | file:PATH");
    bc->add_option("--N", N_arg)->required()->check(CLI::PositiveNumber);

    auto* table = app.add_subcommand("table", "Partial sums under the divergence factors");
    table->add_option("--eps", eps_text, "epsilon as a rational");
    table->add_option("--N", N_arg)->required();
    table->add_option("--psi", psi_spec, "half | recip | primes:R | file:PATH");
    table->add_option("--hpv-c", c_text, "Constant c in exp(c log n / log log n)");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    run->add_option("CONFIG", config_path)->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*phi) return cmd_phi(n_arg);
        if (*pair) return cmd_pair(m_arg, n_arg, psi_spec);
        if (*overlap) return cmd_overlap(m_arg, n_arg, k_arg, window_K, psi_spec, common);
        if (*avgsum) return cmd_avgsum(m_arg, n_arg, K_arg, psi_spec, common);
        if (*block) return cmd_block(h_arg, base_arg, eps_text, sample, seed, seed_opt->count() > 0, psi_spec, common);
        if (*bc) return cmd_bc(psi_spec, N_arg, common);
        if (*table) return cmd_table(eps_text, N_arg, psi_spec, c_text, common);
        if (*run) return cmd_run(config_path, common, jobs_opt->count() > 0, prec_opt->count() > 0);
    } catch (const PrecisionError& e) {
        std::cerr << "precision guard: " << e.what() << '\n';
        return kPrecision;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return kCap;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
    return kConfig;
}
