#include "limsup/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "limsup/arith.hpp"
#include "limsup/circle_set.hpp"
#include "limsup/error.hpp"
#include "limsup/parallel.hpp"

namespace limsup {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Second-moment ratio

BcResult bc_ratio(const PsiFunction& psi, std::uint64_t N, unsigned jobs) {
    if (N == 0) throw DomainError("bc_ratio: N must be positive");
    if (N > kMaxBcN)
        throw CapExceeded("bc_ratio: N = " + std::to_string(N) + " exceeds cap " + std::to_string(kMaxBcN));
    if (!psi.normalized()) throw DomainError("bc_ratio requires a normalized psi");

    std::vector<CircleIntervalSet> sets;
    std::vector<Rational> measures;
    sets.reserve(N);
    for (std::uint64_t n = 1; n <= N; ++n) {
        sets.push_back(build_E(n, psi(n)));
        measures.push_back(measure(sets.back()));
    }

    // cross[i] = sum_{m < n} lambda(E_m cap E_n) for n = i + 1.
    std::vector<Rational> cross(N);
    parallel_chunks(N, jobs, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            if (measures[i].is_zero()) continue;
            Rational acc;
            for (std::size_t j = 0; j < i; ++j)
                if (!measures[j].is_zero()) acc += intersection_measure(sets[j], sets[i]);
            cross[i] = std::move(acc);
        }
    });

    BcResult result;
    Rational mass;
    Rational overlap;
    for (std::uint64_t i = 0; i < N; ++i) {
        mass += measures[i];
        overlap += measures[i] + Rational(2) * cross[i];
        BcPartial p{i + 1, mass, overlap, std::nullopt};
        if (!overlap.is_zero()) p.ratio = mass * mass / overlap;
        result.partials.push_back(std::move(p));
    }
    if (overlap.is_zero()) throw UndefinedRatioError("bc_ratio: every approximation set up to N is empty");
    result.ratio = *result.partials.back().ratio;
    return result;
}

// ---------------------------------------------------------------------------
// Divergence factor comparison

std::vector<DivergenceRow> divergence_table(const Rational& epsilon, std::uint64_t N, const PsiFunction& psi,
                                            const Rational& hpv_c, int precision) {
    if (N < 2) throw DomainError("divergence_table: N must be at least 2");
    if (N > kMaxTableN)
        throw CapExceeded("divergence_table: N = " + std::to_string(N) + " exceeds cap " + std::to_string(kMaxTableN));
    if (epsilon.sign() <= 0) throw DomainError("divergence_table: epsilon must be positive");

    const BoundedReal eps(epsilon, precision);
    const BoundedReal c(hpv_c, precision);
    DivergenceRow acc{0, Rational(0), BoundedReal(Rational(0), precision), BoundedReal(Rational(0), precision),
                      BoundedReal(Rational(0), precision)};
    std::vector<DivergenceRow> rows;
    std::uint64_t next_checkpoint = 1;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const Rational v = psi(n);
        if (!v.is_zero()) {
            const Rational term = v * Rational(factor_phi(n).phi) / Rational(n);
            acc.plain += term;
            const BoundedReal t(term, precision);
            const BoundedReal L1 = floor_log(BoundedReal(Rational(n), precision));
            const BoundedReal L2 = floor_log(L1);
            const BoundedReal L3 = floor_log(L2);
            acc.extra_log += t / pow(L1, eps);
            acc.hpv += t / exp(c * L1 / L2);
            acc.bhhv += t / pow(L1, eps * L3);
        }
        if (n == next_checkpoint || n == N) {
            acc.N = n;
            rows.push_back(acc);
            if (n == next_checkpoint) next_checkpoint *= 2;
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// CSV

const std::string& overlap_csv_header() {
    static const std::string header =
        "m,n,k,r,s,t,gcd,delta,Delta,D_k,pv_product,P_exact_num,P_exact_den,integral_bound,integral_err,"
        "disjoint_pred,threshold_class";
    return header;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_overlap_csv(std::ostream& os, const std::vector<OverlapRecord>& records) {
    os << overlap_csv_header() << '\n';
    char err[32];
    for (const auto& r : records) {
        std::snprintf(err, sizeof err, "%.6e", r.integral_bound.error());
        os << r.m << ',' << r.n << ',' << r.k << ',' << r.r << ',' << r.s << ',' << r.t << ',' << r.g << ','
           << r.delta << ',' << r.Delta << ',' << r.D_k << ',' << r.pv_product << ',' << r.P_exact.num() << ','
           << r.P_exact.den() << ',' << format_real(r.integral_bound.value()) << ',' << err << ','
           << (r.disjoint_predicted ? 1 : 0) << ',' << to_string(r.threshold) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

Rational json_rational(const json& j, const std::string& what) {
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const DomainError& e) {
            throw ConfigError(what + ": " + e.what());
        }
    }
    if (j.is_number_integer()) return Rational::parse(j.dump());
    throw ConfigError(what + ": expected an integer or a rational string such as \"3/2\"");
}

std::uint64_t json_uint(const json& j, const std::string& what) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return j.get<std::uint64_t>();
    if (j.is_string()) {
        const Rational q = json_rational(j, what);
        if (q.den() == 1 && q.sign() >= 0 && q.num().fits_ulong_p()) return q.num().get_ui();
    }
    throw ConfigError(what + ": expected a non-negative integer");
}

PairCorpus parse_corpus(const json& j) {
    PairCorpus c;
    if (j.contains("pairs")) {
        c.kind = PairCorpus::Kind::list;
        for (const auto& p : j.at("pairs")) {
            if (!p.is_array() || p.size() != 2) throw ConfigError("overlap.pairs: each entry must be [m, n]");
            c.pairs.emplace_back(json_uint(p[0], "overlap.pairs"), json_uint(p[1], "overlap.pairs"));
        }
    } else if (j.contains("exhaustive")) {
        c.kind = PairCorpus::Kind::exhaustive;
        c.lo = json_uint(j.at("exhaustive").at("lo"), "overlap.exhaustive.lo");
        c.hi = json_uint(j.at("exhaustive").at("hi"), "overlap.exhaustive.hi");
    } else if (j.contains("sample")) {
        const auto& s = j.at("sample");
        c.kind = PairCorpus::Kind::sample;
        c.lo = json_uint(s.at("lo"), "overlap.sample.lo");
        c.hi = json_uint(s.at("hi"), "overlap.sample.hi");
        c.count = json_uint(s.at("count"), "overlap.sample.count");
        if (s.contains("seed")) c.seed = json_uint(s.at("seed"), "overlap.sample.seed");
    } else {
        throw ConfigError("overlap: expected one of \"pairs\", \"exhaustive\", \"sample\"");
    }
    return c;
}

}  // namespace

PairList PairCorpus::materialize() const {
    switch (kind) {
        case Kind::none: return {};
        case Kind::list: {
            PairList out;
            for (auto [m, n] : pairs) out.emplace_back(std::min(m, n), std::max(m, n));
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
        }
        case Kind::exhaustive: return all_pairs(lo, hi);
        case Kind::sample: return sample_pairs(lo, hi, count, seed.value_or(0));
    }
    return {};
}

void ExperimentConfig::validate() const {
    if (precision < 32 || precision > 4096) throw ConfigError("precision must be between 32 and 4096 bits");
    if (jobs == 0) throw ConfigError("jobs must be at least 1");
    if (K == 0) throw ConfigError("K must be at least 1");
    if (k_from > K) throw ConfigError("k_from exceeds K");
    switch (overlap.kind) {
        case PairCorpus::Kind::none: break;
        case PairCorpus::Kind::list:
            for (auto [m, n] : overlap.pairs)
                if (m == 0 || n == 0 || m == n) throw ConfigError("overlap.pairs: need distinct positive m, n");
            break;
        case PairCorpus::Kind::exhaustive:
            if (overlap.lo == 0 || overlap.hi <= overlap.lo) throw ConfigError("overlap.exhaustive: need 1 <= lo < hi");
            if (overlap.hi - 1 > kMaxExhaustivePairBound)
                throw CapExceeded("exhaustive pair corpus up to n = " + std::to_string(overlap.hi - 1) + " exceeds cap " +
                                  std::to_string(kMaxExhaustivePairBound) + "; use \"sample\"");
            break;
        case PairCorpus::Kind::sample:
            if (overlap.lo == 0 || overlap.hi <= overlap.lo + 1) throw ConfigError("overlap.sample: need 1 <= lo < hi - 1");
            if (!overlap.seed) throw ConfigError("overlap.sample: a seed is required");
            break;
    }
    if (pipeline) {
        if (pipeline->base < 2) throw ConfigError("pipeline.base must be at least 2");
        if (pipeline->epsilon.sign() <= 0) throw ConfigError("pipeline.eps must be positive");
        if (pipeline->N < 2) throw ConfigError("pipeline.N must be at least 2");
        if (pipeline->sample > 0 && !pipeline->seed) throw ConfigError("pipeline.sample requires pipeline.seed");
        if (pipeline->sample == 0 && pipeline->N > kMaxExhaustivePairBound)
            throw CapExceeded("pipeline.N = " + std::to_string(pipeline->N) + " exceeds the exhaustive cap " +
                              std::to_string(kMaxExhaustivePairBound) + "; set pipeline.sample and pipeline.seed");
        if (pipeline->N > kMaxSetModulus) throw CapExceeded("pipeline.N exceeds the set modulus cap");
    }
    if (bc_N) {
        if (*bc_N == 0) throw ConfigError("bc.N must be positive");
        if (*bc_N > kMaxBcN)
            throw CapExceeded("bc.N = " + std::to_string(*bc_N) + " exceeds cap " + std::to_string(kMaxBcN));
    }
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig c;
    try {
        if (j.contains("psi")) c.psi = j.at("psi").get<std::string>();
        if (j.contains("normalize")) c.normalize = j.at("normalize").get<bool>();
        if (j.contains("precision")) c.precision = static_cast<int>(json_uint(j.at("precision"), "precision"));
        if (j.contains("jobs")) c.jobs = static_cast<unsigned>(json_uint(j.at("jobs"), "jobs"));
        if (j.contains("output")) c.output = j.at("output").get<std::string>();
        if (j.contains("overlap")) {
            const auto& o = j.at("overlap");
            c.overlap = parse_corpus(o);
            if (o.contains("K")) c.K = static_cast<unsigned>(json_uint(o.at("K"), "overlap.K"));
            if (o.contains("k_from")) c.k_from = static_cast<unsigned>(json_uint(o.at("k_from"), "overlap.k_from"));
        }
        if (j.contains("pipeline")) {
            const auto& p = j.at("pipeline");
            PipelineConfig pc;
            if (p.contains("base")) pc.base = static_cast<unsigned>(json_uint(p.at("base"), "pipeline.base"));
            pc.epsilon = json_rational(p.at("eps"), "pipeline.eps");
            pc.N = json_uint(p.at("N"), "pipeline.N");
            if (p.contains("sample")) pc.sample = json_uint(p.at("sample"), "pipeline.sample");
            if (p.contains("seed")) pc.seed = json_uint(p.at("seed"), "pipeline.seed");
            if (p.contains("psi_star_output")) pc.psi_star_output = p.at("psi_star_output").get<std::string>();
            c.pipeline = std::move(pc);
        }
        if (j.contains("bc")) c.bc_N = json_uint(j.at("bc").at("N"), "bc.N");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

// ---------------------------------------------------------------------------
// Experiments

std::vector<OverlapRecord> overlap_sweep(const PsiFunction& psi, const PairList& sorted_pairs, unsigned k_from,
                                         unsigned K, unsigned jobs, int precision) {
    PairList pairs = sorted_pairs;
    std::sort(pairs.begin(), pairs.end());
    std::vector<std::vector<OverlapRecord>> per_pair(pairs.size());
    parallel_chunks(pairs.size(), jobs, [&](std::size_t, std::size_t begin, std::size_t end) {
        OverlapEngine engine(psi, precision);
        for (std::size_t i = begin; i < end; ++i) {
            const auto dec = engine.decompose(pairs[i].first, pairs[i].second);
            for (unsigned k = k_from; k <= K; ++k) per_pair[i].push_back(engine.record(dec, k, K));
        }
    });
    std::vector<OverlapRecord> out;
    for (auto& rows : per_pair)
        for (auto& r : rows) out.push_back(std::move(r));
    return out;
}

PipelineResult run_pipeline(const PsiFunction& psi, const PipelineConfig& config, unsigned jobs, int precision) {
    PipelineResult result;
    const BigInt top = to_bigint(config.N);
    for (unsigned h = 0;; ++h) {
        const BlockRange range = block_bounds(h, config.base);
        if (range.lo > top) break;
        const std::uint64_t lo = range.lo.get_ui();
        const std::uint64_t hi = range.hi > top ? config.N + 1 : range.hi.get_ui();
        if (h % 2 != 0) {
            BlockReport odd;
            odd.range = range;
            odd.epsilon = config.epsilon;
            odd.K = K_of_h(h, config.epsilon);
            result.blocks.push_back(std::move(odd));
            continue;
        }
        PairList pairs = config.sample > 0 ? sample_pairs(lo, hi, config.sample, *config.seed) : all_pairs(lo, hi);
        BlockReport report = select_k(h, psi, config.epsilon, pairs, config.base, jobs);
        if (config.sample > 0) report.seed = config.seed;
        result.chosen[h] = report.chosen_k;
        result.blocks.push_back(std::move(report));
    }

    result.psi_star = build_psi_star(psi, config.epsilon, result.chosen, config.base, config.N);
    for (std::uint64_t n = 1; n <= config.N; ++n) {
        const Rational star = result.psi_star(n);
        const auto h = block_of(n, config.base);
        if (!h || *h % 2 != 0) {
            if (!star.is_zero()) result.off_block_support.push_back(n);
            continue;
        }
        if (star != psi(n) / exp_rational(result.chosen.at(*h))) result.mismatched.push_back(n);
    }
    result.window = psi_star_window(psi, result.psi_star, config.epsilon, config.N, precision);
    return result;
}

RunSummary run_experiment(const ExperimentConfig& config, std::ostream& csv) {
    config.validate();
    PsiFunction psi = PsiFunction::parse(config.psi);
    if (config.normalize) psi = normalize_psi(psi);

    RunSummary summary;
    if (config.overlap.kind != PairCorpus::Kind::none) {
        const PairList pairs = config.overlap.materialize();
        const auto rows = overlap_sweep(psi, pairs, config.k_from, config.K, config.jobs, config.precision);
        write_overlap_csv(csv, rows);
        summary.rows = rows.size();

        Rational pair_sum;
        unsigned pair_rows = 0;
        auto flush_pair = [&] {
            if (pair_rows == 0) return;
            const Rational avg = pair_sum / Rational(static_cast<long>(pair_rows));
            if (!summary.max_avg_P || *summary.max_avg_P < avg) summary.max_avg_P = avg;
            pair_sum = Rational(0);
            pair_rows = 0;
        };
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (i > 0 && (rows[i - 1].m != r.m || rows[i - 1].n != r.n)) flush_pair();
            pair_sum += r.P_exact;
            ++pair_rows;
            const Rational ratio = r.P_exact / r.pv_product;
            if (!summary.max_p_over_pv || *summary.max_p_over_pv < ratio) summary.max_p_over_pv = ratio;
        }
        flush_pair();
    }
    if (config.pipeline) {
        if (!psi.normalized()) throw ConfigError("the psi* pipeline requires \"normalize\": true");
        summary.pipeline = run_pipeline(psi, *config.pipeline, config.jobs, config.precision);
        if (!config.pipeline->psi_star_output.empty()) {
            std::ofstream out(config.pipeline->psi_star_output);
            if (!out) throw ConfigError("cannot write '" + config.pipeline->psi_star_output + "'");
            out << "n,h,psi,psi_star\n";
            for (std::uint64_t n = 1; n <= config.pipeline->N; ++n) {
                const auto h = block_of(n, config.pipeline->base);
                out << n << ',' << (h ? std::to_string(*h) : std::string("-")) << ',' << psi(n) << ','
                    << summary.pipeline->psi_star(n) << '\n';
            }
        }
    }
    if (config.bc_N) {
        if (!psi.normalized()) throw ConfigError("bc requires \"normalize\": true");
        summary.bc = bc_ratio(psi, *config.bc_N, config.jobs);
    }
    return summary;
}

void print_summary(std::ostream& os, const ExperimentConfig& config, const RunSummary& summary) {
    os << "psi: " << config.psi << (config.normalize ? " (normalized)" : "") << '\n';
    if (config.overlap.kind != PairCorpus::Kind::none) {
        os << "overlap rows: " << summary.rows << " (k = " << config.k_from << ".." << config.K << ")\n";
        if (summary.max_p_over_pv)
            os << "max P_exact / pv_product: " << *summary.max_p_over_pv << " ~ "
               << format_real(summary.max_p_over_pv->to_double()) << '\n';
        if (summary.max_avg_P)
            os << "max mean_k P_k: " << *summary.max_avg_P << " ~ " << format_real(summary.max_avg_P->to_double())
               << '\n';
    }
    if (summary.pipeline) {
        const auto& p = *summary.pipeline;
        for (const auto& b : p.blocks) {
            os << "block h=" << b.range.h << " [" << b.range.lo << ", " << b.range.hi << ") K=" << b.K;
            if (b.range.h % 2 == 0)
                os << " pairs=" << b.pair_count << " k(h)=" << b.chosen_k;
            else
                os << " (odd, psi* = 0)";
            os << '\n';
        }
        os << "psi* support: " << p.window.support_size << " values; off-block support: "
           << p.off_block_support.size() << "; mismatches: " << p.mismatched.size() << '\n';
        if (p.window.low && p.window.high)
            os << "psi*(n) (log n)^eps / psi(n) in [" << format_real(p.window.low->value()) << ", "
               << format_real(p.window.high->value()) << "]\n";
    }
    if (summary.bc) {
        os << "bc ratio at N=" << summary.bc->partials.size() << ": " << summary.bc->ratio << " ~ "
           << format_real(summary.bc->ratio.to_double()) << '\n';
    }
}

}  // namespace limsup
