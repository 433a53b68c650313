#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hypergeom/congruence.hpp"
#include "hypergeom/construct.hpp"
#include "hypergeom/density.hpp"
#include "hypergeom/form.hpp"
#include "hypergeom/zpoints.hpp"

namespace hgm {

struct PipelineConfig {
    unsigned degree = 6;
    PairConvention convention = PairConvention::Unordered;
    std::uint64_t seed = 1;
    std::size_t candidates = 24;
    std::uint64_t power_bound = 360;
    std::uint64_t max_points = 30'000'000;
    std::uint64_t max_cosets = 1'000'000;
    unsigned max_level_exponent = 8;
    unsigned verify_retries = 2;
    unsigned threads = 1;
    /// Wall-clock seconds per row for the congruence stages; 0 disables.
    unsigned time_budget = 600;
    /// Stop after the density verdict.
    bool density_only = false;

    /// Stable text of every field that can change a report.
    std::string digest_text() const {
        return "n=" + std::to_string(degree) + ";conv=" + (convention == PairConvention::Ordered ? "o" : "u") +
               ";seed=" + std::to_string(seed) + ";cand=" + std::to_string(candidates) +
               ";pow=" + std::to_string(power_bound) + ";pts=" + std::to_string(max_points) +
               ";cos=" + std::to_string(max_cosets) + ";lev=" + std::to_string(max_level_exponent) +
               ";ret=" + std::to_string(verify_retries) + ";time=" + std::to_string(time_budget) + (density_only ? ";density" : "");
    }
};

enum class StageState { Ok, Skipped, NonDense, BudgetExceeded, Failed };

inline const char* to_string(StageState s) {
    switch (s) {
    case StageState::Ok: return "ok";
    case StageState::Skipped: return "skipped";
    case StageState::NonDense: return "non-dense";
    case StageState::BudgetExceeded: return "budget-exceeded";
    case StageState::Failed: return "failed";
    }
    return "unknown";
}

struct StageStatus {
    std::string stage;
    StageState state = StageState::Skipped;
    std::string reason;
};

struct RowReport {
    std::optional<std::size_t> nr;
    std::string pair;
    unsigned degree = 0;
    Integer coeff = 0;
    bool sv_arithmetic = false;

    std::optional<bool> dense;
    std::size_t algebra_dimension = 0;
    std::vector<Integer> mu_primes;
    Integer kbar = 0;
    std::string candidate;
    std::optional<Integer> int_index;  ///< |L:L_Z|, depends on the base change
    std::vector<Integer> Pi1, Pi;
    std::optional<PrimePowers> level, index;
    std::map<std::uint64_t, unsigned> exponents;
    PrimePowers image_order;
    bool verified = false;
    bool words_exportable = false;
    std::vector<IntMatrix> LZ_generators;
    std::vector<StageStatus> stages;

    /// "ok", "non-dense", or "<state>:<stage>" for the first stage that stopped.
    std::string status() const {
        for (const auto& s : stages)
            if (s.state != StageState::Ok) return s.state == StageState::NonDense ? "non-dense" : std::string(to_string(s.state)) + ":" + s.stage;
        return "ok";
    }
};

namespace detail {

inline StageStatus stage_error(const std::string& stage, const Error& e) {
    return {stage, is_budget_error(e.code()) ? StageState::BudgetExceeded : StageState::Failed, e.what()};
}

inline std::vector<Integer> to_vector(const std::set<Integer>& s) { return {s.begin(), s.end()}; }

}  // namespace detail

inline const std::vector<std::string>& pipeline_stages() {
    static const std::vector<std::string> names{"build", "normalize", "density", "zpoints", "primes", "closure", "verify"};
    return names;
}

/// Runs the full analysis of one pair; failures end up in the stage list.
inline RowReport analyze(const PolyPair& pair, const PipelineConfig& cfg) {
    RowReport rep;
    rep.nr = pair.nr;
    rep.pair = pair.canonical();
    rep.degree = pair.n;
    rep.coeff = pair.coeff;
    rep.sv_arithmetic = pair.coeff <= 2;

    std::size_t next = 0;
    const auto& names = pipeline_stages();
    auto finish = [&](StageStatus st) {
        rep.stages.push_back(std::move(st));
        ++next;
    };
    auto skip_rest = [&] {
        while (next < names.size()) finish({names[next], StageState::Skipped, ""});
    };

    ChainOptions chain;
    chain.max_points = cfg.max_points;
    chain.seed = cfg.seed;
    if (cfg.time_budget > 0) chain.deadline = std::chrono::steady_clock::now() + std::chrono::seconds(cfg.time_budget);
    LevelOptions lopt;
    lopt.max_exponent = cfg.max_level_exponent;
    lopt.chain = chain;

    HypergroupData H;
    FormData fd;
    DensityCertificate cert;
    IntegerPointsData zp;
    std::set<Integer> Pi;
    ClosureReport cl;
    try {
        H = build_group(pair);
        finish({"build", StageState::Ok, ""});
    } catch (const Error& e) {
        finish(detail::stage_error("build", e));
        skip_rest();
        return rep;
    }
    try {
        NormalizeOptions nopt;
        nopt.candidates = cfg.candidates;
        nopt.power_bound = cfg.power_bound;
        nopt.seed = cfg.seed;
        fd = normalize_group(H, nopt);
        rep.kbar = fd.kbar;
        rep.candidate = fd.candidate_label;
        const Integer mu = denominator_mu(fd.L_generators);
        if (mu > 1) rep.mu_primes = detail::to_vector(prime_divisors(mu));
        finish({"normalize", StageState::Ok, ""});
    } catch (const Error& e) {
        finish(detail::stage_error("normalize", e));
        skip_rest();
        return rep;
    }
    try {
        cert = is_dense(fd.L_generators, fd.h);
        rep.dense = cert.dense;
        rep.algebra_dimension = cert.dimension;
        if (!cert.dense) {
            finish({"density", StageState::NonDense, "algebra dimension " + std::to_string(cert.dimension)});
            skip_rest();
            return rep;
        }
        finish({"density", StageState::Ok, ""});
        if (cfg.density_only) {
            skip_rest();
            return rep;
        }
    } catch (const Error& e) {
        finish(detail::stage_error("density", e));
        skip_rest();
        return rep;
    }
    ZPointsOptions zopt;
    zopt.max_cosets = cfg.max_cosets;
    zopt.seed = cfg.seed;
    try {
        zp = integer_points(fd.L_generators, fd.h, zopt);
        rep.int_index = zp.index;
        finish({"zpoints", StageState::Ok, ""});
    } catch (const Error& e) {
        finish(detail::stage_error("zpoints", e));
        skip_rest();
        return rep;
    }
    try {
        std::vector<RatMatrix> lz;
        for (const auto& g : zp.LZ_generators) lz.push_back(g.m);
        const auto Pi1 = candidate_primes(cert);
        rep.Pi1 = detail::to_vector(Pi1);
        SurjectivityOptions sopt;
        sopt.chain = chain;
        Pi = exceptional_primes(lz, zp.lambda, Pi1, sopt);
        rep.Pi = detail::to_vector(Pi);
        finish({"primes", StageState::Ok, ""});
    } catch (const Error& e) {
        finish(detail::stage_error("primes", e));
        skip_rest();
        return rep;
    }
    try {
        cl = closure_level_and_index(zp.integer_generators(), Pi, lopt);
        finish({"closure", StageState::Ok, ""});
    } catch (const Error& e) {
        finish(detail::stage_error("closure", e));
        skip_rest();
        return rep;
    }
    try {
        bool ok = verify_zpoints(zp, cl.level, chain);
        for (unsigned r = 0; !ok && r < cfg.verify_retries; ++r) {
            zopt.seed = cfg.seed + 1 + r;
            zopt.subproducts *= 2;
            zp = integer_points(fd.L_generators, fd.h, zopt);
            cl = closure_level_and_index(zp.integer_generators(), Pi, lopt);
            ok = verify_zpoints(zp, cl.level, chain);
        }
        if (!ok) throw Error(ErrorCode::VerificationFailed, "Schreier generators outside the chosen subgroup mod the level");
        rep.level = cl.level;
        rep.index = cl.index;
        rep.exponents = cl.exponents;
        rep.image_order = cl.image_order;
        rep.verified = true;
        rep.LZ_generators = zp.integer_generators();
        rep.words_exportable = true;
        finish({"verify", StageState::Ok, ""});
    } catch (const Error& e) {
        finish(detail::stage_error("verify", e));
    }
    return rep;
}

/// Internal consistency of a finished report, independent of how it was stored.
inline std::vector<std::string> report_invariant_violations(const RowReport& r) {
    std::vector<std::string> bad;
    if (r.sv_arithmetic != (r.coeff <= 2)) bad.push_back("sv flag disagrees with Coeff");
    if (r.stages.size() != pipeline_stages().size()) bad.push_back("stage list incomplete");
    if (r.status() != "ok") return bad;
    if (!r.level || !r.index) {
        bad.push_back("ok report without level/index");
        return bad;
    }
    const Integer lv = evaluate(*r.level), ix = evaluate(*r.index);
    if ((lv == 1) != (ix == 1)) bad.push_back("level 1 and index 1 must coincide");
    std::set<Integer> allowed(r.Pi.begin(), r.Pi.end());
    allowed.insert(2);
    allowed.insert(3);
    for (const auto& [p, e] : *r.level)
        if (!allowed.count(p)) bad.push_back("level prime " + p.get_str() + " outside Pi and {2,3}");
    PrimePowers prod = *r.index;
    multiply_into(prod, r.image_order);
    if (prod != sp_order_factored(r.degree, *r.level)) bad.push_back("index times image order differs from |Sp(n,Z/M)|");
    const IntMatrix J = standard_form<Integer>(r.degree);
    for (const auto& g : r.LZ_generators)
        if (g * J * g.transpose() != J) bad.push_back("a Z-point generator is not symplectic");
    return bad;
}

}  // namespace hgm
