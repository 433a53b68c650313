#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hypergeom/hypergeom.hpp"
#include "hypergeom/report_io.hpp"

namespace {

using namespace hgm;

/// Pair with its Nr filled in when it occurs in the enumeration of its degree.
PolyPair lookup_pair(const std::string& text, PairConvention conv) {
    PolyPair p = parse_pair(text);
    for (const auto& q : enumerate_pairs(p.n, conv))
        if (q.f_factors == p.f_factors && q.g_factors == p.g_factors) return q;
    if (conv == PairConvention::Unordered)
        for (const auto& q : enumerate_pairs(p.n, conv))
            if (q.f_factors == p.g_factors && q.g_factors == p.f_factors) {
                PolyPair r = p;
                r.nr = q.nr;
                return r;
            }
    return p;
}

RowReport load_row(const std::string& file) {
    json j = read_json_file(file);
    if (j.is_array()) {
        if (j.empty()) throw Error(ErrorCode::ParseError, "empty report array");
        j = j.front();
    }
    return report_from_json(j);
}

int run_verify(const RowReport& r, const PipelineConfig& cfg) {
    auto bad = report_invariant_violations(r);
    if (r.status() == "ok") {
        ChainOptions chain;
        chain.max_points = cfg.max_points;
        for (const auto& g : r.LZ_generators)
            if (!is_integral(to_rational(g))) bad.push_back("non-integral generator");
        std::set<Integer> Pi(r.Pi.begin(), r.Pi.end());
        LevelOptions lopt;
        lopt.chain = chain;
        lopt.max_exponent = cfg.max_level_exponent;
        try {
            ClosureReport cl = closure_level_and_index(r.LZ_generators, Pi, lopt);
            if (cl.level != *r.level) bad.push_back("recomputed level " + format_factorization(cl.level) + " differs");
            if (cl.index != *r.index) bad.push_back("recomputed index " + format_factorization(cl.index) + " differs");
        } catch (const Error& e) {
            bad.push_back(std::string("recomputation failed: ") + e.what());
        }
    }
    PolyPair p = parse_pair(r.pair);
    if (p.coeff != r.coeff) bad.push_back("Coeff differs from the pair");
    for (const auto& b : bad) std::cout << "FAIL " << b << "\n";
    std::cout << (bad.empty() ? "verified " : "rejected ") << r.pair << " (" << r.status() << ")\n";
    return bad.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symplectic hypergeometric groups: density, level and index of the arithmetic closure"};
    app.require_subcommand(1);
    PipelineConfig cfg;
    std::string config_file;
    app.add_option("--config", config_file, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--threads", cfg.threads, "worker threads for sweeps");
    app.add_option("--candidates", cfg.candidates, "base-change candidates");
    app.add_option("--max-points", cfg.max_points, "orbit storage budget per stabilizer chain");
    app.add_option("--max-cosets", cfg.max_cosets, "coset budget for the Z-points orbit");
    app.add_option("--time-budget", cfg.time_budget, "seconds per row for the congruence stages (0: none)");

    auto* en = app.add_subcommand("enumerate", "list admissible pairs of a degree");
    unsigned en_degree = 6;
    bool ordered = false, unordered = false;
    en->add_option("--degree", en_degree, "even degree")->required();
    auto* o1 = en->add_flag("--ordered", ordered, "count (f,g) and (g,f) separately");
    auto* o2 = en->add_flag("--unordered", unordered, "one entry per unordered pair (default)");
    o1->excludes(o2);

    auto* an = app.add_subcommand("analyze", "run the pipeline on one pair");
    std::string pair_text, json_out;
    an->add_option("--pair", pair_text, "canonical pair, e.g. \"C1^6 | C14\"")->required();
    an->add_option("--seed", cfg.seed, "random seed");
    an->add_option("--json", json_out, "write the structured report here");

    auto* sw = app.add_subcommand("sweep", "analyze every pair of a degree");
    std::string out_dir;
    sw->add_option("--degree", cfg.degree, "even degree")->required();
    sw->add_option("--out", out_dir, "output directory")->required();
    sw->add_option("--seed", cfg.seed, "random seed");
    sw->add_flag("--density-only", cfg.density_only, "stop every row after the density verdict");
    bool sw_ordered = false;
    sw->add_flag("--ordered", sw_ordered, "ordered pair convention");

    auto* ve = app.add_subcommand("verify", "re-check the invariants of a stored report");
    std::string row_file;
    ve->add_option("--row", row_file, "report JSON")->required()->check(CLI::ExistingFile);

    auto* ex = app.add_subcommand("export-words", "write the Z-point generators as words in Sp(n,Z) generators");
    std::string ex_file, ex_out;
    ex->add_option("--row", ex_file, "report JSON")->required()->check(CLI::ExistingFile);
    ex->add_option("--out", ex_out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_file.empty()) cfg = config_from_json(read_json_file(config_file), cfg);
        apply_budget_env(cfg);

        if (*en) {
            const auto conv = ordered ? PairConvention::Ordered : PairConvention::Unordered;
            const auto pairs = enumerate_pairs(en_degree, conv);
            std::cout << "Nr,Pair,Coeff,SV\n";
            for (const auto& p : pairs)
                std::cout << *p.nr << ",\"" << p.canonical() << "\"," << p.coeff << ',' << (p.coeff <= 2 ? "yes" : "no") << '\n';
            std::cerr << pairs.size() << " pairs\n";
            return 0;
        }
        if (*an) {
            PolyPair p = lookup_pair(pair_text, cfg.convention);
            cfg.degree = p.n;
            RowReport r = analyze(p, cfg);
            std::cout << csv_header() << '\n' << csv_row(r) << '\n';
            json j = to_json(r);
            j["config"] = to_json(cfg);
            if (!json_out.empty()) write_text_atomic(json_out, j.dump(1) + "\n");
            else std::cout << j.dump(1) << '\n';
            return r.status() == "ok" || r.status() == "non-dense" ? 0 : 2;
        }
        if (*sw) {
            if (sw_ordered) cfg.convention = PairConvention::Ordered;
            std::size_t done = 0;
            SweepSummary s = sweep(cfg, out_dir, [&](const RowReport& r) {
                ++done;
                std::cerr << "[" << done << "] " << r.pair << " " << r.status() << "\n";
            });
            std::cout << s.to_json().dump(1) << '\n';
            return 0;
        }
        if (*ve) return run_verify(load_row(row_file), cfg);
        if (*ex) {
            RowReport r = load_row(ex_file);
            if (!r.words_exportable || r.LZ_generators.empty())
                throw Error(ErrorCode::InvalidArgument, "report has no verified Z-point generators");
            StandardGenerators S(r.degree);
            std::vector<SymplecticWord> words;
            for (const auto& g : r.LZ_generators) words.push_back(express(S, g));
            if (ex_out.empty()) {
                std::cout << "# " << r.pair << '\n';
                export_words(std::cout, S, words);
            } else {
                std::ofstream os(ex_out);
                os << "# " << r.pair << '\n';
                export_words(os, S, words);
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
