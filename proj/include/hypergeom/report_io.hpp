#pragma once

// JSON and CSV serialization of reports, the on-disk cache and sweeps.
// Needs nlohmann/json on the include path.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hypergeom/pipeline.hpp"

namespace hgm {

using json = nlohmann::json;

namespace detail {

inline json integers_to_json(const std::vector<Integer>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.get_str());
    return a;
}

inline std::vector<Integer> integers_from_json(const json& a) {
    std::vector<Integer> out;
    for (const auto& x : a) out.emplace_back(x.get<std::string>());
    return out;
}

inline json matrix_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).get_str());
        rows.push_back(std::move(r));
    }
    return rows;
}

inline IntMatrix matrix_from_json(const json& rows) {
    const std::size_t n = rows.size(), c = n ? rows[0].size() : 0;
    IntMatrix m(n, c);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = Integer(rows[i][j].get<std::string>());
    return m;
}

inline StageState stage_state_from(const std::string& s) {
    for (auto st : {StageState::Ok, StageState::Skipped, StageState::NonDense, StageState::BudgetExceeded, StageState::Failed})
        if (s == to_string(st)) return st;
    throw Error(ErrorCode::ParseError, "unknown stage state '" + s + "'");
}

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string join(const std::vector<Integer>& v, const char* sep) {
    std::string s;
    for (const auto& x : v) {
        if (!s.empty()) s += sep;
        s += x.get_str();
    }
    return s;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace detail

inline json to_json(const PipelineConfig& c) {
    return {{"degree", c.degree},
            {"convention", c.convention == PairConvention::Ordered ? "ordered" : "unordered"},
            {"seed", c.seed},
            {"candidates", c.candidates},
            {"power_bound", c.power_bound},
            {"max_points", c.max_points},
            {"max_cosets", c.max_cosets},
            {"max_level_exponent", c.max_level_exponent},
            {"verify_retries", c.verify_retries},
            {"threads", c.threads},
            {"time_budget", c.time_budget},
            {"density_only", c.density_only}};
}

/// Missing keys keep their defaults.
inline PipelineConfig config_from_json(const json& j, PipelineConfig c = {}) {
    c.degree = j.value("degree", c.degree);
    if (j.contains("convention")) c.convention = j["convention"] == "ordered" ? PairConvention::Ordered : PairConvention::Unordered;
    c.seed = j.value("seed", c.seed);
    c.candidates = j.value("candidates", c.candidates);
    c.power_bound = j.value("power_bound", c.power_bound);
    c.max_points = j.value("max_points", c.max_points);
    c.max_cosets = j.value("max_cosets", c.max_cosets);
    c.max_level_exponent = j.value("max_level_exponent", c.max_level_exponent);
    c.verify_retries = j.value("verify_retries", c.verify_retries);
    c.threads = j.value("threads", c.threads);
    c.time_budget = j.value("time_budget", c.time_budget);
    c.density_only = j.value("density_only", c.density_only);
    return c;
}

/// HGM_MAX_POINTS, HGM_MAX_COSETS and HGM_TIME_BUDGET override the budgets.
inline void apply_budget_env(PipelineConfig& c) {
    if (const char* v = std::getenv("HGM_TIME_BUDGET")) c.time_budget = static_cast<unsigned>(std::stoul(v));
    if (const char* v = std::getenv("HGM_MAX_POINTS")) c.max_points = std::stoull(v);
    if (const char* v = std::getenv("HGM_MAX_COSETS")) c.max_cosets = std::stoull(v);
}

inline json to_json(const RowReport& r) {
    json j;
    j["nr"] = r.nr ? json(*r.nr) : json(nullptr);
    j["pair"] = r.pair;
    j["degree"] = r.degree;
    j["coeff"] = r.coeff.get_str();
    j["sv_arithmetic"] = r.sv_arithmetic;
    j["dense"] = r.dense ? json(*r.dense) : json(nullptr);
    j["algebra_dimension"] = r.algebra_dimension;
    j["mu_primes"] = detail::integers_to_json(r.mu_primes);
    j["kbar"] = r.kbar.get_str();
    j["candidate"] = r.candidate;
    j["int"] = r.int_index ? json(r.int_index->get_str()) : json(nullptr);
    j["int_depends_on_basechange"] = true;
    j["Pi1"] = detail::integers_to_json(r.Pi1);
    j["Pi"] = detail::integers_to_json(r.Pi);
    j["iLevel"] = r.level ? json(format_factorization(*r.level)) : json(nullptr);
    j["iIndex"] = r.index ? json(format_factorization(*r.index)) : json(nullptr);
    json ex = json::object();
    for (const auto& [p, e] : r.exponents) ex[std::to_string(p)] = e;
    j["exponents"] = ex;
    j["image_order"] = format_factorization(r.image_order);
    j["verified"] = r.verified;
    j["words_exportable"] = r.words_exportable;
    json gens = json::array();
    for (const auto& g : r.LZ_generators) gens.push_back(detail::matrix_to_json(g));
    j["LZ_generators"] = gens;
    json st = json::array();
    for (const auto& s : r.stages) st.push_back({{"stage", s.stage}, {"state", to_string(s.state)}, {"reason", s.reason}});
    j["stages"] = st;
    j["status"] = r.status();
    return j;
}

inline RowReport report_from_json(const json& j) {
    RowReport r;
    if (!j.at("nr").is_null()) r.nr = j["nr"].get<std::size_t>();
    r.pair = j.at("pair").get<std::string>();
    r.degree = j.at("degree").get<unsigned>();
    r.coeff = Integer(j.at("coeff").get<std::string>());
    r.sv_arithmetic = j.at("sv_arithmetic").get<bool>();
    if (!j.at("dense").is_null()) r.dense = j["dense"].get<bool>();
    r.algebra_dimension = j.at("algebra_dimension").get<std::size_t>();
    r.mu_primes = detail::integers_from_json(j.at("mu_primes"));
    r.kbar = Integer(j.at("kbar").get<std::string>());
    r.candidate = j.at("candidate").get<std::string>();
    if (!j.at("int").is_null()) r.int_index = Integer(j["int"].get<std::string>());
    r.Pi1 = detail::integers_from_json(j.at("Pi1"));
    r.Pi = detail::integers_from_json(j.at("Pi"));
    if (!j.at("iLevel").is_null()) r.level = parse_factorization(j["iLevel"].get<std::string>());
    if (!j.at("iIndex").is_null()) r.index = parse_factorization(j["iIndex"].get<std::string>());
    for (const auto& [p, e] : j.at("exponents").items()) r.exponents[std::stoull(p)] = e.get<unsigned>();
    r.image_order = parse_factorization(j.at("image_order").get<std::string>());
    r.verified = j.at("verified").get<bool>();
    r.words_exportable = j.at("words_exportable").get<bool>();
    for (const auto& g : j.at("LZ_generators")) r.LZ_generators.push_back(detail::matrix_from_json(g));
    for (const auto& s : j.at("stages"))
        r.stages.push_back({s.at("stage").get<std::string>(), detail::stage_state_from(s.at("state").get<std::string>()),
                            s.at("reason").get<std::string>()});
    return r;
}

inline const char* csv_header() { return "Nr,Pair,Mu,Int,Pi,iLevel,iIndex,Coeff,SV,Status"; }

inline std::string csv_row(const RowReport& r) {
    std::string intf;
    if (r.int_index) {
        FactorResult fr = factor(*r.int_index);
        intf = fr.complete() ? format_factorization(fr.primes) : r.int_index->get_str();
    }
    std::vector<std::string> f{r.nr ? std::to_string(*r.nr) : "",
                               r.pair,
                               r.mu_primes.empty() ? "1" : detail::join(r.mu_primes, ","),
                               intf,
                               detail::join(r.Pi, ","),
                               r.level ? format_factorization(*r.level) : "",
                               r.index ? format_factorization(*r.index) : "",
                               r.coeff.get_str(),
                               r.sv_arithmetic ? "yes" : "no",
                               r.status()};
    std::string line;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) line += ',';
        line += detail::csv_field(f[i]);
    }
    return line;
}

inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(detail::fnv1a(text) ^ std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream os(tmp, std::ios::binary);
        os << text;
        if (!os) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline json read_json_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::InvalidArgument, "cannot read " + path.string());
    return json::parse(is);
}

/// One file per row, named by a digest of the pair and the configuration.
class ReportCache {
public:
    explicit ReportCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    std::filesystem::path path_for(const std::string& pair, const PipelineConfig& cfg) const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(detail::fnv1a(pair + "#" + cfg.digest_text())));
        return dir_ / (std::string(buf) + ".json");
    }

    std::optional<RowReport> load(const std::string& pair, const PipelineConfig& cfg) const {
        const auto p = path_for(pair, cfg);
        if (!std::filesystem::exists(p)) return std::nullopt;
        try {
            json j = read_json_file(p);
            if (j.value("config_digest", std::string()) != cfg.digest_text() || j.value("pair", std::string()) != pair) return std::nullopt;
            return report_from_json(j);
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    void store(const RowReport& r, const PipelineConfig& cfg) const {
        json j = to_json(r);
        j["config_digest"] = cfg.digest_text();
        write_text_atomic(path_for(r.pair, cfg), j.dump(1) + "\n");
    }

private:
    std::filesystem::path dir_;
};

struct SweepSummary {
    std::size_t pairs = 0, dense = 0, non_dense = 0, complete = 0, budget = 0, failed = 0, cached = 0;
    std::map<std::string, std::size_t> statuses;

    json to_json() const {
        return {{"pairs", pairs},   {"dense", dense},   {"non_dense", non_dense}, {"complete", complete},
                {"budget_exceeded", budget}, {"failed", failed}, {"cached", cached}, {"statuses", statuses}};
    }
};

/// Analyzes every pair of the configured degree in parallel, reusing cached
/// rows; writes rows.csv, reports.jsonl and summary.json under out.
inline SweepSummary sweep(const PipelineConfig& cfg, const std::filesystem::path& out,
                          const std::function<void(const RowReport&)>& progress = {}) {
    std::filesystem::create_directories(out);
    ReportCache cache(out / "cache");
    const auto pairs = enumerate_pairs(cfg.degree, cfg.convention);
    std::vector<RowReport> reports(pairs.size());
    std::vector<char> from_cache(pairs.size(), 0);
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pairs.size()) return;
            const std::string key = pairs[i].canonical();
            if (auto c = cache.load(key, cfg)) {
                reports[i] = std::move(*c);
                from_cache[i] = 1;
            } else {
                reports[i] = analyze(pairs[i], cfg);
                cache.store(reports[i], cfg);
            }
            if (progress) {
                std::lock_guard<std::mutex> lock(mu);
                progress(reports[i]);
            }
        }
    };
    const unsigned nt = std::max(1u, cfg.threads);
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SweepSummary sum;
    std::string csv = std::string(csv_header()) + "\n", jsonl;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const RowReport& r = reports[i];
        ++sum.pairs;
        sum.cached += from_cache[i];
        if (r.dense && *r.dense) ++sum.dense;
        if (r.dense && !*r.dense) ++sum.non_dense;
        const std::string st = r.status();
        ++sum.statuses[st];
        if (st == "ok") ++sum.complete;
        else if (st.rfind("budget-exceeded", 0) == 0) ++sum.budget;
        else if (st.rfind("failed", 0) == 0) ++sum.failed;
        csv += csv_row(r) + "\n";
        jsonl += to_json(r).dump() + "\n";
    }
    write_text_atomic(out / "rows.csv", csv);
    write_text_atomic(out / "reports.jsonl", jsonl);
    json sj = sum.to_json();
    sj["config"] = to_json(cfg);
    write_text_atomic(out / "summary.json", sj.dump(1) + "\n");
    return sum;
}

}  // namespace hgm
