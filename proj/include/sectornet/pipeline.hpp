#ifndef SECTORNET_PIPELINE_HPP_
#define SECTORNET_PIPELINE_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "sectornet/community.hpp"
#include "sectornet/date.hpp"
#include "sectornet/errors.hpp"
#include "sectornet/graph_io.hpp"
#include "sectornet/histogram.hpp"
#include "sectornet/ingest.hpp"
#include "sectornet/matrix_io.hpp"
#include "sectornet/panel_io.hpp"
#include "sectornet/pmfg.hpp"
#include "sectornet/sectormetrics.hpp"
#include "sectornet/spectra.hpp"
#include "sectornet/synthetic.hpp"
#include "sectornet/text.hpp"

#ifndef SECTORNET_VERSION
#define SECTORNET_VERSION "0.1.0"
#endif

namespace sectornet {

struct Period {
    Date start;
    Date end;

    friend bool operator==(const Period&, const Period&) = default;
};

/// The five 18-month windows used for the sub-period analysis.
inline std::vector<Period> default_periods() {
    auto d = [](int y, unsigned m, unsigned day) {
        return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{day}};
    };
    return {{d(2007, 10, 8), d(2009, 3, 31)},
            {d(2009, 4, 1), d(2010, 9, 30)},
            {d(2010, 10, 8), d(2012, 3, 30)},
            {d(2012, 4, 5), d(2013, 9, 30)},
            {d(2013, 10, 8), d(2015, 3, 31)}};
}

struct PipelineConfig {
    std::string input; // long CSV file or panel directory; empty when `synthetic` is set
    ColumnSchema schema;
    std::optional<SyntheticSpec> synthetic;
    std::vector<SeriesKind> kinds{SeriesKind::Return, SeriesKind::Turnover};
    PmfgMethod method = PmfgMethod::Distance;
    std::vector<Period> sub_periods = default_periods();
    bool include_full_period = true;
    bool apply_liquidity_filter = true;
    LiquidityFilter liquidity;
    double rmt_multiplier = 1.0;
    std::uint64_t seed = 1;
    std::size_t trials = 10;
    double damping = 0.85;
    bool weighted_pagerank = true;
    double flow_floor = 1e-6;
    std::size_t report_k = 8;
    ProminenceRule prominence;
    // execution settings, excluded from the config hash
    std::string output_dir = "out";
    std::size_t threads = 0; // 0 = hardware concurrency

    friend bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
        return a.input == b.input && a.schema == b.schema && a.synthetic == b.synthetic &&
               a.kinds == b.kinds && a.method == b.method && a.sub_periods == b.sub_periods &&
               a.include_full_period == b.include_full_period &&
               a.apply_liquidity_filter == b.apply_liquidity_filter &&
               a.liquidity.max_consecutive_gap == b.liquidity.max_consecutive_gap &&
               a.liquidity.max_total_gap == b.liquidity.max_total_gap && a.rmt_multiplier == b.rmt_multiplier &&
               a.seed == b.seed && a.trials == b.trials && a.damping == b.damping &&
               a.weighted_pagerank == b.weighted_pagerank && a.flow_floor == b.flow_floor &&
               a.report_k == b.report_k && a.prominence.min_count == b.prominence.min_count &&
               a.prominence.min_fraction == b.prominence.min_fraction && a.output_dir == b.output_dir &&
               a.threads == b.threads;
    }
};

// ------------------------------------------------------------------ config (de)serialization

namespace detail {

using json = nlohmann::json;

inline Date json_date(const json& j, const std::string& what) {
    if (!j.is_string()) throw UsageError(what + " must be an ISO date string");
    const auto d = parse_date(j.get<std::string>());
    if (!d) throw UsageError(what + ": malformed date '" + j.get<std::string>() + "'");
    return *d;
}

// Reads `key` into `out` if present; rejects type mismatches with the key name.
template <class T>
void read_key(const json& obj, const char* key, T& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        out = it->template get<T>();
    } catch (const json::exception&) {
        throw UsageError(std::string("config key '") + key + "' has the wrong type");
    }
}

inline void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
            throw UsageError("unknown config key '" + key + "' in " + where);
        }
    }
}

} // namespace detail

inline nlohmann::json to_json(const SyntheticSpec& s) {
    return {{"n_stocks", s.n_stocks},       {"n_days", s.n_days},
            {"n_sectors", s.n_sectors},     {"market_beta", s.market_beta},
            {"sector_beta", s.sector_beta}, {"noise_sigma", s.noise_sigma},
            {"seed", s.seed},               {"start", format_date(s.start)},
            {"return_scale", s.return_scale}, {"turnover_level", s.turnover_level},
            {"turnover_scale", s.turnover_scale}};
}

inline SyntheticSpec synthetic_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw UsageError("synthetic must be an object");
    detail::reject_unknown(j,
                           {"n_stocks", "n_days", "n_sectors", "market_beta", "sector_beta", "noise_sigma", "seed",
                            "start", "return_scale", "turnover_level", "turnover_scale"},
                           "synthetic");
    SyntheticSpec s;
    detail::read_key(j, "n_stocks", s.n_stocks);
    detail::read_key(j, "n_days", s.n_days);
    detail::read_key(j, "n_sectors", s.n_sectors);
    detail::read_key(j, "market_beta", s.market_beta);
    detail::read_key(j, "sector_beta", s.sector_beta);
    detail::read_key(j, "noise_sigma", s.noise_sigma);
    detail::read_key(j, "seed", s.seed);
    detail::read_key(j, "return_scale", s.return_scale);
    detail::read_key(j, "turnover_level", s.turnover_level);
    detail::read_key(j, "turnover_scale", s.turnover_scale);
    if (j.contains("start")) s.start = detail::json_date(j["start"], "synthetic.start");
    return s;
}

inline nlohmann::json to_json(const PipelineConfig& c) {
    nlohmann::json periods = nlohmann::json::array();
    for (const auto& p : c.sub_periods) periods.push_back({{"start", format_date(p.start)}, {"end", format_date(p.end)}});
    nlohmann::json kinds = nlohmann::json::array();
    for (auto k : c.kinds) kinds.push_back(to_string(k));
    return {{"input", c.input},
            {"schema",
             {{"date", c.schema.date},
              {"ticker", c.schema.ticker},
              {"close", c.schema.close},
              {"volume", c.schema.volume},
              {"shares_outstanding", c.schema.shares_outstanding},
              {"sector", c.schema.sector},
              {"sh_flag", c.schema.sh_flag},
              {"sector_codes", c.schema.sector_codes}}},
            {"synthetic", c.synthetic ? to_json(*c.synthetic) : nlohmann::json(nullptr)},
            {"kinds", kinds},
            {"method", to_string(c.method)},
            {"sub_periods", periods},
            {"include_full_period", c.include_full_period},
            {"apply_liquidity_filter", c.apply_liquidity_filter},
            {"liquidity",
             {{"max_consecutive_gap", c.liquidity.max_consecutive_gap}, {"max_total_gap", c.liquidity.max_total_gap}}},
            {"rmt_multiplier", c.rmt_multiplier},
            {"seed", c.seed},
            {"trials", c.trials},
            {"damping", c.damping},
            {"weighted_pagerank", c.weighted_pagerank},
            {"flow_floor", c.flow_floor},
            {"report_k", c.report_k},
            {"prominence", {{"min_count", c.prominence.min_count}, {"min_fraction", c.prominence.min_fraction}}},
            {"output_dir", c.output_dir},
            {"threads", c.threads}};
}

/// Missing keys keep their defaults; unknown keys are rejected.
inline PipelineConfig config_from_json(const nlohmann::json& j) {
    using detail::read_key;
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    detail::reject_unknown(j,
                           {"input", "schema", "synthetic", "kinds", "method", "sub_periods", "include_full_period",
                            "apply_liquidity_filter", "liquidity", "rmt_multiplier", "seed", "trials", "damping",
                            "weighted_pagerank", "flow_floor", "report_k", "prominence", "output_dir", "threads"},
                           "config");
    PipelineConfig c;
    read_key(j, "input", c.input);
    if (j.contains("schema")) {
        const auto& s = j["schema"];
        if (!s.is_object()) throw UsageError("schema must be an object");
        detail::reject_unknown(s,
                               {"date", "ticker", "close", "volume", "shares_outstanding", "sector", "sh_flag",
                                "sector_codes"},
                               "schema");
        read_key(s, "date", c.schema.date);
        read_key(s, "ticker", c.schema.ticker);
        read_key(s, "close", c.schema.close);
        read_key(s, "volume", c.schema.volume);
        read_key(s, "shares_outstanding", c.schema.shares_outstanding);
        read_key(s, "sector", c.schema.sector);
        read_key(s, "sh_flag", c.schema.sh_flag);
        read_key(s, "sector_codes", c.schema.sector_codes);
    }
    if (j.contains("synthetic") && !j["synthetic"].is_null()) c.synthetic = synthetic_from_json(j["synthetic"]);
    if (j.contains("kinds")) {
        std::vector<std::string> names;
        read_key(j, "kinds", names);
        c.kinds.clear();
        for (const auto& n : names) c.kinds.push_back(parse_series_kind(n));
    }
    if (j.contains("method")) {
        std::string m;
        read_key(j, "method", m);
        c.method = parse_pmfg_method(m);
    }
    if (j.contains("sub_periods")) {
        if (!j["sub_periods"].is_array()) throw UsageError("sub_periods must be an array");
        c.sub_periods.clear();
        for (const auto& p : j["sub_periods"]) {
            if (!p.is_object() || !p.contains("start") || !p.contains("end")) {
                throw UsageError("each sub-period needs start and end");
            }
            detail::reject_unknown(p, {"start", "end"}, "sub_periods");
            c.sub_periods.push_back({detail::json_date(p["start"], "sub_periods.start"),
                                     detail::json_date(p["end"], "sub_periods.end")});
        }
    }
    read_key(j, "include_full_period", c.include_full_period);
    read_key(j, "apply_liquidity_filter", c.apply_liquidity_filter);
    if (j.contains("liquidity")) {
        detail::reject_unknown(j["liquidity"], {"max_consecutive_gap", "max_total_gap"}, "liquidity");
        read_key(j["liquidity"], "max_consecutive_gap", c.liquidity.max_consecutive_gap);
        read_key(j["liquidity"], "max_total_gap", c.liquidity.max_total_gap);
    }
    read_key(j, "rmt_multiplier", c.rmt_multiplier);
    read_key(j, "seed", c.seed);
    read_key(j, "trials", c.trials);
    read_key(j, "damping", c.damping);
    read_key(j, "weighted_pagerank", c.weighted_pagerank);
    read_key(j, "flow_floor", c.flow_floor);
    read_key(j, "report_k", c.report_k);
    if (j.contains("prominence")) {
        detail::reject_unknown(j["prominence"], {"min_count", "min_fraction"}, "prominence");
        read_key(j["prominence"], "min_count", c.prominence.min_count);
        read_key(j["prominence"], "min_fraction", c.prominence.min_fraction);
    }
    read_key(j, "output_dir", c.output_dir);
    read_key(j, "threads", c.threads);
    return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path.string());
    try {
        return config_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config " + path.string() + " is not valid JSON: " + e.what());
    }
}

inline void validate(const PipelineConfig& c) {
    if (c.input.empty() && !c.synthetic) throw UsageError("config needs an input path or a synthetic spec");
    if (c.synthetic) validate(*c.synthetic);
    if (c.kinds.empty()) throw UsageError("config lists no series kinds");
    for (std::size_t k = 0; k < c.sub_periods.size(); ++k) {
        const auto& p = c.sub_periods[k];
        if (p.end < p.start) throw UsageError("sub-period " + std::to_string(k + 1) + " ends before it starts");
        if (k > 0 && !(c.sub_periods[k - 1].end < p.start)) {
            throw UsageError("sub-periods must be non-overlapping and chronologically ordered");
        }
    }
    if (c.sub_periods.empty() && !c.include_full_period) throw UsageError("no periods to analyse");
    if (!(c.damping > 0.0 && c.damping <= 1.0)) throw UsageError("damping must lie in (0, 1]");
    if (c.trials < 1) throw UsageError("trials must be at least 1");
    if (!(c.rmt_multiplier > 0.0)) throw UsageError("rmt_multiplier must be positive");
    if (c.report_k < 1) throw UsageError("report_k must be at least 1");
    if (!(c.flow_floor > 0.0)) throw UsageError("flow_floor must be positive");
    if (!(c.prominence.min_fraction >= 0.0 && c.prominence.min_fraction <= 1.0)) {
        throw UsageError("prominence.min_fraction must lie in [0, 1]");
    }
}

/// SECTORNET_OUT and SECTORNET_THREADS override the output directory and thread count.
inline void apply_environment(PipelineConfig& c) {
    if (const char* out = std::getenv("SECTORNET_OUT"); out && *out) c.output_dir = out;
    if (const char* threads = std::getenv("SECTORNET_THREADS"); threads && *threads) {
        const auto n = text::parse_int(threads);
        if (!n || *n < 0) throw UsageError("SECTORNET_THREADS must be a non-negative integer");
        c.threads = static_cast<std::size_t>(*n);
    }
}

// ------------------------------------------------------------------ hashing

inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int size = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
        throw NumericalError("SHA-256 computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < size; ++k) {
        out += hex[digest[k] >> 4];
        out += hex[digest[k] & 15];
    }
    return out;
}

/// Hash of the analysis settings (execution settings excluded).
inline std::string config_hash(const PipelineConfig& c) {
    auto j = to_json(c);
    j.erase("output_dir");
    j.erase("threads");
    return sha256_hex(j.dump());
}

// ------------------------------------------------------------------ input

struct LoadedInput {
    MarketPanel panel;
    std::vector<std::size_t> planted; // synthetic ground truth, row order of `panel`; empty otherwise
};

inline LoadedInput load_input(const PipelineConfig& c) {
    LoadedInput out;
    if (c.synthetic && c.input.empty()) {
        auto syn = generate_synthetic(*c.synthetic);
        out.panel = std::move(syn.panel);
        out.planted = std::move(syn.sector_of);
        return out;
    }
    const std::filesystem::path path(c.input);
    if (std::filesystem::is_directory(path)) {
        out.panel = read_panel_dir(path);
    } else {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open input " + path.string());
        out.panel = parse_panel(in, c.schema);
    }
    return out;
}

// ------------------------------------------------------------------ cells

enum class Stage { Correlate = 1, Decompose, Pmfg, Communities, Full };

struct Diagnostic {
    std::string cell;     // "<kind>/<period>" or "" for run-level messages
    std::string severity; // "warning" or "error"
    std::string category; // "data", "numerical", "usage", "internal" or "" for warnings
    std::string message;
};

struct CellResult {
    SeriesKind kind = SeriesKind::Return;
    std::string period_label;
    Period period;
    bool ok = false;
    std::vector<std::string> tickers;
    std::vector<SectorLabel> labels;
    std::size_t length = 0;
    CorrelationSpectrum spectrum;
    std::optional<ModeDecomposition> modes;
    std::optional<EigenSummary> summary;
    std::optional<PlanarGraph> graph;
    std::optional<CommunityPartition> partition;
    std::vector<Community> report;
    std::vector<double> mean_corr;
    std::vector<MethodComparison> comparison;

    std::string id() const { return std::string(to_string(kind)) + "/" + period_label; }
};

inline std::string make_period_label(std::size_t index, const Period& p) {
    return "P" + std::to_string(index + 1) + "_" + format_date(p.start) + "_" + format_date(p.end);
}

/// Runs one (kind, period) cell up to `stage`. Throws on failure; the caller isolates cells.
inline CellResult run_cell(const MarketPanel& panel, SeriesKind kind, const Period& period, const std::string& label,
                           const PipelineConfig& config, Stage stage, std::vector<Diagnostic>& notes) {
    CellResult cell;
    cell.kind = kind;
    cell.period = period;
    cell.period_label = label;
    const auto slice = slice_period(panel, period.start, period.end);
    const auto series = compute_series(slice, kind);
    cell.tickers = series.tickers;
    for (const auto& t : cell.tickers) cell.labels.push_back(panel.sectors.at(t));
    cell.length = series.length();
    if (series.length() <= series.n()) {
        notes.push_back({cell.id(), "warning", "",
                         "window has " + std::to_string(series.length()) + " observations for " +
                             std::to_string(series.n()) + " series (Q <= 1); noise band undefined"});
    }
    cell.spectrum = pearson_matrix(series);
    if (stage == Stage::Correlate) {
        cell.ok = true;
        return cell;
    }
    eigendecompose(cell.spectrum);
    cell.modes = decompose_modes(cell.spectrum, config.rmt_multiplier);
    cell.summary = eigen_summary(cell.spectrum, *cell.modes);
    if (cell.modes->sector_count == 0) {
        notes.push_back({cell.id(), "warning", "", "no eigenvalue beyond the market mode exceeds the noise band (M = 0)"});
    }
    if (stage == Stage::Decompose) {
        cell.ok = true;
        return cell;
    }
    std::vector<std::string> codes;
    for (const auto& l : cell.labels) codes.push_back(l.code);
    const auto other = config.method == PmfgMethod::Distance ? PmfgMethod::Absolute : PmfgMethod::Distance;
    cell.graph = build_pmfg(cell.modes->sector, config.method);
    if (stage == Stage::Pmfg) {
        cell.ok = true;
        return cell;
    }
    const FlowOptions flow{config.damping, config.weighted_pagerank, config.flow_floor};
    cell.partition = detect_communities(make_flow_network(*cell.graph, flow), config.seed, config.trials);
    cell.report = community_report(*cell.partition, *cell.graph, cell.labels, config.report_k);
    cell.mean_corr = mean_neighbor_correlation(*cell.graph);
    if (stage == Stage::Communities) {
        cell.ok = true;
        return cell;
    }
    const auto second = build_pmfg(cell.modes->sector, other);
    for (const PlanarGraph* g : std::initializer_list<const PlanarGraph*>{&*cell.graph, &second}) {
        cell.comparison.push_back({g->method,
                                   sector_correlations(*g, cell.modes->sector, codes, CorrelationBasis::SectorMode),
                                   sector_correlations(*g, cell.spectrum.corr, codes, CorrelationBasis::Raw)});
    }
    std::sort(cell.comparison.begin(), cell.comparison.end(),
              [](const auto& a, const auto& b) { return a.method < b.method; });
    cell.ok = true;
    return cell;
}

struct PipelineResult {
    PipelineConfig config;
    MarketPanel panel; // after the liquidity filter
    std::vector<std::size_t> planted;
    std::vector<CellResult> cells;
    std::vector<Diagnostic> diagnostics;
    Stage stage = Stage::Full;
};

/// Every (kind, period) cell of `config` over `input`. Cells run concurrently and fail independently.
inline PipelineResult run_pipeline(const PipelineConfig& config, LoadedInput input, Stage stage = Stage::Full) {
    validate(config);
    PipelineResult result;
    result.config = config;
    result.stage = stage;
    result.planted = std::move(input.planted);
    if (config.apply_liquidity_filter) {
        const auto before = input.panel.tickers;
        result.panel = filter_liquidity(input.panel, config.liquidity);
        if (!result.planted.empty()) {
            std::vector<std::size_t> kept;
            for (std::size_t i = 0, k = 0; i < before.size() && k < result.panel.n(); ++i)
                if (before[i] == result.panel.tickers[k]) {
                    kept.push_back(result.planted[i]);
                    ++k;
                }
            result.planted = std::move(kept);
        }
        if (result.panel.n() < before.size()) {
            result.diagnostics.push_back({"", "warning", "",
                                          "liquidity filter removed " + std::to_string(before.size() - result.panel.n()) +
                                              " of " + std::to_string(before.size()) + " instruments"});
        }
    } else {
        result.panel = std::move(input.panel);
    }

    if (result.panel.n() < 3 || result.panel.length() < 2) {
        throw DataError("panel has " + std::to_string(result.panel.n()) + " usable instruments after filtering");
    }

    struct Job {
        SeriesKind kind;
        Period period;
        std::string label;
    };
    std::vector<Job> jobs;
    for (auto kind : config.kinds) {
        for (std::size_t p = 0; p < config.sub_periods.size(); ++p) {
            jobs.push_back({kind, config.sub_periods[p], make_period_label(p, config.sub_periods[p])});
        }
        if (config.include_full_period) {
            jobs.push_back({kind, {result.panel.dates.front(), result.panel.dates.back()}, "full"});
        }
    }

    result.cells.resize(jobs.size());
    std::vector<std::vector<Diagnostic>> notes(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
            const auto& job = jobs[k];
            const auto id = std::string(to_string(job.kind)) + "/" + job.label;
            try {
                result.cells[k] = run_cell(result.panel, job.kind, job.period, job.label, config, stage, notes[k]);
            } catch (const std::exception& e) {
                std::string category = "internal";
                if (dynamic_cast<const DataError*>(&e)) category = "data";
                else if (dynamic_cast<const NumericalError*>(&e)) category = "numerical";
                else if (dynamic_cast<const UsageError*>(&e)) category = "usage";
                auto& cell = result.cells[k];
                cell = CellResult{};
                cell.kind = job.kind;
                cell.period = job.period;
                cell.period_label = job.label;
                notes[k].push_back({id, "error", category, e.what()});
            }
        }
    };
    std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, jobs.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& n : notes) result.diagnostics.insert(result.diagnostics.end(), n.begin(), n.end());
    return result;
}

inline PipelineResult run_pipeline(const PipelineConfig& config, Stage stage = Stage::Full) {
    validate(config);
    return run_pipeline(config, load_input(config), stage);
}

// ------------------------------------------------------------------ artifacts

using FileSet = std::map<std::string, std::string>; // relative path -> content

namespace detail {

inline std::string eigenvalues_csv(const CellResult& cell) {
    std::ostringstream out;
    out << "index,lambda,mode\n";
    const auto& ev = cell.spectrum.eigenvalues;
    for (Eigen::Index a = 0; a < ev.size(); ++a) {
        const char* mode = a == 0 ? "market" : (ev(a) > cell.modes->threshold ? "sector" : "random");
        out << a << ',' << text::format_double(ev(a)) << ',' << mode << '\n';
    }
    return out.str();
}

inline std::string node_table_csv(const CellResult& cell) {
    std::ostringstream out;
    out << "ticker,sector,sh,module,pagerank,mean_corr\n";
    for (std::size_t i = 0; i < cell.tickers.size(); ++i) {
        out << text::csv_escape(cell.tickers[i]) << ',' << cell.labels[i].code << ',' << (cell.labels[i].sh ? 1 : 0)
            << ',' << cell.partition->assignment[i] << ',' << text::format_double(cell.partition->pagerank[i]) << ','
            << text::format_double(cell.mean_corr[i]) << '\n';
    }
    return out.str();
}

inline void community_rows(std::ostream& out, const CellResult& cell, const ProminenceRule& rule) {
    for (const auto& c : cell.report) {
        out << to_string(cell.kind) << ',' << cell.period_label << ',' << c.id << ','
            << text::csv_escape(format_roster(c.roster_top, rule)) << ','
            << text::csv_escape(format_roster(c.roster_all, rule)) << ',' << c.n_stock << ','
            << text::format_fixed(c.sum_mean_corr) << ',' << text::format_fixed(c.sum_pagerank) << '\n';
    }
}

inline nlohmann::json roster_json(const SectorRoster& r) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [code, count] : r.gics) j[code] = count;
    if (r.sh) j[kNewShanghaiCode] = r.sh;
    return j;
}

inline nlohmann::json communities_json(const CellResult& cell, const ProminenceRule& rule) {
    const auto& p = *cell.partition;
    const auto report = community_report(p, *cell.graph, cell.labels, p.module_count());
    nlohmann::json modules = nlohmann::json::array();
    for (const auto& c : report) {
        nlohmann::json members = nlohmann::json::array(), top = nlohmann::json::array();
        for (auto m : c.members) members.push_back(cell.tickers[m]);
        for (auto m : c.top_members) top.push_back(cell.tickers[m]);
        modules.push_back({{"id", c.id},
                           {"n_stock", c.n_stock},
                           {"sum_pagerank", c.sum_pagerank},
                           {"sum_mean_corr", c.sum_mean_corr},
                           {"roster_top", format_roster(c.roster_top, rule)},
                           {"roster_total", format_roster(c.roster_all, rule)},
                           {"sectors_top", roster_json(c.roster_top)},
                           {"sectors_total", roster_json(c.roster_all)},
                           {"top_members", top},
                           {"members", members}});
    }
    return {{"kind", to_string(cell.kind)},
            {"period", cell.period_label},
            {"codelength_bits", p.codelength},
            {"module_count", p.module_count()},
            {"modules", modules}};
}

inline std::string summary_row(const CellResult& cell) {
    const auto& s = *cell.summary;
    std::ostringstream out;
    out << to_string(cell.kind) << ',' << cell.period_label << ',' << format_date(cell.period.start) << ','
        << format_date(cell.period.end) << ',' << cell.tickers.size() << ',' << cell.length << ','
        << text::format_double(cell.spectrum.q) << ',' << text::format_double(s.lambda_largest) << ','
        << text::format_double(s.lambda_smallest) << ',' << text::format_double(s.lambda_max) << ','
        << text::format_double(s.lambda_min) << ',' << s.sector_count << '\n';
    return out.str();
}

} // namespace detail

/// Files of one successful cell under cells/<kind>/<period>/, limited to the stages it ran.
inline void add_cell_files(FileSet& files, const CellResult& cell, const PipelineConfig& config) {
    const std::string dir = "cells/" + cell.id() + "/";
    files[dir + "correlation.csv"] = matrix_csv_string(cell.spectrum.corr);
    files[dir + "correlation.bin"] = matrix_binary_string(cell.spectrum.corr);
    {
        std::ostringstream labels;
        labels << "index,ticker,sector,sh\n";
        for (std::size_t i = 0; i < cell.tickers.size(); ++i) {
            labels << i << ',' << text::csv_escape(cell.tickers[i]) << ',' << cell.labels[i].code << ','
                   << (cell.labels[i].sh ? 1 : 0) << '\n';
        }
        files[dir + "nodes.csv"] = labels.str();
    }
    if (!cell.modes) return;
    files[dir + "eigenvalues.csv"] = detail::eigenvalues_csv(cell);
    files[dir + "mode_market.bin"] = matrix_binary_string(cell.modes->market);
    files[dir + "mode_sector.bin"] = matrix_binary_string(cell.modes->sector);
    files[dir + "mode_random.bin"] = matrix_binary_string(cell.modes->random);
    files[dir + "corr_pdf.csv"] = correlation_distribution_csv(cell.spectrum, *cell.modes);
    files[dir + "eigen_pdf.csv"] = eigenvalue_distribution_csv(cell.spectrum);
    if (!cell.graph) return;
    {
        std::ostringstream edges, graphml;
        write_edge_list(edges, *cell.graph, cell.tickers);
        write_graphml(graphml, *cell.graph, cell.tickers, cell.labels);
        files[dir + "pmfg_edges.csv"] = edges.str();
        files[dir + "pmfg.graphml"] = graphml.str();
    }
    if (!cell.partition) return;
    files[dir + "communities_nodes.csv"] = detail::node_table_csv(cell);
    files[dir + "communities.json"] = detail::communities_json(cell, config.prominence).dump(2) + "\n";
    {
        std::ostringstream table;
        table << "kind,period,community,top50,total,n_stock,sum_mean_corr,sum_pagerank\n";
        detail::community_rows(table, cell, config.prominence);
        files[dir + "communities.csv"] = table.str();
    }
    if (cell.comparison.empty()) return;
    std::ostringstream sectors;
    write_sector_table_header(sectors);
    write_sector_table_rows(sectors, cell.kind, cell.comparison);
    files[dir + "sector_metrics.csv"] = sectors.str();
}

/// All bundle files except the manifest: per-cell outputs, report tables, diagnostics, config.
inline FileSet bundle_files(const PipelineResult& result) {
    const auto& config = result.config;
    FileSet files;
    for (const auto& cell : result.cells)
        if (cell.ok) add_cell_files(files, cell, config);

    {
        std::ostringstream t1;
        t1 << "name,code,n_stocks,n_sh\n";
        std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
        std::size_t sh_total = 0;
        for (const auto& t : result.panel.tickers) {
            const auto& l = result.panel.sectors.at(t);
            ++counts[l.code].first;
            if (l.sh) {
                ++counts[l.code].second;
                ++sh_total;
            }
        }
        for (const auto& code : config.schema.sector_codes) {
            std::string name = code;
            for (const auto& g : kGicsSectors)
                if (code == g.code) name = g.name;
            const auto it = counts.find(code);
            const auto n = it == counts.end() ? std::pair<std::size_t, std::size_t>{0, 0} : it->second;
            t1 << text::csv_escape(name) << ',' << code << ',' << n.first << ',' << n.second << '\n';
        }
        t1 << "New Shanghai," << kNewShanghaiCode << ',' << sh_total << ',' << sh_total << '\n';
        files["sectors.csv"] = t1.str();
    }

    std::ostringstream t2, t3, t4, t5;
    const char* community_header = "kind,period,community,top50,total,n_stock,sum_mean_corr,sum_pagerank\n";
    t2 << community_header;
    t5 << community_header;
    t3 << "period,";
    write_sector_table_header(t3);
    t4 << "kind,period,start,end,n,length,q,lambda_largest,lambda_smallest,lambda_max,lambda_min,m\n";
    nlohmann::json communities = nlohmann::json::array();
    for (const auto& cell : result.cells) {
        if (!cell.ok) continue;
        if (cell.summary) t4 << detail::summary_row(cell);
        if (cell.partition) {
            detail::community_rows(cell.period_label == "full" ? t2 : t5, cell, config.prominence);
            communities.push_back(detail::communities_json(cell, config.prominence));
        }
        if (!cell.comparison.empty()) {
            std::ostringstream rows;
            write_sector_table_rows(rows, cell.kind, cell.comparison);
            std::istringstream lines(rows.str());
            for (std::string line; std::getline(lines, line);) t3 << cell.period_label << ',' << line << '\n';
        }
    }
    if (result.stage >= Stage::Decompose) files["eigenvalue_summary.csv"] = t4.str();
    if (result.stage >= Stage::Communities) {
        files["communities_full.csv"] = t2.str();
        files["communities_windows.csv"] = t5.str();
        files["communities.json"] = communities.dump(2) + "\n";
    }
    if (result.stage >= Stage::Full) files["sector_correlations.csv"] = t3.str();

    nlohmann::json diag = nlohmann::json::array();
    for (const auto& d : result.diagnostics) {
        diag.push_back({{"cell", d.cell}, {"severity", d.severity}, {"category", d.category}, {"message", d.message}});
    }
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : result.cells) cells.push_back({{"cell", c.id()}, {"ok", c.ok}});
    files["diagnostics.json"] = nlohmann::json{{"cells", cells}, {"messages", diag}}.dump(2) + "\n";

    auto cfg = to_json(config);
    cfg.erase("output_dir");
    cfg.erase("threads");
    files["config.json"] = cfg.dump(2) + "\n";
    return files;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::json library_versions() {
    return {{"sectornet", SECTORNET_VERSION},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"boost", std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
                          std::to_string(BOOST_VERSION % 100)},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

/// Writes `files` under `dir` (single writer) and a manifest.json listing each with its SHA-256.
inline nlohmann::json write_bundle(const std::filesystem::path& dir, const FileSet& files, const PipelineConfig& config) {
    std::filesystem::create_directories(dir);
    nlohmann::json listed = nlohmann::json::array();
    for (const auto& [rel, content] : files) {
        const auto path = dir / rel;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("cannot write " + path.string());
        listed.push_back({{"path", rel}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }
    nlohmann::json manifest{{"format", "sectornet-bundle"},
                            {"version", 1},
                            {"generated_at", utc_timestamp()},
                            {"config_sha256", config_hash(config)},
                            {"libraries", library_versions()},
                            {"files", listed}};
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
    if (!out) throw DataError("cannot write manifest in " + dir.string());
    return manifest;
}

} // namespace sectornet

#endif // SECTORNET_PIPELINE_HPP_
