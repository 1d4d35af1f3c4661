// sectornet command-line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sectornet/sectornet.hpp"

namespace sn = sectornet;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string method;
    std::string kind;
    std::optional<std::size_t> threads;
};

struct InputOptions {
    std::string input; // long CSV or panel directory
    bool synthetic = false;
    std::string period; // "START,END" replaces the period list
    bool full_only = false;
    bool no_filter = false;
};

struct SynthOptions {
    sn::SyntheticSpec spec;
    std::string csv; // also write a long CSV here
};

sn::PipelineConfig resolve_config(const GlobalOptions& g) {
    sn::PipelineConfig c = g.config_path.empty() ? sn::PipelineConfig{} : sn::load_config(g.config_path);
    sn::apply_environment(c);
    if (g.seed) c.seed = *g.seed;
    if (!g.out.empty()) c.output_dir = g.out;
    if (!g.method.empty()) c.method = sn::parse_pmfg_method(g.method);
    if (!g.kind.empty()) {
        if (g.kind == "both") c.kinds = {sn::SeriesKind::Return, sn::SeriesKind::Turnover};
        else c.kinds = {sn::parse_series_kind(g.kind)};
    }
    if (g.threads) c.threads = *g.threads;
    return c;
}

void apply_input(sn::PipelineConfig& c, const InputOptions& in) {
    if (!in.input.empty()) {
        c.input = in.input;
        c.synthetic.reset();
    } else if (in.synthetic && !c.synthetic) {
        c.synthetic = sn::SyntheticSpec{};
    }
    if (!in.period.empty()) {
        const auto comma = in.period.find(',');
        const auto a = sn::parse_date(in.period.substr(0, comma));
        const auto b = comma == std::string::npos ? std::nullopt : sn::parse_date(in.period.substr(comma + 1));
        if (!a || !b) throw sn::UsageError("--period expects START,END as ISO dates");
        c.sub_periods = {{*a, *b}};
        c.include_full_period = false;
    }
    if (in.full_only) {
        c.sub_periods.clear();
        c.include_full_period = true;
    }
    if (in.no_filter) c.apply_liquidity_filter = false;
}

void report_cells(const sn::PipelineResult& r, const std::string& dir) {
    std::size_t ok = 0;
    for (const auto& c : r.cells) ok += c.ok;
    for (const auto& d : r.diagnostics) {
        std::cerr << d.severity << (d.cell.empty() ? "" : " [" + d.cell + "]") << ": " << d.message << '\n';
    }
    std::cout << ok << " of " << r.cells.size() << " cells completed; bundle written to " << dir << '\n';
}

// Nonzero when every cell failed; the code follows the first failure's category.
int cells_exit(const sn::PipelineResult& r) {
    for (const auto& c : r.cells)
        if (c.ok) return kOk;
    for (const auto& d : r.diagnostics) {
        if (d.severity != "error") continue;
        if (d.category == "numerical") return kNumerical;
        if (d.category == "usage") return kUsage;
        return kData;
    }
    return kData;
}

int run_stage(const GlobalOptions& g, const InputOptions& in, sn::Stage stage, bool tables_only) {
    auto config = resolve_config(g);
    apply_input(config, in);
    const auto result = sn::run_pipeline(config, stage);
    auto files = sn::bundle_files(result);
    if (tables_only) {
        for (auto it = files.begin(); it != files.end();) {
            it = it->first.rfind("cells/", 0) == 0 ? files.erase(it) : std::next(it);
        }
    }
    sn::write_bundle(config.output_dir, files, config);
    report_cells(result, config.output_dir);
    return cells_exit(result);
}

int run_ingest(const GlobalOptions& g, const InputOptions& in) {
    auto config = resolve_config(g);
    apply_input(config, in);
    if (config.input.empty()) throw sn::UsageError("ingest needs --input");
    auto loaded = sn::load_input(config);
    const auto before = loaded.panel.n();
    if (config.apply_liquidity_filter) loaded.panel = sn::filter_liquidity(loaded.panel, config.liquidity);
    sn::write_panel_dir(config.output_dir, loaded.panel);
    std::cout << loaded.panel.n() << " of " << before << " instruments, " << loaded.panel.length()
              << " dates; panel written to " << config.output_dir << '\n';
    return kOk;
}

int run_synth(const GlobalOptions& g, SynthOptions s) {
    auto config = resolve_config(g);
    if (config.synthetic && s.spec == sn::SyntheticSpec{}) s.spec = *config.synthetic;
    if (g.seed) s.spec.seed = *g.seed;
    const auto syn = sn::generate_synthetic(s.spec);
    sn::write_panel_dir(config.output_dir, syn.panel);
    std::ofstream planted(std::filesystem::path(config.output_dir) / "planted.csv");
    planted << "ticker,group\n";
    for (std::size_t i = 0; i < syn.sector_of.size(); ++i) planted << syn.panel.tickers[i] << ',' << syn.sector_of[i] << '\n';
    if (!s.csv.empty()) {
        std::ofstream out(s.csv);
        if (!out) throw sn::DataError("cannot write " + s.csv);
        sn::write_panel_csv(out, syn.panel);
    }
    std::cout << syn.panel.n() << " stocks x " << syn.panel.length() << " days written to " << config.output_dir
              << '\n';
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sector structure of stock correlation networks"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "community detection seed (synthetic seed for synth)");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--method", g.method, "PMFG ordering")->check(CLI::IsMember({"distance", "absolute"}));
    app.add_option("--kind", g.kind, "series kind")->check(CLI::IsMember({"return", "turnover", "both"}));
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)");

    InputOptions in;
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", in.input, "long CSV file or panel directory");
        sub->add_option("--panel", in.input, "panel directory written by ingest or synth");
        sub->add_flag("--synthetic", in.synthetic, "use the synthetic spec from the config (or defaults)");
        sub->add_option("--period", in.period, "single window START,END instead of the configured periods");
        sub->add_flag("--full-only", in.full_only, "analyse the full period only");
        sub->add_flag("--no-filter", in.no_filter, "skip the liquidity filter");
    };

    auto* ingest = app.add_subcommand("ingest", "parse a long CSV, filter illiquid stocks, write a panel directory");
    add_input(ingest);

    SynthOptions synth;
    auto* syn = app.add_subcommand("synth", "generate a planted-sector synthetic panel");
    syn->add_option("--n-stocks", synth.spec.n_stocks);
    syn->add_option("--n-days", synth.spec.n_days);
    syn->add_option("--n-sectors", synth.spec.n_sectors);
    syn->add_option("--market-beta", synth.spec.market_beta);
    syn->add_option("--sector-beta", synth.spec.sector_beta);
    syn->add_option("--noise-sigma", synth.spec.noise_sigma);
    syn->add_option("--csv", synth.csv, "also write the panel as a long CSV");

    struct StageCommand {
        const char* name;
        const char* help;
        sn::Stage stage;
        bool tables_only;
    };
    const StageCommand stages[] = {
        {"correlate", "Pearson correlation matrices", sn::Stage::Correlate, false},
        {"decompose", "eigen-spectrum and market/sector/random modes", sn::Stage::Decompose, false},
        {"pmfg", "planar maximally filtered graphs of the sector mode", sn::Stage::Pmfg, false},
        {"communities", "map-equation communities on the PMFG", sn::Stage::Communities, false},
        {"sectors", "in-sector versus between-sector correlations", sn::Stage::Full, false},
        {"report", "summary tables only", sn::Stage::Full, true},
        {"run", "full pipeline with every artifact", sn::Stage::Full, false},
    };
    std::vector<std::pair<CLI::App*, const StageCommand*>> stage_apps;
    for (const auto& s : stages) {
        auto* sub = app.add_subcommand(s.name, s.help);
        add_input(sub);
        stage_apps.emplace_back(sub, &s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (ingest->parsed()) return run_ingest(g, in);
        if (syn->parsed()) return run_synth(g, synth);
        for (const auto& [sub, s] : stage_apps)
            if (sub->parsed()) return run_stage(g, in, s->stage, s->tables_only);
    } catch (const sn::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const sn::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const sn::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}
