#ifndef SECTORNET_PANEL_IO_HPP_
#define SECTORNET_PANEL_IO_HPP_

#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "sectornet/ingest.hpp"
#include "sectornet/matrix_io.hpp"

namespace sectornet {

// A serialized panel is a directory:
//   meta.json                 tickers, dates, sector map
//   prices.csv volumes.csv shares_outstanding.csv missing.csv   N rows x L columns
inline nlohmann::json panel_meta(const MarketPanel& panel) {
    nlohmann::json meta;
    meta["format"] = "sectornet-panel";
    meta["version"] = 1;
    meta["tickers"] = panel.tickers;
    auto& dates = meta["dates"] = nlohmann::json::array();
    for (const auto& d : panel.dates) dates.push_back(format_date(d));
    auto& sectors = meta["sectors"] = nlohmann::json::object();
    for (const auto& [ticker, label] : panel.sectors) sectors[ticker] = {{"code", label.code}, {"sh", label.sh}};
    return meta;
}

inline Eigen::MatrixXd missing_as_matrix(const MarketPanel& panel) {
    return panel.missing.cast<double>().matrix();
}

inline void write_panel_dir(const std::filesystem::path& dir, const MarketPanel& panel) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "meta.json");
        out << panel_meta(panel).dump(2) << '\n';
    }
    auto write = [&](const char* name, const Eigen::MatrixXd& m) {
        std::ofstream out(dir / name);
        write_matrix_csv(out, m);
        if (!out) throw DataError(std::string("failed writing ") + name);
    };
    write("prices.csv", panel.prices);
    write("volumes.csv", panel.volumes);
    write("shares_outstanding.csv", panel.shares_outstanding);
    write("missing.csv", missing_as_matrix(panel));
}

inline MarketPanel read_panel_dir(const std::filesystem::path& dir) {
    std::ifstream meta_in(dir / "meta.json");
    if (!meta_in) throw DataError("cannot open " + (dir / "meta.json").string());
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(meta_in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("meta.json: ") + e.what());
    }
    MarketPanel panel;
    try {
        panel.tickers = meta.at("tickers").get<std::vector<std::string>>();
        for (const auto& d : meta.at("dates")) {
            const auto parsed = parse_date(d.get<std::string>());
            if (!parsed) throw DataError("meta.json: malformed date " + d.dump());
            panel.dates.push_back(*parsed);
        }
        for (const auto& [ticker, label] : meta.at("sectors").items()) {
            panel.sectors[ticker] = SectorLabel{label.at("code").get<std::string>(), label.at("sh").get<bool>()};
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("meta.json: ") + e.what());
    }
    auto read = [&](const char* name) {
        std::ifstream in(dir / name);
        if (!in) throw DataError("cannot open " + (dir / name).string());
        auto m = read_matrix_csv(in);
        if (m.rows() != static_cast<Eigen::Index>(panel.tickers.size()) ||
            m.cols() != static_cast<Eigen::Index>(panel.dates.size())) {
            if (!(m.size() == 0 && (panel.tickers.empty() || panel.dates.empty())))
                throw DataError(std::string(name) + " does not match meta.json dimensions");
        }
        return m;
    };
    panel.prices = read("prices.csv");
    panel.volumes = read("volumes.csv");
    panel.shares_outstanding = read("shares_outstanding.csv");
    panel.missing = read("missing.csv").array() != 0.0;
    detail::check_panel_shape(panel);
    return panel;
}

} // namespace sectornet

#endif // SECTORNET_PANEL_IO_HPP_
