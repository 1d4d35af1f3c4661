#ifndef SECTORNET_INGEST_HPP_
#define SECTORNET_INGEST_HPP_

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sectornet/date.hpp"
#include "sectornet/errors.hpp"
#include "sectornet/text.hpp"

namespace sectornet {

using BoolMatrix = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct SectorInfo {
    const char* code;
    const char* name;
};

// The nine GICS sectors used for the Shanghai A-share universe, in table order.
inline constexpr SectorInfo kGicsSectors[] = {
    {"EN", "Energy"},          {"MA", "Materials"},   {"IN", "Industrials"},
    {"CG", "Consumer goods"},  {"HC", "Health care"}, {"BA", "Banks"},
    {"RE", "Real estate"},     {"IT", "Information technology"},
    {"UT", "Utilities"},
};

inline constexpr const char* kNewShanghaiCode = "SH";

inline std::vector<std::string> default_sector_codes() {
    std::vector<std::string> codes;
    for (const auto& s : kGicsSectors) codes.emplace_back(s.code);
    return codes;
}

/// GICS code plus the independent "New Shanghai" overlay flag.
struct SectorLabel {
    std::string code;
    bool sh = false;

    friend bool operator==(const SectorLabel&, const SectorLabel&) = default;
};

/// Header names of the long-format input CSV and the accepted sector taxonomy.
struct ColumnSchema {
    std::string date = "date";
    std::string ticker = "ticker";
    std::string close = "close";
    std::string volume = "volume";
    std::string shares_outstanding = "shares_outstanding";
    std::string sector = "sector";
    std::string sh_flag = "sh_flag";
    std::vector<std::string> sector_codes = default_sector_codes();

    friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

/// Calendar-aligned daily panel. Rows are instruments, columns trading dates.
/// Missing cells hold 0 in every matrix and are marked in `missing`.
struct MarketPanel {
    std::vector<std::string> tickers;
    std::vector<Date> dates;
    Eigen::MatrixXd prices;
    Eigen::MatrixXd volumes;
    Eigen::MatrixXd shares_outstanding;
    BoolMatrix missing;
    std::map<std::string, SectorLabel> sectors;

    std::size_t n() const { return tickers.size(); }
    std::size_t length() const { return dates.size(); }

    std::vector<std::string> sector_codes() const {
        std::vector<std::string> codes;
        codes.reserve(tickers.size());
        for (const auto& t : tickers) codes.push_back(sectors.at(t).code);
        return codes;
    }

    friend bool operator==(const MarketPanel& a, const MarketPanel& b) {
        return a.tickers == b.tickers && a.dates == b.dates && a.prices == b.prices &&
               a.volumes == b.volumes && a.shares_outstanding == b.shares_outstanding &&
               (a.missing == b.missing).all() && a.sectors == b.sectors;
    }
};

enum class SeriesKind { Return, Turnover };

inline const char* to_string(SeriesKind kind) {
    return kind == SeriesKind::Return ? "return" : "turnover";
}

inline SeriesKind parse_series_kind(std::string_view s) {
    if (s == "return") return SeriesKind::Return;
    if (s == "turnover") return SeriesKind::Turnover;
    throw UsageError("unknown series kind '" + std::string(s) + "' (expected return|turnover)");
}

/// Derived per-instrument series. `flagged` marks cells filled by the gap policy.
/// For returns, `dates[t]` is the closing date of the interval ending at t.
struct SeriesPanel {
    SeriesKind kind = SeriesKind::Return;
    Eigen::MatrixXd values;
    BoolMatrix flagged;
    std::vector<std::string> tickers;
    std::vector<Date> dates;

    std::size_t n() const { return tickers.size(); }
    std::size_t length() const { return dates.size(); }
};

namespace detail {

inline void check_panel_shape(const MarketPanel& p) {
    const auto n = static_cast<Eigen::Index>(p.tickers.size());
    const auto l = static_cast<Eigen::Index>(p.dates.size());
    auto same = [&](Eigen::Index r, Eigen::Index c) { return r == n && c == l; };
    if (!same(p.prices.rows(), p.prices.cols()) || !same(p.volumes.rows(), p.volumes.cols()) ||
        !same(p.shares_outstanding.rows(), p.shares_outstanding.cols()) ||
        !same(p.missing.rows(), p.missing.cols())) {
        throw DataError("panel matrices do not share N x L dimensions");
    }
    for (std::size_t t = 1; t < p.dates.size(); ++t) {
        if (!(p.dates[t - 1] < p.dates[t])) throw DataError("panel dates are not strictly increasing");
    }
    for (const auto& t : p.tickers) {
        if (!p.sectors.contains(t)) throw DataError("ticker '" + t + "' has no sector entry");
    }
}

struct RawRecord {
    double close;
    double volume;
    double shares;
};

}

/// Reads the long-format CSV (one row per ticker and date) into an aligned panel.
/// The calendar is the union of all observed dates; absent cells are marked missing.
inline MarketPanel parse_panel(std::istream& in, const ColumnSchema& schema = {}) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!text::trim(line).empty()) {
            header = text::split_csv(line);
            break;
        }
    }
    if (header.empty()) throw DataError("input CSV is empty");

    auto column = [&](const std::string& name, bool required) -> int {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            if (required) throw DataError("header is missing required column '" + name + "'");
            return -1;
        }
        return static_cast<int>(it - header.begin());
    };
    const int c_date = column(schema.date, true);
    const int c_ticker = column(schema.ticker, true);
    const int c_close = column(schema.close, true);
    const int c_volume = column(schema.volume, true);
    const int c_shares = column(schema.shares_outstanding, true);
    const int c_sector = column(schema.sector, true);
    const int c_sh = column(schema.sh_flag, false);

    const std::set<std::string> allowed(schema.sector_codes.begin(), schema.sector_codes.end());
    std::map<std::string, std::map<Date, detail::RawRecord>> records;
    std::map<std::string, SectorLabel> sectors;
    std::set<Date> calendar;

    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto fields = text::split_csv(line);
        const auto where = "line " + std::to_string(line_no) + ": ";
        if (fields.size() != header.size()) {
            throw DataError(where + "expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        const auto date = parse_date(fields[c_date]);
        if (!date) throw DataError(where + "malformed date '" + fields[c_date] + "'");
        const std::string& ticker = fields[c_ticker];
        if (ticker.empty()) throw DataError(where + "empty ticker");

        const auto close = text::parse_double(fields[c_close]);
        const auto volume = text::parse_double(fields[c_volume]);
        const auto shares = text::parse_double(fields[c_shares]);
        if (!close || !volume || !shares) throw DataError(where + "malformed numeric field");
        if (!std::isfinite(*close) || *close <= 0.0) {
            throw DataError(where + "close must be > 0 (ticker " + ticker + ")");
        }
        if (!std::isfinite(*volume) || *volume < 0.0 || std::floor(*volume) != *volume) {
            throw DataError(where + "volume must be a non-negative integer (ticker " + ticker + ")");
        }
        if (!std::isfinite(*shares) || *shares <= 0.0 || std::floor(*shares) != *shares) {
            throw DataError(where + "shares_outstanding must be a positive integer (ticker " + ticker + ")");
        }

        const std::string& code = fields[c_sector];
        if (!allowed.contains(code)) {
            throw DataError("unknown sector code '" + code + "' for ticker " + ticker + " (line " +
                            std::to_string(line_no) + ")");
        }
        bool sh = false;
        if (c_sh >= 0) {
            const auto& f = fields[c_sh];
            if (f == "1") sh = true;
            else if (f != "0" && !f.empty()) throw DataError(where + "sh_flag must be 0 or 1");
        }
        SectorLabel label{code, sh};
        auto [sit, fresh] = sectors.emplace(ticker, label);
        if (!fresh && !(sit->second == label)) {
            throw DataError(where + "inconsistent sector for ticker " + ticker);
        }

        auto& series = records[ticker];
        if (!series.emplace(*date, detail::RawRecord{*close, *volume, *shares}).second) {
            throw DataError(where + "duplicate record for (" + ticker + ", " + format_date(*date) + ")");
        }
        calendar.insert(*date);
    }
    if (records.empty()) throw DataError("input CSV has no data rows");

    MarketPanel panel;
    panel.dates.assign(calendar.begin(), calendar.end());
    for (const auto& [ticker, _] : records) panel.tickers.push_back(ticker);
    panel.sectors = std::move(sectors);

    const auto n = static_cast<Eigen::Index>(panel.tickers.size());
    const auto l = static_cast<Eigen::Index>(panel.dates.size());
    panel.prices = Eigen::MatrixXd::Zero(n, l);
    panel.volumes = Eigen::MatrixXd::Zero(n, l);
    panel.shares_outstanding = Eigen::MatrixXd::Zero(n, l);
    panel.missing = BoolMatrix::Constant(n, l, true);

    std::map<Date, Eigen::Index> column_of;
    for (Eigen::Index t = 0; t < l; ++t) column_of.emplace(panel.dates[t], t);
    Eigen::Index row = 0;
    for (const auto& [ticker, series] : records) {
        for (const auto& [date, rec] : series) {
            const auto t = column_of.at(date);
            panel.prices(row, t) = rec.close;
            panel.volumes(row, t) = rec.volume;
            panel.shares_outstanding(row, t) = rec.shares;
            panel.missing(row, t) = false;
        }
        ++row;
    }
    return panel;
}

/// Writes the panel back out in the long-format input layout (missing cells omitted).
inline void write_panel_csv(std::ostream& out, const MarketPanel& panel, const ColumnSchema& schema = {}) {
    out << schema.date << ',' << schema.ticker << ',' << schema.close << ',' << schema.volume << ','
        << schema.shares_outstanding << ',' << schema.sector << ',' << schema.sh_flag << '\n';
    for (std::size_t t = 0; t < panel.length(); ++t) {
        const auto date = format_date(panel.dates[t]);
        for (std::size_t i = 0; i < panel.n(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            const auto c = static_cast<Eigen::Index>(t);
            if (panel.missing(r, c)) continue;
            const auto& label = panel.sectors.at(panel.tickers[i]);
            out << date << ',' << text::csv_escape(panel.tickers[i]) << ','
                << text::format_double(panel.prices(r, c)) << ','
                << text::format_double(panel.volumes(r, c)) << ','
                << text::format_double(panel.shares_outstanding(r, c)) << ',' << label.code << ','
                << (label.sh ? 1 : 0) << '\n';
        }
    }
}

struct LiquidityFilter {
    std::size_t max_consecutive_gap = 10;
    std::size_t max_total_gap = 30;
};

struct GapStats {
    std::size_t longest_run = 0;
    std::size_t total = 0;
};

inline GapStats gap_stats(const MarketPanel& panel, std::size_t row) {
    GapStats stats;
    std::size_t run = 0;
    for (Eigen::Index t = 0; t < panel.missing.cols(); ++t) {
        if (panel.missing(static_cast<Eigen::Index>(row), t)) {
            ++run;
            ++stats.total;
            stats.longest_run = std::max(stats.longest_run, run);
        } else {
            run = 0;
        }
    }
    return stats;
}

namespace detail {

inline MarketPanel select(const MarketPanel& panel, const std::vector<Eigen::Index>& rows,
                          const std::vector<Eigen::Index>& cols) {
    MarketPanel out;
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto l = static_cast<Eigen::Index>(cols.size());
    out.prices.resize(n, l);
    out.volumes.resize(n, l);
    out.shares_outstanding.resize(n, l);
    out.missing.resize(n, l);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& ticker = panel.tickers[static_cast<std::size_t>(rows[r])];
        out.tickers.push_back(ticker);
        out.sectors.emplace(ticker, panel.sectors.at(ticker));
        for (Eigen::Index c = 0; c < l; ++c) {
            out.prices(r, c) = panel.prices(rows[r], cols[c]);
            out.volumes(r, c) = panel.volumes(rows[r], cols[c]);
            out.shares_outstanding(r, c) = panel.shares_outstanding(rows[r], cols[c]);
            out.missing(r, c) = panel.missing(rows[r], cols[c]);
        }
    }
    for (auto c : cols) out.dates.push_back(panel.dates[static_cast<std::size_t>(c)]);
    return out;
}

}

/// Keeps instruments whose suspensions never run longer than `max_consecutive_gap`
/// days and total at most `max_total_gap` days. Dates left with no observation are dropped.
inline MarketPanel filter_liquidity(const MarketPanel& panel, const LiquidityFilter& filter = {}) {
    detail::check_panel_shape(panel);
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < panel.n(); ++i) {
        const auto stats = gap_stats(panel, i);
        if (stats.longest_run <= filter.max_consecutive_gap && stats.total <= filter.max_total_gap) {
            rows.push_back(static_cast<Eigen::Index>(i));
        }
    }
    if (rows.size() < 3) {
        throw DataError("liquidity filter leaves " + std::to_string(rows.size()) +
                        " instruments; at least 3 are required");
    }
    std::vector<Eigen::Index> cols;
    for (Eigen::Index t = 0; t < panel.missing.cols(); ++t) {
        bool observed = false;
        for (auto r : rows) observed = observed || !panel.missing(r, t);
        if (observed) cols.push_back(t);
    }
    return detail::select(panel, rows, cols);
}

/// Log returns ln(p[t+1]/p[t]). A transition with a missing endpoint is set to 0 and flagged.
inline SeriesPanel compute_returns(const MarketPanel& panel) {
    detail::check_panel_shape(panel);
    const auto n = panel.prices.rows();
    const auto l = panel.prices.cols();
    if (l < 2) throw DataError("return series need at least 2 dates");

    SeriesPanel out;
    out.kind = SeriesKind::Return;
    out.tickers = panel.tickers;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.values = Eigen::MatrixXd::Zero(n, l - 1);
    out.flagged = BoolMatrix::Constant(n, l - 1, false);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto observed = (!panel.missing.row(i)).count();
        if (observed < 2) {
            throw DataError("ticker " + panel.tickers[static_cast<std::size_t>(i)] +
                            " has fewer than 2 price observations");
        }
        for (Eigen::Index t = 0; t + 1 < l; ++t) {
            if (panel.missing(i, t) || panel.missing(i, t + 1)) {
                out.flagged(i, t) = true;
                continue;
            }
            const double p0 = panel.prices(i, t);
            const double p1 = panel.prices(i, t + 1);
            if (!(p0 > 0.0) || !(p1 > 0.0)) {
                throw DataError("non-positive price for ticker " + panel.tickers[static_cast<std::size_t>(i)]);
            }
            out.values(i, t) = std::log(p1 / p0);
        }
    }
    return out;
}

/// Turnover rate volume / shares outstanding. Missing cells are set to 0 and flagged.
inline SeriesPanel compute_turnover(const MarketPanel& panel) {
    detail::check_panel_shape(panel);
    const auto n = panel.prices.rows();
    const auto l = panel.prices.cols();

    SeriesPanel out;
    out.kind = SeriesKind::Turnover;
    out.tickers = panel.tickers;
    out.dates = panel.dates;
    out.values = Eigen::MatrixXd::Zero(n, l);
    out.flagged = BoolMatrix::Constant(n, l, false);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index t = 0; t < l; ++t) {
            if (panel.missing(i, t)) {
                out.flagged(i, t) = true;
                continue;
            }
            const double shares = panel.shares_outstanding(i, t);
            if (!(shares > 0.0)) {
                throw DataError("zero shares outstanding for ticker " +
                                panel.tickers[static_cast<std::size_t>(i)] + " on " +
                                format_date(panel.dates[static_cast<std::size_t>(t)]));
            }
            out.values(i, t) = panel.volumes(i, t) / shares;
        }
    }
    return out;
}

inline SeriesPanel compute_series(const MarketPanel& panel, SeriesKind kind) {
    return kind == SeriesKind::Return ? compute_returns(panel) : compute_turnover(panel);
}

namespace detail {

inline std::vector<Eigen::Index> date_range(const std::vector<Date>& dates, const Date& start, const Date& end) {
    if (end < start) throw UsageError("period end " + format_date(end) + " precedes start " + format_date(start));
    std::vector<Eigen::Index> cols;
    for (std::size_t t = 0; t < dates.size(); ++t) {
        if (!(dates[t] < start) && !(end < dates[t])) cols.push_back(static_cast<Eigen::Index>(t));
    }
    if (cols.empty()) {
        throw DataError("no trading dates in [" + format_date(start) + ", " + format_date(end) + "]");
    }
    return cols;
}

}

/// Restricts a panel to the dates in [start, end] inclusive.
inline MarketPanel slice_period(const MarketPanel& panel, const Date& start, const Date& end) {
    const auto cols = detail::date_range(panel.dates, start, end);
    std::vector<Eigen::Index> rows(panel.n());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<Eigen::Index>(i);
    return detail::select(panel, rows, cols);
}

inline SeriesPanel slice_period(const SeriesPanel& series, const Date& start, const Date& end) {
    const auto cols = detail::date_range(series.dates, start, end);
    SeriesPanel out;
    out.kind = series.kind;
    out.tickers = series.tickers;
    out.values.resize(series.values.rows(), static_cast<Eigen::Index>(cols.size()));
    out.flagged.resize(series.values.rows(), static_cast<Eigen::Index>(cols.size()));
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(cols.size()); ++c) {
        out.values.col(c) = series.values.col(cols[static_cast<std::size_t>(c)]);
        out.flagged.col(c) = series.flagged.col(cols[static_cast<std::size_t>(c)]);
        out.dates.push_back(series.dates[static_cast<std::size_t>(cols[static_cast<std::size_t>(c)])]);
    }
    return out;
}

} // namespace sectornet

#endif // SECTORNET_INGEST_HPP_
