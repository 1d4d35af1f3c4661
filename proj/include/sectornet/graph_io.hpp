#ifndef SECTORNET_GRAPH_IO_HPP_
#define SECTORNET_GRAPH_IO_HPP_

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sectornet/errors.hpp"
#include "sectornet/ingest.hpp"
#include "sectornet/pmfg.hpp"
#include "sectornet/text.hpp"

namespace sectornet {

/// Edge list "i_ticker,j_ticker,weight,rank" in acceptance order.
inline void write_edge_list(std::ostream& out, const PlanarGraph& graph, const std::vector<std::string>& labels) {
    if (labels.size() != graph.n) throw UsageError("label count does not match graph size");
    out << "i_ticker,j_ticker,weight,rank\n";
    for (const auto& e : graph.edges) {
        out << text::csv_escape(labels[e.i]) << ',' << text::csv_escape(labels[e.j]) << ','
            << text::format_double(e.weight) << ',' << e.rank << '\n';
    }
}

/// Reads an edge list back into a graph over `labels` (edge order preserved).
inline PlanarGraph read_edge_list(std::istream& in, const std::vector<std::string>& labels,
                                  PmfgMethod method = PmfgMethod::Distance) {
    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < labels.size(); ++k) index.emplace(labels[k], k);
    PlanarGraph g;
    g.n = labels.size();
    g.method = method;
    g.adjacency.assign(g.n, {});
    std::string line;
    std::getline(in, line); // header
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto f = text::split_csv(line);
        const auto bad = [&](const std::string& why) { return DataError("edge list line " + std::to_string(line_no) + ": " + why); };
        if (f.size() != 4) throw bad("expected 4 fields");
        const auto i = index.find(f[0]);
        const auto j = index.find(f[1]);
        if (i == index.end() || j == index.end()) throw bad("unknown ticker");
        const auto w = text::parse_double(f[2]);
        const auto r = text::parse_int(f[3]);
        if (!w || !r || *r < 1) throw bad("malformed weight or rank");
        g.edges.push_back({i->second, j->second, *w, static_cast<std::size_t>(*r)});
        g.adjacency[i->second].push_back(j->second);
        g.adjacency[j->second].push_back(i->second);
    }
    return g;
}

/// GraphML with ticker, sector and SH attributes on nodes and weight/rank on edges.
inline void write_graphml(std::ostream& out, const PlanarGraph& graph, const std::vector<std::string>& labels,
                          const std::vector<SectorLabel>& sectors) {
    if (labels.size() != graph.n || sectors.size() != graph.n) throw UsageError("node attributes do not match graph size");
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"ticker\" for=\"node\" attr.name=\"ticker\" attr.type=\"string\"/>\n"
        << "  <key id=\"sector\" for=\"node\" attr.name=\"sector\" attr.type=\"string\"/>\n"
        << "  <key id=\"sh\" for=\"node\" attr.name=\"sh\" attr.type=\"boolean\"/>\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
        << "  <key id=\"rank\" for=\"edge\" attr.name=\"rank\" attr.type=\"long\"/>\n"
        << "  <graph id=\"pmfg\" edgedefault=\"undirected\">\n";
    for (std::size_t v = 0; v < graph.n; ++v) {
        out << "    <node id=\"n" << v << "\">"
            << "<data key=\"ticker\">" << text::xml_escape(labels[v]) << "</data>"
            << "<data key=\"sector\">" << text::xml_escape(sectors[v].code) << "</data>"
            << "<data key=\"sh\">" << (sectors[v].sh ? "true" : "false") << "</data></node>\n";
    }
    for (std::size_t k = 0; k < graph.edges.size(); ++k) {
        const auto& e = graph.edges[k];
        out << "    <edge id=\"e" << k << "\" source=\"n" << e.i << "\" target=\"n" << e.j << "\">"
            << "<data key=\"weight\">" << text::format_double(e.weight) << "</data>"
            << "<data key=\"rank\">" << e.rank << "</data></edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

} // namespace sectornet

#endif // SECTORNET_GRAPH_IO_HPP_
