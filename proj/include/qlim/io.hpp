#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlim/combinatorics.hpp"
#include "qlim/grapheur.hpp"
#include "qlim/graph.hpp"

namespace qlim {

struct EdgeListOptions {
    char delimiter = '\0';  // '\0' splits on any run of spaces or tabs
    bool zero_based = false;
    bool undirected = false;  // symmetrize after reading
    double default_weight = 1.0;  // for lines with two fields
};

// `src dst [weight]` per line; '#' starts a comment; duplicate edges are summed.
WeightedDigraph parse_edge_list(std::istream& in, const EdgeListOptions& options = {});
WeightedDigraph ingest_edge_list(const std::string& path, const EdgeListOptions& options = {});

void write_edge_list(std::ostream& out, const WeightedDigraph& g, bool zero_based = false);
void write_edge_list(const std::string& path, const WeightedDigraph& g, bool zero_based = false);

// 17 significant digits.
std::string format_double(double x);

void write_quotient_dot(std::ostream& out, const WeightedDigraph& q);
void export_quotient_dot(const WeightedDigraph& q, const std::string& path);

using CsvRow = std::vector<std::string>;
std::string csv_field(const std::string& field);
void write_csv(std::ostream& out, const CsvRow& header, const std::vector<CsvRow>& rows);
void emit_csv(const CsvRow& header, const std::vector<CsvRow>& rows, const std::string& path);

nlohmann::json serialize_grapheur(const Grapheur& m);
// Validates unit mass within 1e-9 and canonicalizes.
Grapheur parse_grapheur(const nlohmann::json& j);
Grapheur load_grapheur(const std::string& path);

// `{"k":2,"counts":[[0,1],[0,0]]}` or a named shortcut string.
Multigraph parse_multigraph(const nlohmann::json& j);
// Pattern given on the command line: a shortcut name or a JSON literal.
Multigraph parse_pattern(const std::string& text);

nlohmann::json graph_to_json(const WeightedDigraph& g);

}  // namespace qlim
