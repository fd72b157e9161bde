#include "qlim/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "qlim/errors.hpp"

namespace qlim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string> out;
    if (delimiter == '\0') {
        std::istringstream is(line);
        std::string f;
        while (is >> f) out.push_back(f);
        return out;
    }
    std::string cur;
    for (char c : line) {
        if (c == delimiter) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

long long parse_id(const std::string& s, std::size_t line) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(line, "bad vertex id '" + s + "'");
    return v;
}

double parse_weight(const std::string& s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(line, "bad weight '" + s + "'");
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParseError(line, "weight must be finite and nonnegative");
    return v;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

WeightedDigraph parse_edge_list(std::istream& in, const EdgeListOptions& options) {
    std::vector<Entry> entries;
    std::size_t n = 0;
    std::string raw;
    std::size_t line = 0;
    const long long base = options.zero_based ? 0 : 1;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        const auto fields = split_fields(text, options.delimiter);
        if (fields.size() < 2 || fields.size() > 3) throw ParseError(line, "expected 2 or 3 fields");
        const long long s = parse_id(fields[0], line) - base;
        const long long t = parse_id(fields[1], line) - base;
        if (s < 0 || t < 0) throw ParseError(line, "vertex id below the id base");
        const double w = fields.size() == 3 ? parse_weight(fields[2], line) : options.default_weight;
        entries.push_back({static_cast<std::size_t>(s), static_cast<std::size_t>(t), w});
        n = std::max({n, static_cast<std::size_t>(s) + 1, static_cast<std::size_t>(t) + 1});
    }
    if (entries.empty()) throw EmptyInput();
    WeightedDigraph g = WeightedDigraph::from_entries(n, std::move(entries));
    return options.undirected ? symmetrize(g) : g;
}

WeightedDigraph ingest_edge_list(const std::string& path, const EdgeListOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_edge_list(in, options);
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_edge_list(std::ostream& out, const WeightedDigraph& g, bool zero_based) {
    const std::size_t base = zero_based ? 0 : 1;
    g.for_each_nonzero([&](std::size_t i, std::size_t j, double w) {
        out << (i + base) << '\t' << (j + base) << '\t' << format_double(w) << '\n';
    });
}

void write_edge_list(const std::string& path, const WeightedDigraph& g, bool zero_based) {
    auto out = open_output(path);
    write_edge_list(out, g, zero_based);
    if (!out) throw IoError("write failed for '" + path + "'");
}

void write_quotient_dot(std::ostream& out, const WeightedDigraph& q) {
    constexpr double kMaxPen = 8.0;
    double max_w = 0.0;
    q.for_each_nonzero([&](std::size_t, std::size_t, double w) { max_w = std::max(max_w, w); });
    out << "digraph quotient {\n";
    for (std::size_t i = 0; i < q.size(); ++i) out << "  v" << (i + 1) << " [label=\"" << (i + 1) << "\"];\n";
    q.for_each_nonzero([&](std::size_t i, std::size_t j, double w) {
        out << "  v" << (i + 1) << " -> v" << (j + 1) << " [weight=" << format_double(w)
            << ", penwidth=" << format_double(kMaxPen * w / max_w) << "];\n";
    });
    out << "}\n";
}

void export_quotient_dot(const WeightedDigraph& q, const std::string& path) {
    auto out = open_output(path);
    write_quotient_dot(out, q);
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::string csv_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv(std::ostream& out, const CsvRow& header, const std::vector<CsvRow>& rows) {
    auto line = [&](const CsvRow& r) {
        for (std::size_t t = 0; t < r.size(); ++t) out << (t ? "," : "") << csv_field(r[t]);
        out << "\r\n";
    };
    line(header);
    for (const CsvRow& r : rows) {
        if (r.size() != header.size()) throw InvalidArgument("CSV row width differs from header");
        line(r);
    }
}

void emit_csv(const CsvRow& header, const std::vector<CsvRow>& rows, const std::string& path) {
    auto out = open_output(path);
    write_csv(out, header, rows);
    if (!out) throw IoError("write failed for '" + path + "'");
}

nlohmann::json serialize_grapheur(const Grapheur& m) {
    return {{"E", m.e_rows()}, {"sigma", m.sigmas()}, {"varsigma", m.varsigmas()}, {"theta", m.theta()},
            {"vartheta", m.vartheta()}};
}

Grapheur parse_grapheur(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw InvalidArgument("grapheur JSON must be an object");
        for (const auto& [key, value] : j.items()) {
            if (key != "E" && key != "sigma" && key != "varsigma" && key != "theta" && key != "vartheta")
                throw InvalidArgument("unknown grapheur field '" + key + "'");
        }
        const auto e = j.value("E", std::vector<std::vector<double>>{});
        const auto sigma = j.value("sigma", std::vector<double>{});
        const auto varsigma = j.value("varsigma", std::vector<double>{});
        const double theta = j.value("theta", 0.0);
        const double vartheta = j.value("vartheta", 0.0);
        return Grapheur::from_parameters(e, sigma, varsigma, theta, vartheta).canonicalize();
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidArgument(std::string("malformed grapheur JSON: ") + ex.what());
    }
}

Grapheur load_grapheur(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidArgument("'" + path + "' is not valid JSON: " + ex.what());
    }
    return parse_grapheur(j);
}

Multigraph parse_multigraph(const nlohmann::json& j) {
    try {
        if (j.is_string()) return parse_pattern_name(j.get<std::string>());
        if (!j.is_object()) throw InvalidArgument("pattern must be a name or an object");
        const auto counts = j.at("counts").get<std::vector<std::vector<std::uint32_t>>>();
        const Multigraph h = Multigraph::from_rows(counts);
        if (j.contains("k") && j.at("k").get<std::size_t>() != h.size())
            throw DimensionMismatch("pattern k does not match its counts");
        return h;
    } catch (const nlohmann::json::exception& ex) {
        throw InvalidArgument(std::string("malformed pattern JSON: ") + ex.what());
    }
}

Multigraph parse_pattern(const std::string& text) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        try {
            return parse_multigraph(nlohmann::json::parse(t));
        } catch (const nlohmann::json::parse_error& ex) {
            throw InvalidArgument(std::string("malformed pattern JSON: ") + ex.what());
        }
    }
    return parse_pattern_name(t);
}

nlohmann::json graph_to_json(const WeightedDigraph& g) { return {{"n", g.size()}, {"weights", g.to_rows()}}; }

}  // namespace qlim
