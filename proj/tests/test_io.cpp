#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "qlim/errors.hpp"
#include "qlim/io.hpp"

using namespace qlim;

TEST_CASE("edge list parsing") {
    std::istringstream one("1\t2\t0.5\n");
    const WeightedDigraph g = parse_edge_list(one);
    CHECK(g.size() == 2);
    CHECK(g(0, 1) == 0.5);
    CHECK(g.nonzero_count() == 1);

    std::istringstream dup("# comment\n1 2 0.3\n\n1 2 0.2  # trailing\n");
    CHECK(parse_edge_list(dup)(0, 1) == doctest::Approx(0.5).epsilon(1e-15));

    std::istringstream bad("1 2 abc\n");
    try {
        parse_edge_list(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.exit_code() == 2);
    }
    std::istringstream bad3("1 2\n2 3\n3 x\n");
    try {
        parse_edge_list(bad3);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(parse_edge_list(empty), EmptyInput);
    std::istringstream negative("1 2 -1\n");
    CHECK_THROWS_AS(parse_edge_list(negative), ParseError);
    std::istringstream zero_id("0 1\n");
    CHECK_THROWS_AS(parse_edge_list(zero_id), ParseError);

    EdgeListOptions opt;
    opt.zero_based = true;
    opt.undirected = true;
    opt.delimiter = ',';
    std::istringstream csv("0,1,2\n1,2\n");
    const WeightedDigraph u = parse_edge_list(csv, opt);
    CHECK(u.size() == 3);
    CHECK(u(0, 1) == u(1, 0));
    CHECK(u(1, 2) == u(2, 1));
    CHECK(u.total_weight() == doctest::Approx(3.0));
    CHECK_THROWS_AS(ingest_edge_list("/nonexistent/file.tsv"), IoError);
}

TEST_CASE("edge list round trip") {
    Rng rng(71);
    const NormalizedGraph g = oracle::random_graph(6, rng, 0.0);
    std::stringstream ss;
    write_edge_list(ss, g);
    const WeightedDigraph back = parse_edge_list(ss);
    CHECK(back == static_cast<const WeightedDigraph&>(g));
}

TEST_CASE("number formatting round trips") {
    Rng rng(72);
    for (int t = 0; t < 1000; ++t) {
        const double x = uniform01(rng) * std::pow(10.0, static_cast<double>(uniform_index(rng, 20)) - 10.0);
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("DOT export") {
    std::ostringstream out;
    write_quotient_dot(out, WeightedDigraph::from_rows({{0.1, 0.2}, {0.3, 0.4}}));
    const std::string dot = out.str();
    CHECK(dot.find("digraph") != std::string::npos);
    std::size_t edges = 0;
    for (std::size_t p = dot.find("->"); p != std::string::npos; p = dot.find("->", p + 1)) ++edges;
    CHECK(edges == 4);
    CHECK(dot.find("v1 -> v1") != std::string::npos);
    CHECK(dot.find("penwidth=8") != std::string::npos);  // heaviest edge
    CHECK_THROWS_AS(export_quotient_dot(WeightedDigraph(2), "/nonexistent/dir/q.dot"), IoError);
}

TEST_CASE("CSV output") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    std::ostringstream out;
    write_csv(out, {"n", "param", "estimate", "se"}, {{"10", "edge", "0.25", "0.01"}});
    CHECK(out.str() == "n,param,estimate,se\r\n10,edge,0.25,0.01\r\n");
}

TEST_CASE("grapheur JSON") {
    const Grapheur m =
        Grapheur::from_parameters({{0.2, 0.1}, {0.0, 0.15}}, {0.1, 0.0}, {0.0, 0.1}, 0.25, 0.1).canonicalize();
    const Grapheur back = parse_grapheur(serialize_grapheur(m));
    CHECK(approx_equal(back, m, 0.0));
    const nlohmann::json j = nlohmann::json::parse(serialize_grapheur(m).dump());
    CHECK(approx_equal(parse_grapheur(j), m, 0.0));

    CHECK_THROWS_AS(parse_grapheur(nlohmann::json::parse(R"({"E":[[0.5]],"theta":0.2})")), InvalidArgument);
    CHECK_THROWS_AS(parse_grapheur(nlohmann::json::parse(R"({"E":[[1.0]],"extra":1})")), ValidationError);
    const Grapheur minimal = parse_grapheur(nlohmann::json::parse(R"({"theta":1})"));
    CHECK(minimal.theta() == 1.0);

    const auto path = std::filesystem::temp_directory_path() / "qlim_test_grapheur.json";
    {
        std::ofstream f(path);
        f << serialize_grapheur(m).dump();
    }
    CHECK(approx_equal(load_grapheur(path.string()), m, 0.0));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_grapheur("/nonexistent.json"), IoError);
}

TEST_CASE("pattern parsing") {
    CHECK(parse_pattern("edge") == Multigraph::edge());
    CHECK(parse_pattern(R"({"k": 2, "counts": [[0,1],[0,0]]})") == Multigraph::edge());
    CHECK(parse_multigraph(nlohmann::json("star-out:3")) == Multigraph::star_out(3));
    CHECK_THROWS_AS(parse_pattern(R"({"k": 2, "counts": [[0,1]]})"), DimensionMismatch);
    CHECK_THROWS_AS(parse_pattern("{not json"), ValidationError);
}
