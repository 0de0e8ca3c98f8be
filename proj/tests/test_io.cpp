#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "bistrat/io.hpp"
#include "support/corpus.hpp"

using namespace bistrat;

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(BISTRAT_FIXTURES) + "/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string header(const char* extra) {
    return std::string(R"({"schema_version": "1", "complex": [[0, 1], [1, 2]])") + extra + "}";
}

template <class Fn>
ParseError parse_error_of(Fn&& fn) {
    try {
        fn();
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a parse error");
    return ParseError("", "");
}

} // namespace

TEST_CASE("fixture documents") {
    auto triangle = parse_bisheaf(fixture("constant_triangle.bsh"));
    CHECK(triangle == constant_bisheaf(build_complex({{0, 1, 2}}), Prime(2), 1));

    auto path = parse_bisheaf(fixture("path_zero_restriction.bsh"));
    CHECK(path == testing::path_zero_restriction());

    auto e = parse_error_of([] { parse_bisheaf(fixture("unknown_simplex.bsh")); });
    CHECK(e.path() == "/stalks/0/simplex");
    CHECK(std::string(e.what()).find("unknown simplex [0,3]") != std::string::npos);
}

TEST_CASE("serialize then parse is the identity") {
    for (const char* name : {"constant_triangle.bsh", "path_zero_restriction.bsh"}) {
        auto b = parse_bisheaf(fixture(name));
        auto text = serialize_bisheaf(b);
        CHECK(parse_bisheaf(text) == b);
        CHECK(serialize_bisheaf(parse_bisheaf(text)) == text);
    }
    CHECK(serialize_bisheaf(parse_bisheaf(fixture("constant_triangle.bsh"))) == fixture("constant_triangle.bsh"));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto inst = testing::random_instance(seed, 30, 3, 3, {2, 3, 7});
        REQUIRE(parse_bisheaf(serialize_bisheaf(inst.bisheaf)) == inst.bisheaf);
    }
}

TEST_CASE("stratification documents round-trip") {
    auto path = testing::path_zero_restriction();
    auto s = canonical_stratification(path);
    auto text = serialize_stratification(path.complex(), s);
    CHECK(text == fixture("path_zero_restriction.strat.json"));
    CHECK(parse_stratification(text, path.complex()) == s);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto inst = testing::random_instance(seed, 30, 3, 2);
        const Complex& c = inst.bisheaf.complex();
        for (const auto& strat : {canonical_stratification(inst.bisheaf), skeletal_stratification(c)}) {
            auto doc = serialize_stratification(c, strat);
            REQUIRE(parse_stratification(doc, c) == strat);
            REQUIRE(serialize_stratification(c, parse_stratification(doc, c)) == doc);
        }
    }
}

TEST_CASE("omitted data takes defaults and entries are reduced") {
    auto bare = parse_bisheaf(header(""));
    for (SimplexId s = 0; s < bare.complex().size(); ++s) {
        CHECK(bare.stalk_dim(s) == 0);
        CHECK(bare.costalk_dim(s) == 0);
    }

    auto sparse = parse_bisheaf(header(R"(, "prime": 3,
        "stalks": [{"simplex": [0], "dim": 1}, {"simplex": [1, 0], "dim": 1}],
        "restrictions": [{"face": [0], "coface": [0, 1], "matrix": [[-4]]}])"));
    const Complex& c = sparse.complex();
    CHECK(sparse.prime().value() == 3);
    CHECK(sparse.restriction({c.id_of(Simplex{0}), c.id_of(Simplex{0, 1})}) == FieldMatrix::from_rows(Prime(3), {{2}}));
    CHECK(sparse.restriction({c.id_of(Simplex{1}), c.id_of(Simplex{0, 1})}) == FieldMatrix(Prime(3), 1, 0));
    CHECK(sparse.vertical(c.id_of(Simplex{0})) == FieldMatrix(Prime(3), 0, 1));

    auto defaulted = parse_bisheaf(R"({"schema_version": "1", "complex": [[4]]})");
    CHECK(defaulted.prime().value() == 2);

    CHECK(parse_complex("[[0, 1, 2], [2, 3]]").size() == 9);
    CHECK(parse_complex(R"({"complex": [[0, 1]]})").size() == 3);
}

TEST_CASE("parse errors carry their location") {
    auto syntax = parse_error_of([] { parse_bisheaf("{\n  \"schema_version\": \"1\",\n  \"complex\": [[0, 1],\n}"); });
    REQUIRE(syntax.line());
    CHECK(*syntax.line() == 4);

    auto version = parse_error_of([] { parse_bisheaf(R"({"schema_version": "2", "complex": [[0]]})"); });
    CHECK(version.path() == "/schema_version");
    CHECK_THROWS_AS(parse_bisheaf(R"({"complex": [[0]]})"), ParseError);

    auto prime = parse_error_of([] { parse_bisheaf(header(R"(, "prime": 4)")); });
    CHECK(prime.path() == "/prime");

    auto non_covering = parse_error_of([] {
        parse_bisheaf(header(R"(, "restrictions": [{"face": [0], "coface": [1, 2], "matrix": []}])"));
    });
    CHECK(non_covering.path() == "/restrictions/0");

    auto duplicate = parse_error_of([] {
        parse_bisheaf(header(R"(, "stalks": [{"simplex": [0], "dim": 1}, {"simplex": [0], "dim": 2}])"));
    });
    CHECK(duplicate.path() == "/stalks/1");

    auto shape = parse_error_of([] {
        parse_bisheaf(header(R"(, "stalks": [{"simplex": [0], "dim": 1}, {"simplex": [0, 1], "dim": 1}],
            "restrictions": [{"face": [0], "coface": [0, 1], "matrix": [[1, 0]]}])"));
    });
    CHECK(shape.path() == "/restrictions/0/matrix/0");

    auto bad_entry = parse_error_of([] {
        parse_bisheaf(header(R"(, "stalks": [{"simplex": [0], "dim": 1}, {"simplex": [0, 1], "dim": 1}],
            "restrictions": [{"face": [0], "coface": [0, 1], "matrix": [["x"]]}])"));
    });
    CHECK(bad_entry.path() == "/restrictions/0/matrix/0/0");

    CHECK_THROWS_AS(parse_bisheaf(R"({"schema_version": "1", "complex": []})"), ParseError);
    CHECK_THROWS_AS(parse_bisheaf(R"({"schema_version": "1", "complex": [[0, 0]]})"), ParseError);
    CHECK_THROWS_AS(parse_bisheaf("[]"), ParseError);
}

TEST_CASE("failed axioms are reported with the violation list") {
    const std::string doc = R"({"schema_version": "1", "complex": [[0, 1]],
        "stalks": [{"simplex": [0], "dim": 1}, {"simplex": [0, 1], "dim": 1}],
        "costalks": [{"simplex": [0], "dim": 1}, {"simplex": [0, 1], "dim": 1}],
        "verticals": [{"simplex": [0], "matrix": [[1]]}]})";
    try {
        parse_bisheaf(doc);
        FAIL("expected an invalid bisheaf");
    } catch (const InvalidBisheafError& e) {
        REQUIRE(e.violations().size() == 1);
        CHECK(e.violations()[0].rfind("square {0} < {0,1}", 0) == 0);
    }
    CHECK_NOTHROW(parse_bisheaf(doc, false));
}

TEST_CASE("text exporters") {
    auto path = testing::path_zero_restriction();
    auto s = canonical_stratification(path);
    CHECK(format_labels(path.complex(), s) == fixture("path_zero_restriction.labels"));
    CHECK(format_filtration(path.complex(), s) == "M_-1:\nM_0: 1\nM_1: 0 0,1 1 1,2 2\n");
    CHECK(format_dot(path.complex(), s) ==
          "digraph frontier {\n"
          "  s0 [label=\"1:0\"];\n"
          "  s1 [label=\"1:1,2\"];\n"
          "  s2 [label=\"0:1\"];\n"
          "  s2 -> s0;\n"
          "  s2 -> s1;\n"
          "}\n");
}
