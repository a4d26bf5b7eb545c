#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floq/io.hpp"
#include "floq/rng.hpp"

using namespace floq;

namespace {

std::string dump_potential(const Potential& v) {
    std::ostringstream out;
    write_potential(out, v);
    return out.str();
}

Potential parse_potential(const std::string& text) {
    std::istringstream in(text);
    return read_potential(in);
}

}  // namespace

TEST_CASE("potential JSON round-trips exactly") {
    SUBCASE("real potentials are written as bare numbers") {
        LatticeSpec spec{{2, 3}};
        Potential v = random_potential(spec, 7, RandomMode::real());
        std::string text = dump_potential(v);
        CHECK(text.find('[') != std::string::npos);
        CHECK(text.find("hypercubic") != std::string::npos);
        // No [re, im] pairs inside "values": parse and inspect instead of
        // string-matching. Every element must be a plain number.
        auto doc = nlohmann::json::parse(text);
        for (const auto& x : doc.at("values")) CHECK(x.is_number());
        Potential back = parse_potential(text);
        CHECK(back.spec == v.spec);
        CHECK(back.is_real());
        for (size_t i = 0; i < v.values.size(); ++i) CHECK(back.values[i] == v.values[i]);
    }
    SUBCASE("complex potentials are written as [re, im] pairs") {
        LatticeSpec spec{{2, 2}};
        Potential v = random_potential(spec, 8, RandomMode::complex_valued());
        std::string text = dump_potential(v);
        auto doc = nlohmann::json::parse(text);
        for (const auto& x : doc.at("values")) {
            CHECK(x.is_array());
            CHECK(x.size() == 2);
        }
        Potential back = parse_potential(text);
        for (size_t i = 0; i < v.values.size(); ++i) CHECK(back.values[i] == v.values[i]);
    }
    SUBCASE("the reader accepts bare numbers and pairs interchangeably") {
        Potential v = parse_potential(
            R"({"periods": [2], "lattice": "hypercubic", "values": [1.5, [0.0, -2.0]]})");
        CHECK(v.values[0] == Complex{1.5, 0.0});
        CHECK(v.values[1] == Complex{0.0, -2.0});
    }
    SUBCASE("triangular lattices survive the trip") {
        LatticeSpec spec{{2, 2}, LatticeKind::triangular};
        Potential v = random_potential(spec, 9, RandomMode::real());
        Potential back = parse_potential(dump_potential(v));
        CHECK(back.spec.kind == LatticeKind::triangular);
        CHECK(back.spec.periods == spec.periods);
    }
    SUBCASE("two writes of the same data are byte-identical") {
        Potential v = random_potential(LatticeSpec{{2, 3}}, 10, RandomMode::complex_valued());
        CHECK(dump_potential(v) == dump_potential(v));
    }
}

TEST_CASE("malformed potential files raise FormatError") {
    CHECK_THROWS_AS(parse_potential("not json at all"), FormatError);
    CHECK_THROWS_AS(parse_potential(R"({"periods": [2]})"), FormatError);
    CHECK_THROWS_AS(
        parse_potential(R"({"periods": [2], "lattice": "hypercubic", "values": [1.0]})"),
        FormatError);  // wrong length
    CHECK_THROWS_AS(
        parse_potential(R"({"periods": [2], "lattice": "hexagonal", "values": [1.0, 2.0]})"),
        FormatError);
    CHECK_THROWS_AS(
        parse_potential(R"({"periods": [2], "lattice": "hypercubic", "values": [[1.0], 2.0]})"),
        FormatError);  // one-element pair
    CHECK_THROWS_AS(
        parse_potential(R"({"periods": [2], "lattice": "hypercubic", "values": ["a", "b"]})"),
        FormatError);
    CHECK_THROWS_AS(
        parse_potential(R"({"periods": [2, 0], "lattice": "hypercubic", "values": []})"),
        FormatError);  // invalid period
}

TEST_CASE("fourier tables round-trip with always-paired coefficients") {
    LatticeSpec spec{{2, 3}};
    FourierTable f = dft(random_potential(spec, 11, RandomMode::real()));
    std::ostringstream out;
    write_fourier(out, f);
    auto doc = nlohmann::json::parse(out.str());
    for (const auto& x : doc.at("coefficients")) CHECK(x.is_array());
    std::istringstream in(out.str());
    FourierTable back = read_fourier(in);
    CHECK(back.spec == f.spec);
    for (size_t i = 0; i < f.coefficients.size(); ++i)
        CHECK(back.coefficients[i] == f.coefficients[i]);
}

TEST_CASE("laurent dumps round-trip exactly, negative exponents included") {
    LaurentPoly p;
    p.vars = 2;
    p.add_term({-3, 2, 0}, Complex{1.25, -0.5});
    p.add_term({0, 0, 4}, Complex{-1.0, 0.0});
    p.add_term({1, -1, 1}, Complex{0.1234567890123456789, 3e-17});
    std::ostringstream out;
    write_laurent(out, p);
    std::istringstream in(out.str());
    LaurentPoly back = read_laurent(in);
    CHECK(back.vars == 2);
    CHECK(back.term_count() == p.term_count());
    for (const auto& [key, c] : p.terms) CHECK(back.coeff(key) == c);

    SUBCASE("map order makes the dump deterministic") {
        std::ostringstream again;
        write_laurent(again, p);
        CHECK(again.str() == out.str());
    }
    SUBCASE("inconsistent token counts are rejected") {
        std::istringstream bad("1 0 0 1.0 0.0\n1 0 1.0 0.0\n");
        CHECK_THROWS_AS(read_laurent(bad), FormatError);
        std::istringstream empty("");
        CHECK_THROWS_AS(read_laurent(empty), FormatError);
        std::istringstream short_line("1 2\n");
        CHECK_THROWS_AS(read_laurent(short_line), FormatError);
        std::istringstream garbage("x y 0 1.0 0.0\n");
        CHECK_THROWS_AS(read_laurent(garbage), FormatError);
    }
}

TEST_CASE("spectrum CSV has the right header and shape") {
    SUBCASE("real potential: ascending eigenvalue columns") {
        LatticeSpec spec{{2, 3}};
        Potential v = random_potential(spec, 12, RandomMode::real());
        std::ostringstream out;
        write_spectrum_csv(out, v, {{0.0, 0.0}, {0.25, 0.5}});
        std::istringstream lines(out.str());
        std::string header;
        std::getline(lines, header);
        CHECK(header == "k1,k2,lambda_1,lambda_2,lambda_3,lambda_4,lambda_5,lambda_6");
        int rows = 0;
        std::string row;
        while (std::getline(lines, row)) {
            ++rows;
            // columns: 2 + Q, eigenvalues ascending
            std::vector<double> vals;
            std::istringstream cells(row);
            std::string cell;
            while (std::getline(cells, cell, ',')) vals.push_back(std::strtod(cell.c_str(), nullptr));
            REQUIRE(vals.size() == 8);
            for (size_t i = 3; i < vals.size(); ++i) CHECK(vals[i] >= vals[i - 1]);
        }
        CHECK(rows == 2);
    }
    SUBCASE("complex potential: coefficient columns") {
        LatticeSpec spec{{2}};
        Potential v = random_potential(spec, 13, RandomMode::complex_valued());
        std::ostringstream out;
        write_spectrum_csv(out, v, {{0.0}});
        std::istringstream lines(out.str());
        std::string header;
        std::getline(lines, header);
        CHECK(header == "k1,c0_re,c0_im,c1_re,c1_im,c2_re,c2_im");
    }
}

TEST_CASE("report JSON is well-formed and escapes special characters") {
    RigidityReport rep;
    rep.suite = "quote \" and backslash \\ suite";
    rep.checks.push_back({"check\nwith newline", true, 1e-12, 1e-9, "tab\there"});
    rep.checks.push_back({"plain", false, 0.5, 1e-9, ""});
    std::string text = report_json(rep);
    auto doc = nlohmann::json::parse(text);  // parse failure = escaping bug
    CHECK(doc.at("suite").get<std::string>() == rep.suite);
    CHECK(doc.at("passed").get<bool>() == false);
    CHECK(doc.at("checks").size() == 2);
    CHECK(doc.at("checks")[0].at("name").get<std::string>() == "check\nwith newline");
    CHECK(doc.at("checks")[1].at("passed").get<bool>() == false);

    std::string pretty = report_text(rep);
    CHECK(pretty.find("FAIL") != std::string::npos);
    CHECK(pretty.find("plain") != std::string::npos);
}

TEST_CASE("format_double round-trips through strtod") {
    Rng rng(0xF0);
    for (int i = 0; i < 200; ++i) {
        double x = std::ldexp(rng.uniform_pm1(), rng.below(40) - 20);
        std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.5) == "-0.5");
}
