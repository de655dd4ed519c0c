#include <doctest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "support.hpp"
#include "symquad/rule_io.hpp"

using namespace symquad;
using namespace testing_support;

namespace {

QuadratureRule random_rule(DomainKind kind, std::mt19937_64& rng) {
  const Domain& d = domain(kind);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::vector<OrbitTerm> terms;
  for (const auto& o : d.orbits) {
    const auto inst = random_instance(d, o.id, rng);
    OrbitTerm t{o.id, {}, Extended(w(rng))};
    for (double p : inst.params) t.params.emplace_back(p);
    terms.push_back(t);
  }
  return QuadratureRule(kind, 3, terms);
}

std::size_t error_line(const std::string& text) {
  try {
    parse_rule(text, "f.txt");
  } catch (const RuleFormatError& e) {
    return e.line();
  }
  return 9999;
}

std::string error_text(const std::string& text) {
  try {
    parse_rule(text, "f.txt");
  } catch (const RuleFormatError& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("rule files round trip byte for byte") {
  std::mt19937_64 rng(41);
  for (DomainKind kind : kAllDomains) {
    for (int t = 0; t < 20; ++t) {
      const auto r = random_rule(kind, rng);
      const auto text = format_rule(r);
      const auto back = parse_rule(text);
      CHECK(format_rule(back) == text);
      CHECK(back.flat_params<double>() == r.flat_params<double>());
      CHECK(back.point_weights<double>() == r.point_weights<double>());
      const auto wide = format_rule(r, kExtendedDigits);
      CHECK(format_rule(parse_rule(wide), kExtendedDigits) == wide);
    }
  }
}

TEST_CASE("expanded output round trips doubles") {
  std::mt19937_64 rng(43);
  for (DomainKind kind : kAllDomains) {
    const auto r = random_rule(kind, rng);
    // Expansion happens in extended precision; the file holds its double rounding.
    const auto pts = r.points<Extended>();
    const auto wts = r.point_weights<Extended>();
    std::istringstream in(format_expanded(r));
    const int dim = r.domain().dimension;
    std::string line;
    std::size_t i = 0;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string tok;
      for (int c = 0; c < dim; ++c) {
        ls >> tok;
        CHECK(std::strtod(tok.c_str(), nullptr) == static_cast<double>(pts[i][static_cast<std::size_t>(c)]));
      }
      ls >> tok;
      CHECK(std::strtod(tok.c_str(), nullptr) == static_cast<double>(wts[i]));
      ++i;
    }
    CHECK(i == pts.size());
  }
}

TEST_CASE("valid centroid file") {
  const auto r = parse_rule("tri 1 1\n1 2.0\n");
  CHECK(r.terms().size() == 1);
  CHECK(r.kind() == DomainKind::triangle);
  CHECK(r.point_count() == 1);
  CHECK(parse_rule("\n  quad 3 4 \n\n3 0.5773502691896257 1\n").point_count() == 4);
}

TEST_CASE("malformed rule files report the line") {
  CHECK(error_line("") == 0);
  CHECK(error_line("tri 1\n1 2\n") == 1);
  CHECK(error_line("circle 1 1\n1 2\n") == 1);
  CHECK(error_line("tri x 1\n1 2\n") == 1);
  CHECK(error_line("tri 1 0\n") == 1);
  CHECK(error_line("tri 1 1\n") == 1);
  CHECK(error_line("tri 1 1\n\n4 2\n") == 3);
  CHECK(error_line("tri 1 3\n2 2\n") == 2);
  CHECK(error_line("tri 1 3\n2 0.1 abc\n") == 2);
  CHECK(error_line("tri 1 3\n1 2\n") == 1);
  CHECK(error_text("tri 1 3\n1 2\n").find("header says 3 but orbits expand to 1") != std::string::npos);
  CHECK(error_text("tri 1 1\n7 2\n").find("out of range") != std::string::npos);
  CHECK(error_text("tri 1 1\n7 2\n").rfind("f.txt:2:", 0) == 0);
}

TEST_CASE("files on disk") {
  const auto path = std::filesystem::temp_directory_path() / "symquad-io-test.txt";
  const auto r = parse_rule("hex 1 1\n1 8\n");
  write_rule_file(path, r);
  CHECK(format_rule(read_rule_file(path)) == format_rule(r));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_rule_file(path), RuleFormatError);
}

TEST_CASE("value formatting") {
  CHECK(format_value(Extended(0.5), 17) == "5.0000000000000000e-01");
  CHECK(format_value(Extended(1) / 3, 34).size() == std::string("3.333333333333333333333333333333333e-01").size());
  CHECK(parse_extended("1e-3") == Extended(1) / 1000);
  CHECK_THROWS_AS(parse_extended("1e-3x"), std::invalid_argument);
}
