#include <doctest.h>

#include "fixtures.hpp"
#include "mapperloss/io.hpp"

using namespace mapperloss;
using fixtures::sig;
using fixtures::tau;
namespace io = mapperloss::io;

TEST_CASE("cells and grids round-trip") {
  const Cell c({Interval::nondeg(-2), Interval::deg(3)});
  CHECK(io::cell_from_json(io::cell_to_json(c)) == c);
  CHECK(io::cell_to_json(sig(1)).dump() == R"([{"deg":1}])");
  const GridSpec g{2, 0.25, 3};
  CHECK(io::grid_from_json(io::grid_to_json(g)) == g);
  CHECK_THROWS_AS(io::cell_from_json(io::Json::parse(R"([{"half":1}])")), std::invalid_argument);
  CHECK_THROWS_AS(io::grid_from_json(io::Json::parse(R"({"d":1,"delta":1.0})")), std::invalid_argument);
  CHECK_THROWS_AS(io::grid_from_json(io::Json::parse(R"({"d":1,"delta":-1.0,"L":2})")), std::invalid_argument);
}

TEST_CASE("cosheaves round-trip") {
  const auto F = build_cosheaf(fixtures::late_merge_G(), fixtures::late_merge_grid());
  const auto back = io::cosheaf_from_json(io::cosheaf_to_json(F));
  REQUIRE(back.node_count() == F.node_count());
  for (std::size_t i = 0; i < F.node_count(); ++i) {
    CHECK(back.id(static_cast<NodeIndex>(i)) == F.id(static_cast<NodeIndex>(i)));
    CHECK(back.cell(static_cast<NodeIndex>(i)) == F.cell(static_cast<NodeIndex>(i)));
  }
  CHECK(back.links() == F.links());
  CHECK(io::dump(io::cosheaf_to_json(back)) == io::dump(io::cosheaf_to_json(F)));
}

TEST_CASE("graphs accept scalar or list values") {
  const auto g = io::graph_from_json(io::Json::parse(R"({"d":1,"vertices":[{"id":"a","f":0.5},{"id":"b","f":[1]}],"edges":[["a","b"]]})"));
  CHECK(g.vertices[0].f == std::vector<double>{0.5});
  CHECK(g.vertices[1].f == std::vector<double>{1.0});
  CHECK(io::graph_from_json(io::graph_to_json(g)).edges == g.edges);
  CHECK_THROWS_AS(io::graph_from_json(io::Json::parse(R"({"d":1,"vertices":[{"id":"a","f":"x"}]})")),
                  std::invalid_argument);
}

TEST_CASE("assignments round-trip and reject unknown ids") {
  auto F = fixtures::trace_ingest(fixtures::late_merge_F(), fixtures::late_merge_grid());
  auto G = fixtures::trace_ingest(fixtures::late_merge_G(), fixtures::late_merge_grid());
  const auto a = fixtures::late_merge_assignment(F, G);
  const auto j = io::assignment_to_json(a, F.F, G.F);
  const auto b = io::assignment_from_json(j, F.F, G.F);
  CHECK(b.n == a.n);
  CHECK(b.phi == a.phi);
  CHECK(b.psi == a.psi);
  auto bad = j;
  bad["phi"]["ghost"] = G.F.id(0);
  CHECK_THROWS_AS(io::assignment_from_json(bad, F.F, G.F), std::invalid_argument);
  auto partial = j;
  partial["phi"].erase(F.F.id(0));
  CHECK(io::assignment_from_json(partial, F.F, G.F).phi[0] == kNoNode);
}

TEST_CASE("loss results serialize with sorted keys") {
  LossResult r;
  r.n = 1;
  r.L_B = 1;
  r.bound = 2;
  r.reeb = 3.0;
  const std::string s = io::dump(io::loss_result_to_json(r));
  CHECK(s.back() == '\n');
  CHECK(s.find("\"L_B\": 1") < s.find("\"bound\": 2"));
  CHECK(s.find("\"bound\"") < s.find("\"n\""));
  r.L_B = ExtendedNat::infinite();
  r.bound = ExtendedNat::infinite();
  r.reeb = std::numeric_limits<double>::infinity();
  const auto j = io::loss_result_to_json(r);
  CHECK(j["L_B"] == "inf");
  CHECK(j["bound"] == "inf");
  CHECK(j["reeb_bound"] == "inf");
}

TEST_CASE("witnesses carry ids and an optional tau") {
  Witness w{DiagramKind::TriangleUp, sig(0), std::nullopt, 1, 2, 3, "e", "l", "r"};
  auto j = io::witness_to_json(w);
  CHECK(j["kind"] == "triangle_up");
  CHECK(j["tau"].is_null());
  CHECK(j["element"] == "e");
  w.kind = DiagramKind::ParallelogramLeft;
  w.tau = tau(0);
  CHECK(io::witness_to_json(w)["tau"] == io::cell_to_json(tau(0)));
}

TEST_CASE("dot export lists every node and link") {
  const auto F = fixtures::listed_cosheaf();
  const std::string dot = io::to_dot(F);
  CHECK(dot.rfind("graph cosheaf {", 0) == 0);
  std::size_t nodes = 0, links = 0, pos = 0;
  while ((pos = dot.find("[label=", pos)) != std::string::npos) ++nodes, ++pos;
  pos = 0;
  while ((pos = dot.find(" -- ", pos)) != std::string::npos) ++links, ++pos;
  CHECK(nodes == F.node_count());
  CHECK(links == F.links().size());
  CHECK(dot.find("\"v9@D7\"") != std::string::npos);
  CHECK(io::to_dot(F) == dot);
}
