#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

#include "ptw/instance.hpp"
#include "ptw/io.hpp"

using namespace ptw;

namespace {

const Params params;
const Grid grid{params.extent, params.depth};

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& body)
      : path("/tmp/ptw_test_" + name) {
    std::ofstream out(path);
    out << body;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
  const Instance a = generate(7, 32, 32, params);
  const Instance b = generate(7, 32, 32, params);
  REQUIRE(a.sigma.atoms.size() == b.sigma.atoms.size());
  REQUIRE(a.mu.atoms.size() == b.mu.atoms.size());
  for (std::size_t i = 0; i < a.sigma.atoms.size(); ++i) {
    CHECK(signed_coord(a.sigma.atoms[i].x) == signed_coord(b.sigma.atoms[i].x));
    CHECK(a.sigma.atoms[i].w == b.sigma.atoms[i].w);
  }
  for (std::size_t i = 0; i < a.mu.atoms.size(); ++i) {
    CHECK(signed_coord(a.mu.atoms[i].x) == signed_coord(b.mu.atoms[i].x));
    CHECK(a.mu.atoms[i].t == b.mu.atoms[i].t);
    CHECK(a.mu.atoms[i].w == b.mu.atoms[i].w);
  }
  const Instance c = generate(8, 32, 32, params);
  bool differs = false;
  for (std::size_t i = 0; i < a.sigma.atoms.size(); ++i)
    if (a.sigma.atoms[i].w != c.sigma.atoms[i].w) differs = true;
  CHECK(differs);
}

TEST_CASE("generated instances respect counts, ranges and distinctness") {
  for (int n : {1, 5, 32}) {
    const Instance inst = generate(99, n, n + 2, params);
    CHECK(static_cast<int>(inst.sigma.atoms.size()) == n);
    CHECK(static_cast<int>(inst.mu.atoms.size()) == n + 2);
    CHECK_NOTHROW(inst.sigma.validate());
    CHECK_NOTHROW(inst.mu.validate());
    std::set<double> sites;
    for (const auto& a : inst.sigma.atoms) {
      CHECK(sites.insert(signed_coord(a.x)).second);
      CHECK(a.w >= 1e-3);
      CHECK(a.w <= 1e3);
      if (a.x.end != EndTag::Junction) {
        // snapped to a cell centre
        const double ratio = a.x.s / grid.resolution() - 0.5;
        CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
      }
    }
    for (const auto& a : inst.mu.atoms) {
      CHECK(a.t >= grid.resolution() * (1 - 1e-12));
      CHECK(a.t <= params.extent * (1 + 1e-12));
    }
  }
  CHECK_THROWS_AS(generate(1, 0, 4, params), std::invalid_argument);
  // only 2^L - 1 sites per end plus the junction are reachable
  CHECK_THROWS_AS(generate(1, 128, 4, params), std::invalid_argument);
  CHECK_NOTHROW(generate(1, 127, 4, params));
}

TEST_CASE("measure files round-trip") {
  const Instance inst = generate(13, 10, 12, params);
  const std::string path = "/tmp/ptw_test_roundtrip.json";
  save_measures(path, {inst.sigma, inst.mu});
  const Measures back = load_measures(path);
  REQUIRE(back.sigma.atoms.size() == inst.sigma.atoms.size());
  REQUIRE(back.mu.atoms.size() == inst.mu.atoms.size());
  for (std::size_t i = 0; i < back.mu.atoms.size(); ++i) {
    CHECK(signed_coord(back.mu.atoms[i].x) == signed_coord(inst.mu.atoms[i].x));
    CHECK(back.mu.atoms[i].t == inst.mu.atoms[i].t);
    CHECK(back.mu.atoms[i].w == inst.mu.atoms[i].w);
  }
  std::remove(path.c_str());
}

TEST_CASE("measure parse errors name the offending atom") {
  const TempFile bad("bad_measure.json", R"({"sigma":[{"end":"big","s":1.0,"w":2.0},
    {"end":"big","s":-1.0,"w":1.0}],"mu":[]})");
  try {
    load_measures(bad.path);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("sigma[1]") != std::string::npos);
  }

  const TempFile missing("missing_field.json", R"({"mu":[{"end":"big","s":1.0,"w":2.0}]})");
  try {
    load_measures(missing.path);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("mu[0]") != std::string::npos);
  }
}

TEST_CASE("snapping on ingestion reports moved atoms") {
  const TempFile f("snap.json", R"({"sigma":[{"end":"big","s":1.03,"w":1.0}],
    "mu":[{"end":"small","s":2.70,"t":0.5,"w":1.0}]})");
  Measures m = load_measures(f.path);
  const int moved = snap_measures(grid, m);
  CHECK(moved == 2);
  CHECK(m.sigma.atoms[0].x.s == doctest::Approx(1.0625));
  CHECK(m.mu.atoms[0].x.s == doctest::Approx(2.6875));
  CHECK(snap_measures(grid, m) == 0);  // idempotent
}

TEST_CASE("params files parse and validate") {
  const TempFile ok("params_ok.json", R"({"m":4,"n":3,"S":8,"L":6})");
  const Params p = load_params(ok.path);
  CHECK(p.m == 4);
  CHECK(p.extent == 8.0);
  const TempFile bad("params_bad.json", R"({"m":3,"n":3,"S":8,"L":6})");
  CHECK_THROWS(load_params(bad.path));
}

TEST_CASE("omega and psi files") {
  const TempFile om("omega.json", R"({"big":[[0,4]],"small":[[2,3],[5,6]]})");
  const auto masks = load_omega(om.path, grid);
  REQUIRE(masks.size() == 2);
  CHECK(masks[0].end == EndTag::BigEnd);
  int big_count = 0;
  for (auto b : masks[0].cells) big_count += b;
  CHECK(big_count == 32);  // [0,4) out of [0,8) at 64 cells

  const TempFile psi("psi.json", R"({"psi":[1.0,2.0,0.5]})");
  CHECK(load_psi(psi.path, 3).size() == 3);
  CHECK_THROWS(load_psi(psi.path, 4));
}

TEST_CASE("point specs parse") {
  CHECK(parse_point("big:1.5").end == EndTag::BigEnd);
  CHECK(parse_point("small:0.5").s == 0.5);
  CHECK(parse_point("junction").end == EndTag::Junction);
  CHECK_THROWS(parse_point("nowhere:1"));
}
