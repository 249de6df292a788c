#include <cfloat>
#include <cmath>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "pdmpq/errors.hpp"
#include "pdmpq/grid_io.hpp"

using namespace pdmpq;

namespace {

// smallest structurally valid tree, stuffed with awkward doubles
QuantizationTree tiny_tree() {
  QuantizationTree t;
  t.model_id = "toy-constant";
  t.x0 = make_state(1, {0.0});
  t.n_steps = 1;
  t.grid_size = 1;
  t.norm_p = 2.0;
  t.seed = 9;
  t.training_samples = 10;
  t.books.resize(2);
  t.books[0].nodes.push_back({make_state(1, {DBL_MAX, 1.0 / 3.0}), 0.0});
  t.books[0].weights.push_back(1.0);
  t.books[0].rebuild_mode_index();
  t.books[1].nodes.push_back({make_state(1, {-0.0}), 5e-324});
  t.books[1].weights.push_back(1.0);
  t.books[1].rebuild_mode_index();
  t.transitions.assign(2, {});
  t.transitions[1].resize(1);
  t.transitions[1][0].visited = true;
  t.transitions[1][0].entries = {{0, 1.0}};
  t.distortions.resize(2);
  return t;
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("serialization is a bitwise fixed point") {
  QuantizationTree tree = testutil::small_toy_tree(2, 8, 4000, 3);
  std::string text = tree_to_string(tree);
  QuantizationTree back = tree_from_string(text);
  CHECK(tree_to_string(back) == text);

  CHECK(back.model_id == tree.model_id);
  CHECK(back.x0.same_point(tree.x0));
  CHECK(back.n_steps == tree.n_steps);
  CHECK(back.grid_size == tree.grid_size);
  CHECK(back.norm_p == tree.norm_p);
  CHECK(back.seed == tree.seed);
  CHECK(back.training_samples == tree.training_samples);
  REQUIRE(back.books.size() == tree.books.size());
  for (std::size_t k = 0; k < tree.books.size(); ++k) {
    REQUIRE(back.books[k].nodes.size() == tree.books[k].nodes.size());
    for (std::size_t i = 0; i < tree.books[k].nodes.size(); ++i) {
      CHECK(back.books[k].nodes[i].z.same_point(tree.books[k].nodes[i].z));
      CHECK(back.books[k].nodes[i].s == tree.books[k].nodes[i].s);
      CHECK(back.books[k].weights[i] == tree.books[k].weights[i]);
    }
  }
  for (std::size_t k = 1; k < tree.transitions.size(); ++k) {
    REQUIRE(back.transitions[k].size() == tree.transitions[k].size());
    for (std::size_t r = 0; r < tree.transitions[k].size(); ++r) {
      CHECK(back.transitions[k][r].visited == tree.transitions[k][r].visited);
      CHECK(back.transitions[k][r].entries == tree.transitions[k][r].entries);
    }
  }
  for (std::size_t k = 0; k < tree.distortions.size(); ++k) {
    CHECK(back.distortions[k].pair == tree.distortions[k].pair);
    CHECK(back.distortions[k].z == tree.distortions[k].z);
    CHECK(back.distortions[k].s == tree.distortions[k].s);
  }
}

TEST_CASE("files round trip through disk") {
  testutil::TempDir dir;
  QuantizationTree tree = testutil::small_toy_tree(1, 6, 3000, 5);
  std::string path = dir.file("toy.grid");
  save_tree(tree, path);
  QuantizationTree back = load_tree(path);
  CHECK(tree_to_string(back) == tree_to_string(tree));
}

TEST_CASE("zeros and odd doubles survive the text form") {
  QuantizationTree t = tiny_tree();
  std::string text = tree_to_string(t);
  CHECK(text.rfind("pdmpq-grid 1\n", 0) == 0);
  CHECK(text.find("norm 0x1p+1") != std::string::npos);
  // positive zeros collapse to a bare 0, negative zero keeps its sign
  CHECK(text.find("dist 0 0 0 0") != std::string::npos);
  CHECK(text.find("dist 1 0 0 0") != std::string::npos);
  CHECK(text.find("-0x0p+0") != std::string::npos);
  CHECK(text.find("end\n") != std::string::npos);

  QuantizationTree back = tree_from_string(text);
  CHECK(back.books[0].nodes[0].z[0] == DBL_MAX);
  CHECK(back.books[0].nodes[0].z[1] == 1.0 / 3.0);
  CHECK(back.books[1].nodes[0].s == 5e-324);
  CHECK(back.books[1].nodes[0].z[0] == 0.0);
  CHECK(std::signbit(back.books[1].nodes[0].z[0]));
  CHECK(tree_to_string(back) == text);
}

TEST_CASE("malformed files are rejected") {
  std::string good = tree_to_string(tiny_tree());
  CHECK_THROWS_AS(tree_from_string(replaced(good, "pdmpq-grid 1", "other-grid 1")), ConfigError);
  CHECK_THROWS_AS(tree_from_string(replaced(good, "pdmpq-grid 1", "pdmpq-grid 2")), ConfigError);
  CHECK_THROWS_AS(tree_from_string(replaced(good, "norm 0x1p+1", "norm banana")), ConfigError);
  CHECK_THROWS_AS(tree_from_string(replaced(good, "book 1", "book 7")), ConfigError);
  CHECK_THROWS_AS(tree_from_string(replaced(good, "trans 1 1 1", "trans 1 2 1")), ConfigError);
  CHECK_THROWS_AS(tree_from_string(good.substr(0, good.size() / 2)), ConfigError);
  CHECK_THROWS_AS(tree_from_string(""), ConfigError);

  testutil::TempDir dir;
  CHECK_THROWS_AS(load_tree(dir.file("absent.grid")), ConfigError);
}
