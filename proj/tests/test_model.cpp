/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <doctest.h>

#include <kscope/generator.hpp>
#include <kscope/model.hpp>

#include "oracles.hpp"

using namespace kscope;

namespace {

model_errc error_of(std::string_view text)
{
  try {
    parse_mps(text);
  } catch (const model_error& e) {
    return e.code();
  }
  FAIL("expected a model_error");
  return model_errc::invalid_value;
}

}  // namespace

TEST_CASE("minimal file with one row and no bounds")
{
  const auto inst = parse_mps(R"(NAME tiny
ROWS
 N obj
 L c1
COLUMNS
 x obj 1 c1 1
 y c1 2
RHS
 rhs c1 4
ENDATA
)");
  CHECK(inst.num_rows() == 1);
  CHECK(inst.num_cols() == 2);
  CHECK(inst.lower == std::vector<double>{0.0, 0.0});
  CHECK(inst.upper == std::vector<double>{inf, inf});
  CHECK(inst.objective == std::vector<double>{1.0, 0.0});
  CHECK(inst.senses[0] == row_sense_t::less_equal);
  CHECK(inst.rhs[0] == 4.0);
  CHECK(inst.rows[0].value == std::vector<double>{1.0, 2.0});
  CHECK(summary(inst) == "tiny 1 2 0 2");
}

TEST_CASE("BV bound marks a binary column")
{
  const auto inst = parse_mps(R"(NAME b
ROWS
 N obj
 L c1
COLUMNS
 x obj 1 c1 1
RHS
 rhs c1 1
BOUNDS
 BV b1 x
ENDATA
)");
  CHECK(inst.is_integer[0]);
  CHECK(inst.lower[0] == 0.0);
  CHECK(inst.upper[0] == 1.0);
}

TEST_CASE("integer markers, ranges, objective sense and constant")
{
  const auto inst = parse_mps(R"(NAME mixed
OBJSENSE
    MAX
ROWS
 N obj
 G r1
 E r2
 L r3
COLUMNS
 MARKER 'MARKER' 'INTORG'
 a obj 2 r1 1
 a r2 1
 MARKER 'MARKER' 'INTEND'
 b obj 3 r3 4
RHS
 rhs r1 1 r2 2
 rhs r3 8 obj 5
RANGES
 rng r1 3 r2 -1
BOUNDS
 UP bnd a 4
 MI bnd b
ENDATA
)");
  CHECK(inst.obj_sense == obj_sense_t::maximize);
  CHECK(inst.is_integer == std::vector<bool>{true, false});
  CHECK(inst.objective_offset == -5.0);
  CHECK(inst.row_bounds(0) == std::pair{1.0, 4.0});
  CHECK(inst.row_bounds(1) == std::pair{1.0, 2.0});
  CHECK(inst.row_bounds(2) == std::pair{-inf, 8.0});
  CHECK(inst.upper[0] == 4.0);
  CHECK(inst.lower[1] == -inf);
}

TEST_CASE("structured errors")
{
  CHECK(error_of("NAME x\nROWS\n N obj\nCOLUMNS\n x zz 1\nENDATA\n") ==
        model_errc::dangling_reference);
  CHECK(error_of("NAME x\nROWS\n N obj\n L r\n L r\nCOLUMNS\n x r 1\nENDATA\n") ==
        model_errc::duplicate_row);
  CHECK(error_of("NAME x\nROWS\n N obj\n L r\nCOLUMNS\n x r 1 r 2\nENDATA\n") ==
        model_errc::duplicate_entry);
  CHECK(error_of("NAME x\nROWS\n N obj\n L r\nCOLUMNS\n x r 1\n y r 1\n x obj 1\nENDATA\n") ==
        model_errc::duplicate_column);
  CHECK(error_of("NAME x\nROWS\n N obj\nENDATA\n") == model_errc::empty_instance);
  CHECK(error_of("NAME x\nBOGUS\nENDATA\n") == model_errc::malformed_section);
  CHECK(error_of("NAME x\nROWS\n N obj\n L r\nCOLUMNS\n x r abc\nENDATA\n") ==
        model_errc::invalid_value);
  CHECK(error_of("NAME x\nROWS\n N obj\n L r\nCOLUMNS\n x r 1\nBOUNDS\n XX b x 1\nENDATA\n") ==
        model_errc::malformed_line);
  CHECK(error_of("NAME x\nROWS\n N obj\n L r\nCOLUMNS\n x r 1\nBOUNDS\n UP b q 1\nENDATA\n") ==
        model_errc::dangling_reference);
}

TEST_CASE("relaxation keeps bounds and integrality annotations")
{
  auto inst = oracle::random_milp(3);
  const auto lp = relax(inst);
  CHECK(lp.lower == inst.lower);
  CHECK(lp.upper == inst.upper);
  CHECK(lp.is_integer == inst.is_integer);
  CHECK(lp.provenance.size() == static_cast<std::size_t>(inst.num_rows()));
  for (const auto& p : lp.provenance) {
    CHECK(p.origin == row_origin_t::original);
  }
  for (int i = 0; i < inst.num_rows(); ++i) {
    const auto [lo, up] = inst.row_bounds(i);
    CHECK(lp.row_lower[i] == lo);
    CHECK(lp.row_upper[i] == up);
  }
}

TEST_CASE("round trip property over generated and random instances")
{
  std::vector<instance_t> corpus;
  for (std::uint64_t s = 0; s < 10; ++s) {
    corpus.push_back(oracle::random_milp(s, s % 2 == 1));
    corpus.push_back(generate(family_t::knapsack, s));
    corpus.push_back(generate(family_t::setcover, s));
    corpus.push_back(generate(family_t::packing, s));
  }
  corpus.push_back(jeroslow(7));
  for (const auto& inst : corpus) {
    CAPTURE(inst.name);
    const auto text  = write_mps(inst);
    const auto again = parse_mps(text);
    CHECK(again == inst);
    CHECK(write_mps(again) == text);
  }
}

TEST_CASE("ranged, free and offset rows survive a round trip")
{
  instance_t inst;
  inst.name             = "edge";
  inst.obj_sense        = obj_sense_t::maximize;
  inst.objective_offset = 2.5;
  inst.col_names        = {"a", "b", "c"};
  inst.objective        = {1.0 / 3.0, -2.0, 0.0};
  inst.lower            = {-inf, -3.0, 1.0};
  inst.upper            = {inf, 0.1, 1.0};
  inst.is_integer       = {false, true, true};
  inst.row_names        = {"r0", "r1"};
  inst.rows.resize(2);
  inst.rows[0].push_back(0, 1e-7);
  inst.rows[0].push_back(2, 12345.678);
  inst.rows[1].push_back(1, -1.0);
  inst.senses = {row_sense_t::equal, row_sense_t::greater_equal};
  inst.rhs    = {4.0, -1.0};
  inst.ranges = {-2.0, std::nullopt};
  CHECK(parse_mps(write_mps(inst)) == inst);
}

TEST_CASE("generators are deterministic per seed")
{
  for (auto f : {family_t::knapsack, family_t::setcover, family_t::packing}) {
    CHECK(generate(f, 5) == generate(f, 5));
    CHECK_FALSE(generate(f, 5) == generate(f, 6));
    CHECK_NOTHROW(generate(f, 5).validate());
  }
}
