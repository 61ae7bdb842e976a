/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#include <kscope/generator.hpp>

#include <random>
#include <stdexcept>

namespace kscope {

namespace {

// Raw engine output only; distribution objects differ across libraries.
class rng_t {
 public:
  explicit rng_t(std::uint64_t seed) : engine_(seed) {}

  long between(long lo, long hi)
  {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
  }

  bool chance(int percent) { return between(0, 99) < percent; }

 private:
  std::mt19937_64 engine_;
};

instance_t skeleton(const std::string& name, int n)
{
  instance_t inst;
  inst.name = name;
  inst.objective.assign(n, 0.0);
  inst.lower.assign(n, 0.0);
  inst.upper.assign(n, 1.0);
  inst.is_integer.assign(n, true);
  for (int j = 0; j < n; ++j) {
    inst.col_names.push_back("x" + std::to_string(j));
  }
  return inst;
}

void add_row(instance_t& inst, sparse_vector_t row, row_sense_t sense, double rhs)
{
  inst.row_names.push_back("r" + std::to_string(inst.num_rows()));
  inst.rows.push_back(std::move(row));
  inst.senses.push_back(sense);
  inst.rhs.push_back(rhs);
  inst.ranges.push_back(std::nullopt);
}

instance_t knapsack(std::uint64_t seed)
{
  rng_t rng(seed);
  const int n = static_cast<int>(rng.between(24, 32));
  const int m = static_cast<int>(rng.between(3, 5));
  auto inst   = skeleton("knapsack_" + std::to_string(seed), n);
  inst.obj_sense = obj_sense_t::maximize;
  for (int j = 0; j < n; ++j) {
    inst.objective[j] = static_cast<double>(rng.between(10, 60));
  }
  for (int i = 0; i < m; ++i) {
    sparse_vector_t row;
    long total = 0;
    for (int j = 0; j < n; ++j) {
      const long w = rng.between(5, 40);
      row.push_back(j, static_cast<double>(w));
      total += w;
    }
    add_row(inst, std::move(row), row_sense_t::less_equal, static_cast<double>(total / 2));
  }
  return inst;
}

instance_t setcover(std::uint64_t seed)
{
  rng_t rng(seed);
  const int m = static_cast<int>(rng.between(50, 60));
  const int n = static_cast<int>(rng.between(24, 30));
  auto inst   = skeleton("setcover_" + std::to_string(seed), n);
  for (int j = 0; j < n; ++j) {
    inst.objective[j] = static_cast<double>(rng.between(10, 14));
  }
  std::vector<std::vector<bool>> covers(m, std::vector<bool>(n, false));
  for (int i = 0; i < m; ++i) {
    int count = 0;
    while (count < 3) {
      const auto j = static_cast<int>(rng.between(0, n - 1));
      if (!covers[i][j]) {
        covers[i][j] = true;
        ++count;
      }
    }
  }
  for (int i = 0; i < m; ++i) {
    sparse_vector_t row;
    for (int j = 0; j < n; ++j) {
      if (covers[i][j]) { row.push_back(j, 1.0); }
    }
    add_row(inst, std::move(row), row_sense_t::greater_equal, 1.0);
  }
  return inst;
}

instance_t packing(std::uint64_t seed)
{
  rng_t rng(seed);
  const int n_int  = static_cast<int>(rng.between(14, 20));
  const int n_cont = static_cast<int>(rng.between(3, 6));
  const int n      = n_int + n_cont;
  const int m      = static_cast<int>(rng.between(8, 12));
  auto inst        = skeleton("packing_" + std::to_string(seed), n);
  inst.obj_sense   = obj_sense_t::maximize;
  for (int j = 0; j < n; ++j) {
    inst.objective[j] = static_cast<double>(rng.between(1, 25));
    inst.upper[j]     = static_cast<double>(rng.between(2, 5));
    inst.is_integer[j] = j < n_int;
  }
  for (int i = 0; i < m; ++i) {
    sparse_vector_t row;
    double full = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!rng.chance(60)) { continue; }
      const long a = rng.between(1, 9);
      row.push_back(j, static_cast<double>(a));
      full += static_cast<double>(a) * inst.upper[j];
    }
    if (row.index.empty()) {
      const auto j = static_cast<int>(rng.between(0, n - 1));
      row.push_back(j, 1.0);
      full = inst.upper[j];
    }
    add_row(inst, std::move(row), row_sense_t::less_equal,
            std::max(1.0, std::floor(0.35 * full) + 0.5 * static_cast<double>(rng.between(0, 1))));
  }
  return inst;
}

}  // namespace

const char* to_string(family_t f)
{
  switch (f) {
    case family_t::knapsack: return "knapsack";
    case family_t::setcover: return "setcover";
    case family_t::packing: return "packing";
    case family_t::jeroslow: return "jeroslow";
  }
  return "unknown";
}

std::optional<family_t> parse_family(const std::string& s)
{
  for (auto f : {family_t::knapsack, family_t::setcover, family_t::packing, family_t::jeroslow}) {
    if (s == to_string(f)) { return f; }
  }
  return std::nullopt;
}

instance_t jeroslow(int n)
{
  if (n < 1 || n % 2 == 0) { throw std::invalid_argument("jeroslow: n must be odd and positive"); }
  auto inst = skeleton("jeroslow_" + std::to_string(n), n);
  sparse_vector_t row;
  for (int j = 0; j < n; ++j) {
    row.push_back(j, 2.0);
    inst.objective[j] = 1.0;
  }
  add_row(inst, std::move(row), row_sense_t::equal, static_cast<double>(n));
  return inst;
}

instance_t generate(family_t family, std::uint64_t seed)
{
  switch (family) {
    case family_t::knapsack: return knapsack(seed);
    case family_t::setcover: return setcover(seed);
    case family_t::packing: return packing(seed);
    case family_t::jeroslow: return jeroslow(21 + 2 * static_cast<int>(seed % 8));
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace kscope
