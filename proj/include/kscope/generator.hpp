/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, kscope contributors
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <kscope/model.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace kscope {

/// Seeded instance families of the default desk corpus.
///  - knapsack: multi-dimensional 0/1 knapsack, maximize
///  - setcover: weighted set cover, minimize
///  - packing: packing rows over general integer and continuous columns
///  - jeroslow: min sum x s.t. 2 x_0 + ... + 2 x_{n-1} = n, binary, n odd;
///    integer infeasible, and branch-and-bound needs exponentially many nodes
enum class family_t : std::uint8_t { knapsack, setcover, packing, jeroslow };

const char* to_string(family_t f);
std::optional<family_t> parse_family(const std::string& s);

/// Same family and seed give an identical instance on every platform.
instance_t generate(family_t family, std::uint64_t seed);

/// Jeroslow instance with `n` binary columns; `n` must be odd.
instance_t jeroslow(int n);

}  // namespace kscope
