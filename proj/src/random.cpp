// SPDX-License-Identifier: Apache-2.0
#include "rffsim/random.hpp"

#include <bit>

namespace rffsim
{
Rng make_cell_rng(std::uint64_t master_seed, double rate, std::uint64_t rep)
{
    auto bits = std::bit_cast<std::uint64_t>(rate + 0.0);  // fold -0 into 0
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(bits),
                      static_cast<std::uint32_t>(bits >> 32),
                      static_cast<std::uint32_t>(rep),
                      static_cast<std::uint32_t>(rep >> 32)};
    return Rng(seq);
}

Rng make_rng(std::uint64_t seed)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32)};
    return Rng(seq);
}

}  // namespace rffsim
