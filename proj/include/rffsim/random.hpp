// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace rffsim
{
using Rng = std::mt19937_64;

//---------------------------------------------------------------------------//
/*!
 * Bernoulli trial against a fixed probability using one raw 64-bit draw.
 *
 * Probabilities of exactly 0 or 1 are decided without consuming the stream,
 * so degenerate configurations reproduce the random sequence of the simpler
 * model they reduce to.
 */
class BernoulliGate
{
  public:
    BernoulliGate() = default;

    explicit BernoulliGate(double probability) : probability_(probability)
    {
        if (!(probability > 0))
        {
            mode_ = Mode::never;
        }
        else if (probability >= 1)
        {
            mode_ = Mode::always;
        }
        else
        {
            mode_ = Mode::draw;
            double scaled = std::ldexp(probability, 64);
            constexpr double limit = 18446744073709549568.0;  // 2^64 - 2^11
            threshold_ = scaled >= limit
                             ? std::numeric_limits<std::uint64_t>::max()
                             : static_cast<std::uint64_t>(scaled);
        }
    }

    double probability() const { return probability_; }

    template<class Generator>
    bool operator()(Generator& rng) const
    {
        switch (mode_)
        {
            case Mode::never:
                return false;
            case Mode::always:
                return true;
            case Mode::draw:
                break;
        }
        return rng() < threshold_;
    }

  private:
    enum class Mode
    {
        never,
        always,
        draw
    };

    double probability_{0};
    Mode mode_{Mode::never};
    std::uint64_t threshold_{0};
};

//! Independent stream for one (B, repetition) sweep cell.
Rng make_cell_rng(std::uint64_t master_seed, double rate, std::uint64_t rep);

//! Stream for a standalone run.
Rng make_rng(std::uint64_t seed);

}  // namespace rffsim
