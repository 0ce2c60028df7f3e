// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/random.h"

namespace rachsim
{

std::uint64_t
SplitMix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t
DeriveSeed(std::uint64_t masterSeed, std::uint64_t runIndex, StreamPurpose purpose)
{
    std::uint64_t state = masterSeed;
    std::uint64_t mixed = SplitMix64(state);
    state = mixed ^ (runIndex * 0xd1b54a32d192ed03ULL);
    mixed = SplitMix64(state);
    state = mixed ^ (static_cast<std::uint64_t>(purpose) * 0xaef17502108ef2d9ULL);
    return SplitMix64(state);
}

RngStream::RngStream(std::uint64_t seed)
    : m_seed(seed),
      m_engine(seed)
{
}

double
RngStream::Uniform01()
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(m_engine);
}

double
RngStream::Uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(m_engine);
}

std::int64_t
RngStream::UniformInt(std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(m_engine);
}

double
RngStream::Normal(double mean, double stddev)
{
    if (stddev == 0.0)
    {
        return mean;
    }
    return std::normal_distribution<double>(mean, stddev)(m_engine);
}

bool
RngStream::Bernoulli(double p)
{
    return Uniform01() < p;
}

} // namespace rachsim
