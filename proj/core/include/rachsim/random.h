// SPDX-License-Identifier: GPL-2.0-only

#ifndef RACHSIM_RANDOM_H
#define RACHSIM_RANDOM_H

#include <cstdint>
#include <random>

namespace rachsim
{

/// Independent random sub-streams used inside one Monte Carlo run.
enum class StreamPurpose : std::uint64_t
{
    Placement = 1,
    Shadowing = 2,
    Access = 3,    ///< preamble choice, backoff draws, activation times
    Detection = 4, ///< missed-detection draws
};

/// One step of the SplitMix64 generator; advances `state`.
std::uint64_t SplitMix64(std::uint64_t& state);

/**
 * Counter-based seed derivation: the seed of a sub-stream depends only on
 * (master seed, run index, purpose), never on how many runs were executed
 * before it or on which thread.
 */
std::uint64_t DeriveSeed(std::uint64_t masterSeed, std::uint64_t runIndex, StreamPurpose purpose);

class RngStream
{
  public:
    explicit RngStream(std::uint64_t seed);

    double Uniform01();
    double Uniform(double lo, double hi);
    /// Integer uniformly drawn from the closed range [lo, hi].
    std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);
    double Normal(double mean, double stddev);
    bool Bernoulli(double p);

    std::uint64_t Seed() const
    {
        return m_seed;
    }

  private:
    std::uint64_t m_seed;
    std::mt19937_64 m_engine;
};

} // namespace rachsim

#endif // RACHSIM_RANDOM_H
