// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/random.h"

#include <doctest.h>

#include <set>

using namespace rachsim;

TEST_CASE("SplitMix64 reproduces the reference sequence")
{
    std::uint64_t state = 1234567;
    CHECK(SplitMix64(state) == 6457827717110365317ULL);
    CHECK(SplitMix64(state) == 3203168211198807973ULL);
    CHECK(SplitMix64(state) == 9817491932198370423ULL);

    std::uint64_t zero = 0;
    CHECK(SplitMix64(zero) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("seed derivation matches frozen values")
{
    // Values from an independent re-implementation of the derivation.
    CHECK(DeriveSeed(1, 0, StreamPurpose::Placement) == 0x7f20a471451fc262ULL);
    CHECK(DeriveSeed(1, 0, StreamPurpose::Shadowing) == 0x07d0084250afd43fULL);
    CHECK(DeriveSeed(1, 1, StreamPurpose::Placement) == 0xa1116bbd0ddebd14ULL);
    CHECK(DeriveSeed(42, 3, StreamPurpose::Detection) == 0xdd33f7e6ac4a37a2ULL);
}

TEST_CASE("derived seeds are distinct and order independent")
{
    std::set<std::uint64_t> seeds;
    for (std::uint64_t run = 0; run < 100; ++run)
    {
        for (auto p : {StreamPurpose::Placement, StreamPurpose::Shadowing, StreamPurpose::Access,
                       StreamPurpose::Detection})
        {
            seeds.insert(DeriveSeed(7, run, p));
        }
    }
    CHECK(seeds.size() == 400);
    const auto late = DeriveSeed(7, 99, StreamPurpose::Access);
    CHECK(DeriveSeed(7, 99, StreamPurpose::Access) == late);
}

TEST_CASE("RngStream draws")
{
    RngStream rng(5);
    CHECK(rng.Seed() == 5);
    bool sawLo = false;
    bool sawHi = false;
    for (int i = 0; i < 2000; ++i)
    {
        auto v = rng.UniformInt(0, 3);
        REQUIRE(v >= 0);
        REQUIRE(v <= 3);
        sawLo |= v == 0;
        sawHi |= v == 3;
        double u = rng.Uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    CHECK(sawLo);
    CHECK(sawHi);
    CHECK(rng.UniformInt(4, 4) == 4);
    CHECK(rng.Normal(1.5, 0.0) == 1.5);
    CHECK_FALSE(rng.Bernoulli(0.0));
    CHECK(rng.Bernoulli(1.0));

    RngStream a(99);
    RngStream b(99);
    for (int i = 0; i < 10; ++i)
    {
        CHECK(a.Normal(0, 8) == b.Normal(0, 8));
    }
}
