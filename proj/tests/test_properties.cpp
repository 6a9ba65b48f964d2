#include <gtest/gtest.h>

#include "properties.hpp"

using namespace tctest;

// Reduced-size runs of the acceptance property suites on different seeds.

TEST(Properties, InitStability)
{
    auto rep = init_stability_property(300, 101);
    EXPECT_TRUE(rep.ok()) << rep.first;
}

TEST(Properties, ProductVariety)
{
    auto rep = product_variety_property(300, 202);
    EXPECT_TRUE(rep.ok()) << rep.first;
}

TEST(Properties, FlagsAndPrimes)
{
    auto rep = flag_property(150, 303);
    EXPECT_TRUE(rep.ok()) << rep.first;
}

TEST(Properties, RadicalMemberOracle)
{
    auto rep = radical_oracle_property(120, 404);
    EXPECT_TRUE(rep.ok()) << rep.first;
}

TEST(Properties, DerivationRoundTrip)
{
    Gen gen(505);
    auto e = load_congruence("nokerprime2/congruence.json");
    for (int k = 0; k < 100; ++k) {
        Derivation d;
        d.steps.push_back(Step{Step::Kind::Generator, static_cast<std::size_t>(gen.integer(0, 3)), 0, std::nullopt});
        for (int s = 0; s < 4; ++s) {
            std::size_t last = d.steps.size() - 1;
            switch (gen.integer(0, 2)) {
            case 0: d.steps.push_back(Step{Step::Kind::Sym, last, 0, std::nullopt}); break;
            case 1: d.steps.push_back(Step{Step::Kind::AddBoth, last, 0, gen.poly(e.ctx, 2)}); break;
            default: d.steps.push_back(Step{Step::Kind::MulMono, last, 0, gen.poly(e.ctx, 1)});
            }
        }
        auto target = replay(e, d);
        ASSERT_TRUE(target);
        json j = io::write(d);
        auto back = io::read_derivation(io::Node(j, "d"), e.ctx);
        EXPECT_TRUE(verify_derivation(e, back, *target));
        // Every derived pair lies in the radical.
        EXPECT_TRUE(radical_member(e, *target));
    }
}
