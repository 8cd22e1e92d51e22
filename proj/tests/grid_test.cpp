#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "modop/error.hpp"
#include "modop/grid.hpp"

using namespace modop;

TEST(Grid, SpacingsFromDefinition) {
    const Grid g = Grid::make(1, 10.0, 256);
    EXPECT_DOUBLE_EQ(g.axis(0).spacing(), 0.078125);
    EXPECT_NEAR(g.axis(0).freq_spacing(), std::numbers::pi / 10.0, 1e-15);

    const Grid h = Grid::make(1, std::numbers::pi, 8);
    EXPECT_NEAR(h.axis(0).spacing(), std::numbers::pi / 4, 1e-15);
    EXPECT_NEAR(h.axis(0).freq_spacing(), 1.0, 1e-15);
}

TEST(Grid, RejectsBadArguments) {
    EXPECT_THROW(Grid::make(1, 10.0, 255), InvalidArgument);
    EXPECT_THROW(Grid::make(1, 0.0, 256), InvalidArgument);
    EXPECT_THROW(Grid::make(1, -1.0, 256), InvalidArgument);
    EXPECT_THROW(Grid::make(3, 1.0, 16), InvalidArgument);
    EXPECT_THROW(Grid::make(1, 1.0, 6), InvalidArgument);
}

TEST(Grid, DualityProductIsTwoPi) {
    for (double L : {0.5, 1.0, std::numbers::pi, 7.3, 100.0}) {
        for (int N : {8, 10, 32, 100, 256, 1000}) {
            const Axis a = Grid::make(1, L, N).axis(0);
            EXPECT_NEAR(a.spacing() * a.freq_spacing() * N, 2 * std::numbers::pi, 1e-12);
            EXPECT_NEAR(a.dual().spacing(), a.freq_spacing(), 1e-12);
        }
    }
}

TEST(Grid, PointsIncreasingAndContainZero) {
    const Grid g = Grid::make(1, 3.0, 12);
    const auto xs = g.coordinates(0);
    EXPECT_DOUBLE_EQ(xs.front(), -3.0);
    for (std::size_t k = 1; k < xs.size(); ++k) EXPECT_GT(xs[k], xs[k - 1]);
    EXPECT_NEAR(xs[6], 0.0, 1e-15);
    // symmetric up to the one-sided endpoint
    for (std::size_t k = 1; k < 6; ++k) EXPECT_NEAR(xs[6 + k], -xs[6 - k], 1e-14);

    const auto xis = g.dual().coordinates(0);
    EXPECT_NEAR(xis.front(), -std::numbers::pi / g.axis(0).spacing(), 1e-12);
    EXPECT_NEAR(xis[6], 0.0, 1e-14);
}

TEST(Grid, DualOfDualAndProducts) {
    const Grid g = Grid::make(2, 4.0, 16);
    EXPECT_EQ(g.dual().dual(), g);
    EXPECT_EQ(g.size(), 256u);
    const Grid p = g.product(g.dual());
    EXPECT_EQ(p.dim(), 4);
    EXPECT_EQ(p.slice(2, 2), g.dual());
    EXPECT_NEAR(p.cell_volume(), std::pow(2 * std::numbers::pi / 16, 2), 1e-14);
}

TEST(Grid, FlatIndexRoundTrip) {
    const Grid g = Grid::make(2, 1.0, 8);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(g.flat(g.unravel(k)), k);
    // axis 0 is the slow index
    EXPECT_EQ(g.unravel(8)[0], 1);
    EXPECT_EQ(g.unravel(8)[1], 0);
}

TEST(Grid, ConfigRoundTrip) {
    const Grid g = Grid::make(2, 2.5, 40);
    EXPECT_EQ(grid_from_config(to_config(g)), g);
    EXPECT_EQ(grid_from_config("dim = 1\nhalf_width = 10\npoints = 256\n"), Grid::make(1, 10, 256));
    EXPECT_THROW(grid_from_config("dim = 1\npoints = 256\n"), InvalidArgument);
}

TEST(Grid, SampledValuesMustBeFinite) {
    const Grid g = Grid::make(1, 1.0, 8);
    std::vector<cplx> v(8, 1.0);
    v[3] = std::nan("");
    EXPECT_THROW(SampledFunction(g, v), InvalidArgument);
    EXPECT_THROW(SampledFunction(g, std::vector<cplx>(7)), InvalidArgument);
    EXPECT_THROW(PhaseSpaceField(g, g.dual(), std::vector<cplx>(63)), InvalidArgument);
}

TEST(Grid, PhaseSpaceFieldViews) {
    const Grid g = Grid::make(1, 1.0, 8);
    PhaseSpaceField F(g, g.dual());
    F.at(2, 5) = cplx{1.0, -2.0};
    const SampledFunction f = F.as_function();
    EXPECT_EQ(f.grid, g.product(g.dual()));
    EXPECT_EQ(f.values[2 * 8 + 5], cplx(1.0, -2.0));
    const PhaseSpaceField back = PhaseSpaceField::from_function(f, 1);
    EXPECT_EQ(back.values, F.values);
}
