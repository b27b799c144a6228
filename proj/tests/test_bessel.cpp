#include "oneshot/bessel.hpp"
#include "oneshot/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

using oneshot::bessel_y0;

namespace {

// Straight 64-term evaluation of the log + power series in long double.
long double y0_series64(long double x) {
    const long double q = x * x / 4;
    long double term = 1, j0 = 1, tail = 0, h = 0;
    for (int k = 1; k <= 64; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        h += 1.0L / k;
        j0 += term;
        tail -= term * h;
    }
    const long double egamma = 0.577215664901532860606512090082402431L;
    return 2 / std::numbers::pi_v<long double> * ((std::log(x / 2) + egamma) * j0 + tail);
}

}  // namespace

TEST(BesselY0, ReferenceValues) {
    // 30-digit arbitrary-precision evaluations.
    const std::vector<std::pair<double, double>> table{
        {1e-06, -8.8690314816594437317}, {0.001, -4.4714166113759232557}, {0.1, -1.5342386513503668083},
        {0.5, -0.44451873350670655715},  {0.89, -0.0031519646830523812207}, {0.9, 0.0056283066352055584192},
        {1, 0.088256964215676957983},    {2, 0.5103756726497451196},       {3, 0.37685001001279038197},
        {4, -0.016940739325064991904},   {5, -0.30851762524903378007},     {6, -0.28819468398157915407},
        {7, -0.025949743967209264884},   {7.5, 0.11731328614820863084},    {7.999, 0.22336330730718529456},
        {8.0, 0.22352148938756622053},   {8.001, 0.22367942818892079442},  {8.25, 0.25514960509864492878},
        {8.5, 0.270205105365787476},     {9, 0.24993669828502467602},      {9.5, 0.17121062620272384487},
        {10, 0.055671167283599391424},   {11, -0.16884732389207954182},    {12, -0.22523731263436143369},
        {15, 0.20546429603891826479},    {20, 0.062640596809383831162},    {25, -0.12724943226800613783},
        {30, -0.11729573168666402525},   {40, 0.12593641705826092925},     {50, -0.098064995470077079029},
        {60, 0.047358952209449399203},   {75, -0.085369047647775609895},   {90, 0.079776475854877762969},
        {100, -0.077244313365083152254},
    };
    for (const auto& [x, y] : table) EXPECT_NEAR(bessel_y0(x), y, 1e-8) << "x=" << x;
}

TEST(BesselY0, SmallArgument) {
    const double x = 1e-4;
    const double lead = 2 / std::numbers::pi * (std::log(x / 2) + std::numbers::egamma);
    EXPECT_NEAR(bessel_y0(x), lead, 1e-3 * std::abs(lead));
}

TEST(BesselY0, FirstZero) {
    double lo = 0.89, hi = 0.90;
    ASSERT_LT(bessel_y0(lo), 0.0);
    ASSERT_GT(bessel_y0(hi), 0.0);
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (bessel_y0(mid) < 0 ? lo : hi) = mid;
    }
    EXPECT_NEAR(lo, 0.8935769662791675, 1e-12);
    EXPECT_NEAR(static_cast<double>(y0_series64(lo)), 0.0, 1e-14);
}

TEST(BesselY0, MatchesSeriesOracleOnSeriesRange) {
    for (double x = 0.01; x <= 8.0; x += 0.0137) {
        EXPECT_NEAR(bessel_y0(x), static_cast<double>(y0_series64(x)), 1e-12) << "x=" << x;
    }
}

TEST(BesselY0, LargeArgumentAsymptotics) {
    const double x = 10.0;
    EXPECT_NEAR(bessel_y0(x), std::sqrt(2 / (std::numbers::pi * x)) * std::sin(x - std::numbers::pi / 4), 2e-2);
}

TEST(BesselY0, ContinuousAcrossSplit) {
    EXPECT_NEAR(bessel_y0(8.0), bessel_y0(std::nextafter(8.0, 9.0)), 1e-8);
}

TEST(BesselY0, RejectsNonPositive) {
    EXPECT_THROW((void)bessel_y0(0.0), oneshot::ValidationError);
    EXPECT_THROW((void)bessel_y0(-1.0), oneshot::ValidationError);
}
