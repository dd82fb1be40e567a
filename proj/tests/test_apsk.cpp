#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>

#include "aerotel/apsk.hpp"

using namespace aerotel;

namespace {
const ApskConstellation kC = build_16apsk(2.46, pi / 12.0);
}

TEST_CASE("ring radii for gamma 2.46 and unit symbol energy") {
    CHECK(kC.r1 == Catch::Approx(0.4569736776348049).epsilon(1e-12));
    CHECK(kC.r2 == Catch::Approx(1.12415524698162).epsilon(1e-12));
    CHECK(kC.symbol_energy() == Catch::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(build_16apsk(1.0, pi / 12.0), std::domain_error);
    CHECK_THROWS_AS(build_16apsk(0.5, pi / 12.0), std::domain_error);
}

TEST_CASE("constellation geometry: rings, distinctness, minimum distance") {
    for (int label = 0; label < 12; ++label)
        CHECK(std::abs(kC.points[label]) == Catch::Approx(kC.r2).epsilon(1e-12));
    for (int label = 12; label < 16; ++label)
        CHECK(std::abs(kC.points[label]) == Catch::Approx(kC.r1).epsilon(1e-12));

    double dmin = 10.0;
    for (int a = 0; a < 16; ++a)
        for (int b = a + 1; b < 16; ++b)
            dmin = std::min(dmin, std::abs(kC.points[a] - kC.points[b]));
    CHECK(dmin == Catch::Approx(0.58190557514154195).epsilon(1e-12));
}

TEST_CASE("demap inverts map on exact points") {
    std::vector<std::uint8_t> bits;
    for (int label = 0; label < 16; ++label)
        for (int b = 3; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((label >> b) & 1));
    const auto symbols = map_bits(bits, kC);
    REQUIRE(symbols.size() == 16);
    const std::set<std::pair<double, double>> uniq = [&] {
        std::set<std::pair<double, double>> s;
        for (const auto& p : symbols) s.insert({p.real(), p.imag()});
        return s;
    }();
    CHECK(uniq.size() == 16);  // bijection
    CHECK(demap_hard(symbols, kC) == bits);
}

TEST_CASE("round trip survives small perturbations") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> uni(-0.01, 0.01);
    std::vector<std::uint8_t> bits(4000);
    for (auto& b : bits) b = static_cast<std::uint8_t>(gen() & 1u);
    auto symbols = map_bits(bits, kC);
    for (auto& s : symbols) s += cplx(uni(gen), uni(gen));
    CHECK(demap_hard(symbols, kC) == bits);
}

TEST_CASE("ties resolve to the lowest label") {
    // outer-ring angle indices 0 and 1 belong to labels 4 and 0; their
    // midpoint is equidistant from both, so the decision must pick label 0
    const cplx mid = 0.5 * (kC.points[4] + kC.points[0]);
    const auto bits = demap_hard({mid}, kC);
    unsigned label = 0;
    for (int b = 0; b < 4; ++b) label = (label << 1) | bits[static_cast<std::size_t>(b)];
    CHECK(label == 0);
}

TEST_CASE("bit-count validation") {
    CHECK_THROWS_AS(map_bits({1, 0, 1}, kC), std::domain_error);
    CHECK(map_bits({}, kC).empty());
}

TEST_CASE("noise scaling from Eb/N0") {
    CHECK(ebn0_to_n0(0.0, kC) == Catch::Approx(0.25).epsilon(1e-12));
    CHECK(ebn0_to_n0(10.0, kC) == Catch::Approx(0.025).epsilon(1e-12));
    CHECK(ebn0_to_n0(0.0, kC, 2.0) == Catch::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(ebn0_to_n0(0.0, kC, 0.0), std::domain_error);
    CHECK_THROWS_AS(ebn0_to_n0(0.0, kC, -1.0), std::domain_error);
}

TEST_CASE("hard decisions at moderate noise stay near the union bound regime") {
    // coarse SNR probe: at 10 dB the hard-decision symbol environment is
    // noisy enough that some errors occur over 4e4 symbols, but BER stays
    // far below 10%; guards against grossly wrong radii or labels
    std::mt19937_64 gen(17);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double n0 = ebn0_to_n0(10.0, kC);
    const double sigma = std::sqrt(n0);
    std::vector<std::uint8_t> bits(4 * 40000);
    for (auto& b : bits) b = static_cast<std::uint8_t>(gen() & 1u);
    auto symbols = map_bits(bits, kC);
    for (auto& s : symbols) s += sigma * cplx(gauss(gen), gauss(gen));
    const auto hat = demap_hard(symbols, kC);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) errors += bits[i] != hat[i];
    const double ber = static_cast<double>(errors) / static_cast<double>(bits.size());
    CHECK(ber > 1e-4);
    CHECK(ber < 0.1);
}
