// Certifies a Schottky block plus a trivial block and prints the
// deformation domain slab for a few short classes.

#include <cstdio>
#include <iostream>

#include "anosov/anosov.hpp"

int main() {
    using namespace anosov;
    const FreeGroup f2(2);
    const Decomposition dec({2, 1});

    MatR a = MatR::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 1.0 / 3.0;
    a(2, 2) = 1.0;
    MatR b = MatR::Zero(3, 3);
    b << 5.0 / 3, 4.0 / 3, 0, 4.0 / 3, 5.0 / 3, 0, 0, 0, 1;
    const RepSpec<double> zeta(f2, dec, {a, b}, Structure::block_normalized);

    const ThetaSet theta(3, {1, 2});
    const CertReport report = certify(zeta, theta, 8);
    std::cout << "verdict: " << to_string(report.verdict) << "\n";
    if (report.unique_config) std::cout << "config:  " << report.unique_config->to_string() << "\n";
    for (const auto& s : report.stats) std::cout << "k=" << s.k << " min gap/length " << s.min_ratio << "\n";

    const DomainApprox dom = constraints(zeta, theta, 4);
    const HalfSpaces irr = remove_redundant(dom.halfspaces);
    std::cout << "A_4: " << dom.halfspaces.size() << " half-spaces, " << irr.size() << " irredundant, bounded "
              << (is_bounded(irr) ? "yes" : "no") << "\n";
    for (const auto& h : irr) {
        std::printf("  %+5.1f %+5.1f . t < %.6f   (%s)\n", h.coeffs[0], h.coeffs[1], h.bound, h.provenance.word.c_str());
    }
    return 0;
}
