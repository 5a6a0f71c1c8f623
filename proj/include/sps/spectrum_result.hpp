// spectrum_result.hpp: Fluorescence spectrum container shared by both engines

#pragma once

#include <map>
#include <string>
#include <vector>

namespace sps {

// S(ω) = 2π coherent_weight δ(ω-ω0) + 2π central_delta_weight δ(ω-ω0) + S_in(ω).
//
// central_delta_weight is the part of the fluctuation correlation that never
// decays (locked coherence, γx = 0); it is an incoherent-part δ peak of weight
// (1/4 - ⟨Sx⟩²) and is kept off the grid unless explicitly rendered.
struct SpectrumResult {
    double coherent_weight{0.0};       // |⟨S⁺⟩s|²
    double central_delta_weight{0.0};  // lim_{τ→∞} ⟨δS⁺(0)δS⁻(τ)⟩
    std::vector<double> omega_grid;    // ω - ω0, GHz
    std::vector<double> incoherent;    // S_in, 1/GHz
    std::string engine;
    std::map<std::string, std::string> metadata;

    double peak() const;
};

// Relative sup-norm: max|a-b| / max|b|. Grids must match.
double relative_sup_distance(const SpectrumResult& a, const SpectrumResult& reference);

} // namespace sps
