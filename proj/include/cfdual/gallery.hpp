#pragma once

#include "cfdual/expr.hpp"
#include "cfdual/frontal.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cfdual {

struct GalleryParam {
    std::string name;
    std::string type;
    std::string default_value;
    std::string description;
};

struct GalleryEntry {
    std::string name;
    std::string description;
    std::size_t min_dim;
    std::string default_box;
    std::vector<GalleryParam> params;
};

/// Built-in examples in a fixed order.
const std::vector<GalleryEntry>& gallery_list();

struct GalleryParams {
    std::optional<Expr> sigma;  // conformal_graph
    double radius = 0.6;        // clifford_ball: S²(r) × S^{n-2}(√(1-r²))
    double scale = 0.8;         // clifford_ball: ρ, image radius inside the unit ball
    int orientation = -1;       // clifford_ball: sign of the unit normal
    std::optional<Box> box;
};

/// Throws std::invalid_argument for an unknown name, a dimension below the
/// entry's minimum, or invalid parameters.
FrontalPair gallery(std::string_view name, std::size_t n, const GalleryParams& params = {});

/// Inverse stereographic projection R^m -> S^m ⊂ R^{m+1} on jets.
std::vector<Jet> inverse_stereographic(std::span<const Jet> u);

/// x = e^σ (1, p) over the stereographic chart of S^n with its explicit dual
/// ỹ = (e^{-σ}/2) ((-1, p) - |dσ|² (1, p) - 2 (0, α)), α = Σ g^{jk} σ_j ∂_k p.
FrontalPair conformal_graph(const Expr& sigma, std::size_t n, std::optional<Box> box = {});

} // namespace cfdual
