#pragma once

#include "cfdual/chart.hpp"
#include "cfdual/jet.hpp"

#include <Eigen/Dense>

#include <span>
#include <string_view>
#include <utility>

namespace cfdual {

/// Vector of L^{n+2}, components (z^0, ..., z^{n+1}), signature (-, +, ..., +).
using MinkVec = Eigen::VectorXd;

enum class Model { LightconePlus, LightconeMinus, Hyperbolic, DeSitter };

std::string_view model_name(Model m) noexcept;

struct ModelPoint {
    MinkVec z;
    Model model;
};

inline constexpr double kModelTolerance = 1e-10;

double mink_inner(const MinkVec& v, const MinkVec& w);
Jet mink_inner(std::span<const Jet> v, std::span<const Jet> w);
/// ⟨∂_i v, w⟩ for every axis i, as a row of numbers.
Eigen::RowVectorXd mink_inner_partials(std::span<const Jet> v, std::span<const Jet> w);
/// Gram matrix ⟨dv_i, dw_j⟩ from an (n+2) × n pair of differentials.
Eigen::MatrixXd mink_gram(const Eigen::MatrixXd& dv, const Eigen::MatrixXd& dw);

/// Distance of z from the model's defining constraints.
double model_residual(const MinkVec& z, Model m);
bool in_model(const MinkVec& z, Model m, double tol = kModelTolerance);
/// Tags z, throwing PreconditionError when it is not in the model.
ModelPoint make_model_point(MinkVec z, Model m, double tol = kModelTolerance);

/// f = (x - y)/√2 ∈ H^{n+1}, ν = (x + y)/√2 ∈ S^{n+1}_1. Requires ⟨x,y⟩ = 1 within 1e-8.
std::pair<ModelPoint, ModelPoint> to_hyperbolic_pair(const ModelPoint& x, const ModelPoint& y);
/// x = (f + ν)/√2 ∈ Q_+, y = -(f - ν)/√2 ∈ Q_-. Requires ⟨f,ν⟩ = 0 within 1e-8.
std::pair<ModelPoint, ModelPoint> to_lightcone_pair(const ModelPoint& f, const ModelPoint& nu);

/// Π_±: rescale to z^0 = ±1. Throws DomainError when z^0 vanishes or has the wrong sign.
MinkVec project_plus(const MinkVec& z);
MinkVec project_minus(const MinkVec& z);

struct GaussMaps {
    MinkVec plus, minus;
};

GaussMaps gauss_maps(const ChartMap& x, const ChartMap& y, std::span<const double> p);

/// Differential of Π_+ ∘ x (or Π_- ∘ y) at p, (n+2) × n.
Eigen::MatrixXd gauss_map_differential(const ChartMap& map, std::span<const double> p);

inline constexpr double kRankTolerance = 1e-8;

/// Number of singular values above tol · σ_1.
int numerical_rank(const Eigen::MatrixXd& m, double tol = kRankTolerance);
/// Rank of a Gram matrix: eigenvalues above tol · λ_max. Eigenvalues carry
/// absolute roundoff near eps · λ_max, so tol² would sit below the noise.
int gram_rank(const Eigen::MatrixXd& gram, double tol = kRankTolerance);
int immersion_rank(const ChartMap& map, std::span<const double> p, double tol = kRankTolerance);

} // namespace cfdual
