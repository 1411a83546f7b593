#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmhd/grid.hpp"
#include "cmhd/multipliers.hpp"
#include "cmhd/spectral_field.hpp"

namespace cmhd::diag {

/// Regularity levels N, N' = N-4-2n, N'' = N-9-3n, Ntilde = N'+2+n.
struct RegularityLadder {
  int n = 1;
  int N = 14;
  int Nprime = 8;
  int Nsecond = 2;
  int Ntilde = 11;

  /// N defaults to the smallest admissible value 11 + 3n.
  static RegularityLadder from_n(int n, int N = -1);
};

/// Physical parameters needed to undo the Elsasser transport.
struct FlowParams {
  double nu = 1e-3;
  double alpha = 1.0;
  double sigma = 1.4142135623730951;
  double delta = 0.01;

  [[nodiscard]] weights::MultiplierParams multipliers() const { return {nu, delta}; }
};

/// U = (T_{-a} Z+ + T_{+a} Z-)/2, B = (T_{+a} Z- - T_{-a} Z+)/2,
/// F^pm = Delta_L Z^pm, Q = Delta_L U, H = Delta_L B.
struct DerivedUnknowns {
  double t = 0;
  VectorField U, B, Fp, Fm, Q, H;
};

DerivedUnknowns derived_unknowns(const ElsasserState& state, const FlowParams& p);

enum class XPart { all, zero, nonzero };

/// Extra symbol applied before the norm: |grad_{X,Z}| = sqrt(k^2+l^2),
/// |Delta_{X,Z}| = k^2 + l^2, or the original-frame <nabla> using k_t.
enum class Symbol { none, grad_xz, lap_xz };

struct NormSpec {
  weights::WeightName weight = weights::WeightName::unit;
  double s = 0;
  XPart part = XPart::all;
  Symbol symbol = Symbol::none;
  bool original_frame = false;  // <|k|+|eta-kt|+|l|> instead of <|k|+|eta|+|l|>
};

/// sqrt(sum over modes of w(t,mode)^2 <|k|+|eta|+|l|>^{2s} |c|^2), summed
/// over all listed fields. Weights are evaluated mode by mode.
double weighted_sobolev_norm(const std::vector<const SpectralField*>& fields, const NormSpec& spec,
                             const weights::MultiplierParams& mp, double t);
double weighted_sobolev_norm(const SpectralField& field, const NormSpec& spec,
                             const weights::MultiplierParams& mp, double t);

/// Fraction of the energy of Z^pm in the outer third of the retained band.
double tail_fraction(const ElsasserState& state);

struct DiagnosticsRecord {
  double t = 0;
  double hn_F1_tilde = 0;    // max_pm ||Atilde F^{pm,1}_ne||_{H^N}
  double hn_F3 = 0;          // max_pm ||A F^{pm,3}_ne||_{H^N}
  double hn_H2 = 0;          // ||A H^2_ne||_{H^N}
  double hn_Q2 = 0;          // ||A Q^2_ne||_{H^N}
  double hn_zero = 0;        // ||(H_0, Q_0)||_{H^N}
  double int_F2_Ntil = 0;    // max_pm ||Jtilde F^{pm,2}_ne||_{H^Ntilde}
  double int_F2_Nprime = 0;  // max_pm ||J F^{pm,2}_ne||_{H^N'}
  double low_F1 = 0;         // max_pm ||Atilde F^{pm,1}_ne||_{H^N''}
  double low_F3 = 0;         // max_pm ||A F^{pm,3}_ne||_{H^N''}
  double zero_ub = 0;        // ||(u_0, b_0)||_{H^N}
  double ub_low = 0;         // ||(U, B)||_{H^N''}
  double ub_low_orig = 0;    // ||(u, b)||_{H^N''} in the original frame
  double damp_grad = 0;      // <t> ||grad_{X,Z}(U^2,B^2)_ne||_{H^{N'-1}}
  double damp_route2 = 0;    // max_{G=Q,H} ||m^{1/2} M G^2_ne||_{H^N'}
  double ed_lap = 0;         // ||Delta_{X,Z}(U^2,B^2)_ne||_{H^N}
  double energy = 0;         // ||(U,B)||_{L^2}^2
  double divergence = 0;     // max |k_t . Z^pm| / |k_t|
  double tail = 0;           // tail_fraction

  static const std::vector<std::string>& columns();
  [[nodiscard]] std::vector<double> values() const;
};

DiagnosticsRecord record(const ElsasserState& state, const RegularityLadder& ladder, const FlowParams& p);

/// Physical (u, b) at time t on the grid points, u(t,x,y,z) = U(t, x - y t, y, z).
/// Order: u1 u2 u3 b1 b2 b3, each in the [ix][iy][iz] layout.
std::array<std::vector<double>, 6> map_to_original_frame(const ElsasserState& state, const FlowParams& p);
/// Inverse of map_to_original_frame for dealiased states.
ElsasserState map_from_original_frame(const Grid& grid, const std::array<std::vector<double>, 6>& ub, double t,
                                      const FlowParams& p);

/// The six-term right-hand side of the F^{pm,2} evolution equation.
/// Returns (rhs+, rhs-) as spectral fields.
std::array<SpectralField, 2> reform2_rhs(const ElsasserState& state, const FlowParams& p);

struct ResidualReport {
  double residual = 0;         // ||dF/dt - rhs|| / ||dF/dt||
  double nonlinear_share = 0;  // ||nonlinear part of rhs|| / ||rhs||
};

/// Compares the central difference (after - before)/(2h) of F^{pm,2}
/// against reform2_rhs(mid).
ResidualReport reform2_residual(const ElsasserState& before, const ElsasserState& mid, const ElsasserState& after,
                                const FlowParams& p);

void write_csv(const std::vector<DiagnosticsRecord>& series, const std::string& path);
std::vector<DiagnosticsRecord> read_csv(const std::string& path);

/// First time after which `values` has dropped below e^{-1} times its running
/// maximum; NaN if it never does.
double efolding_time(const std::vector<double>& t, const std::vector<double>& values);

nlohmann::json summary_json(const std::vector<DiagnosticsRecord>& series);

}  // namespace cmhd::diag
