#pragma once

// Inner loops of the Monte Carlo oracle. Each kernel has a scalar reference
// implementation and, on x86-64, an AVX2/FMA variant; the variant is picked
// once at runtime from the CPU features and can be forced with the
// MMW_ASEP_KERNEL environment variable (scalar | avx2 | auto).
//
// The two variants agree to rounding level but not bit for bit, so Monte
// Carlo results are reproducible for a fixed kernel choice.

#include <cstddef>

namespace mmw::kernels {

/// Per-trial constants for turning uniforms into interferer contributions.
struct InterfererParams {
  double r0_sq = 0;          // squared serving distance (inner radius)
  double span_sq = 0;        // window^2 - r0^2
  double ball_sq = 0;        // R_B^2; +inf when every interferer is LOS
  double half_alpha_los = 0;
  double half_alpha_nlos = 0;
  double cum_mm = 0;         // P(MM)
  double cum_mm_mix = 0;     // P(MM) + P(Mm)
  double amplitude[3] = {};  // sqrt(G E0 sigma0) for MM, Mm, mm
};

/// Structure-of-arrays view of the five uniforms drawn per interferer.
struct InterfererDraws {
  const double* radius;
  const double* gain_class;
  const double* magnitude;
  const double* phase;
  const double* symbol;
};

/// Sum over interferers of sqrt(G_i E0) r_i^{-alpha_i} |h_i| cos(phi_i + psi_i):
///   r^2 = r0^2 + u_r span, |h| = sqrt(-sigma0 ln u_m), phase 2 pi (u_p + u_s).
using InterferenceSumFn = double (*)(const InterfererParams& p, const InterfererDraws& d,
                                     std::size_t n);
/// sum_k cos(scale * v[k]).
using CosineSumFn = double (*)(double scale, const double* v, std::size_t n);

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  InterferenceSumFn interference_sum;
  CosineSumFn cosine_sum;
};

const KernelTable& scalar_kernels();
/// nullptr when the AVX2 variant was not built or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();
bool avx2_supported();

/// Kernel table chosen from MMW_ASEP_KERNEL and the CPU.
/// Throws ParameterError for an unknown or unavailable selection.
const KernelTable& active_kernels();
const KernelTable& select_kernels(const char* request);

/// Single-interferer contribution, shared by the scalar kernel and the
/// vector kernels' remainder loops.
double interferer_term(const InterfererParams& p, double u_radius, double u_class,
                       double u_magnitude, double u_phase, double u_symbol);

}  // namespace mmw::kernels
