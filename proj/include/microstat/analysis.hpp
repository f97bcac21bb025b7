#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "microstat/decimation.hpp"
#include "microstat/descriptors.hpp"

namespace microstat {

/// Half-width of the band around zero that defines a correlation length,
/// as a fraction of the normalized maximum (1).
inline constexpr double kCorrelationBand = 0.02;

/// Mean squared difference between F_{beta,j,0}(L_k r_{k,l}) and F_{beta,j,k}(L_k r_{k,l}), l = 1 .. N_k+.
double deviation(const DescriptorCurve& reference, const DescriptorCurve& decimated);

/// Sum of the six E_{beta,j,k}, ordered as DescriptorSet::slot.
double global_error(const std::array<double, 6>& deviations);

struct Moments
{
    double mean = 0.0;
    double stddev = 0.0; // population: sqrt(<x^2> - <x>^2)
};

Moments ensemble_moments(std::span<const double> values);

struct CorrelationLength
{
    double length = 0.0; // full-resolution pixels
    bool reached = true; // false: band never entered; length is the last sampled distance
};

/// First sampled distance with |F(r)| <= band.
CorrelationLength correlation_length(const DescriptorCurve& curve, double band = kCorrelationBand);

struct LengthTable
{
    std::array<CorrelationLength, 6> lengths{}; // DescriptorSet::slot order
    double min = 0.0;
    double mean = 0.0;
    double max = 0.0;

    bool all_reached() const;
    const CorrelationLength& at(Descriptor beta, Phase j) const { return lengths[DescriptorSet::slot(beta, j)]; }
};

LengthTable correlation_lengths(const std::array<DescriptorCurve, 6>& curves, double band = kCorrelationBand);

/// Z = floor(min(log2(M0 / M_Z), log2(N0 / N_Z))), M_Z = ceil(3 M0 / ell), clamped at 0.
int optimal_steps(double ell, std::size_t rows0, std::size_t cols0);

/// C*_k for k = 0 .. K on a full-resolution image.
std::vector<CoarsenessPoint> coarseness_trace(const BinaryImage& full_resolution, int max_step);

/// Per-step scalars and deviations of a ladder against its A_0.
struct StepRecord
{
    int step = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t pixel_size = 1;
    std::array<double, 2> phi{};
    double s = 0.0;
    std::array<double, 2> s_over_phi{};
    std::array<double, 6> deviations{};
    double global_error = 0.0;
    bool all_defined = true;
};

struct LadderAnalysis
{
    std::vector<DescriptorSet> descriptors; // one per rung
    std::vector<StepRecord> steps;
};

/// Computes descriptors on every rung and E, global error against rung 0.
/// `reference` may supply precomputed rung-0 descriptors.
LadderAnalysis analyze_ladder(const DecimationLadder& ladder, Boundary boundary,
                              const DescriptorSet* reference = nullptr);

/// Pointwise average of curves sharing beta, phase and distance grid.
DescriptorCurve average_curves(std::span<const DescriptorCurve> curves);

struct AutoDecimateOptions
{
    Boundary boundary = Boundary::Nonperiodic;
    double band = kCorrelationBand;
    /// Extra halvings past Z recorded in the report (not applied to the output).
    int verify_steps = 1;
    /// Trim A_0 to dimensions divisible by 2^Z instead of failing.
    bool crop = false;
};

struct AutoDecimateReport
{
    std::size_t rows0 = 0;
    std::size_t cols0 = 0;
    std::size_t cropped_rows = 0;
    std::size_t cropped_cols = 0;
    LengthTable lengths;
    double ell = 0.0;
    int optimal_step = 0;
    std::vector<StepRecord> steps;             // k = 0 .. Z + verification
    std::vector<CoarsenessPoint> coarseness;   // same k range
    std::vector<DescriptorSet> descriptors;    // same k range
    std::vector<std::string> notices;
};

struct AutoDecimateResult
{
    BinaryImage image; // A_Z
    AutoDecimateReport report;
};

/// Descriptors of A_0, six correlation lengths, ell = min, Z, then Z halvings.
AutoDecimateResult auto_decimate(const BinaryImage& img, const DecimationMethod& method,
                                 const AutoDecimateOptions& options = {});

} // namespace microstat
