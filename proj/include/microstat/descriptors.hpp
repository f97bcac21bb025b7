#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "microstat/image.hpp"

namespace microstat {

/// How offsets that leave the image are treated while sampling.
enum class Boundary {
    Periodic,    // wrap around; generated materials
    Nonperiodic, // drop pairs/segments that cross the border; micrographs
};

std::string_view boundary_name(Boundary b);
Boundary parse_boundary(std::string_view name);

/// Index beta of the normalized descriptor family.
enum class Descriptor : int {
    Autocovariance = 1, // chi*
    LinealPath = 2,     // L*
    PoreSize = 3,       // P*
};

inline constexpr std::array<Descriptor, 3> kDescriptors{Descriptor::Autocovariance, Descriptor::LinealPath,
                                                        Descriptor::PoreSize};

std::string_view descriptor_name(Descriptor beta);

/// Largest sampled distance on an image, floor(min(M, N) / 2), in its own pixels.
std::size_t range_limit(const BinaryImage& img);

/// Integer numerators and denominators of a probability sampled at r = 0 .. N+.
struct SampleCounts
{
    std::vector<std::uint64_t> hits;
    std::vector<std::uint64_t> trials;

    double probability(std::size_t l) const
    {
        return static_cast<double>(hits[l]) / static_cast<double>(trials[l]);
    }
};

/// Ordered same-phase pixel pairs at axial offset r (rows and columns).
SampleCounts two_point_counts(const BinaryImage& img, Phase j, Boundary boundary = Boundary::Periodic);

/// S2(r_l), l = 0 .. N+. S2(0) = phi_j.
std::vector<double> two_point_correlation(const BinaryImage& img, Phase j, Boundary boundary = Boundary::Periodic);

/// Axial segments of r + 1 consecutive pixels lying wholly in phase j.
SampleCounts lineal_path_counts(const BinaryImage& img, Phase j, Boundary boundary = Boundary::Periodic);

/// Exact squared Euclidean distance from every phase-j pixel to the nearest
/// pixel of the other phase (0 on other-phase pixels). Periodic distances
/// use the minimum image. Pixels with no reachable interface hold UINT64_MAX.
std::vector<std::uint64_t> interface_distance_sq(const BinaryImage& img, Phase j,
                                                 Boundary boundary = Boundary::Periodic);

/// Pore-size bin of a squared pixel distance. The interface sits half a
/// pixel from the boundary pixel center, so bin l collects distances
/// d - 1/2 in [l, l + 1).
std::size_t pore_size_bin(std::uint64_t distance_sq);

/// Counts of phase-j pixels per pore-size bin, l = 0 .. N+ (larger distances dropped).
std::vector<std::uint64_t> pore_size_histogram(const BinaryImage& img, Phase j,
                                               Boundary boundary = Boundary::Periodic);

/// Differing 4-neighbour pairs per unit area, in full-resolution pixel units
/// (divided by the image's pixel size).
double specific_interface_area(const BinaryImage& img, Boundary boundary = Boundary::Periodic);

/**
 * One normalized descriptor F_{beta,j,k} on the distances r = L_k * l,
 * l = 0 .. N+ (full-resolution pixels). values[0] is 1 whenever the curve is
 * defined. A curve of a phase that vanished from a decimated image is kept
 * with defined = false and all values zero.
 */
struct DescriptorCurve
{
    Descriptor beta = Descriptor::Autocovariance;
    Phase phase = Phase::Void;
    int step = 0;
    std::size_t pixel_size = 1;
    std::vector<double> distances;
    std::vector<double> values;
    double phi = 0.0;
    double s_over_phi = 0.0;
    bool defined = true;

    std::size_t range_limit() const { return values.empty() ? 0 : values.size() - 1; }
};

/// chi*_j(r) = (S2(r) - phi^2) / (phi (1 - phi)). Throws NumericError when phi_j is 0 or 1.
DescriptorCurve autocovariance_normalized(const BinaryImage& img, Phase j, Boundary boundary = Boundary::Periodic);

/// L*_j(r) = L_j(r) / phi_j. Throws NumericError when phi_j = 0.
DescriptorCurve lineal_path_normalized(const BinaryImage& img, Phase j, Boundary boundary = Boundary::Periodic);

/// P*_j(r) = P_j(r) / P_j(0). Throws NumericError unless both phases are present.
DescriptorCurve pore_size_normalized(const BinaryImage& img, Phase j, Boundary boundary = Boundary::Periodic);

DescriptorCurve normalized_descriptor(const BinaryImage& img, Descriptor beta, Phase j,
                                      Boundary boundary = Boundary::Periodic);

/// All six curves of an image plus its scalars. Never throws on single-phase
/// images; undefined curves are flagged instead.
struct DescriptorSet
{
    std::array<double, 2> phi{};
    double s = 0.0;
    std::array<DescriptorCurve, 6> curves;

    static constexpr std::size_t slot(Descriptor beta, Phase j)
    {
        return static_cast<std::size_t>((static_cast<int>(beta) - 1) * 2 + index(j));
    }
    const DescriptorCurve& at(Descriptor beta, Phase j) const { return curves[slot(beta, j)]; }
    DescriptorCurve& at(Descriptor beta, Phase j) { return curves[slot(beta, j)]; }
};

DescriptorSet compute_descriptors(const BinaryImage& img, Boundary boundary = Boundary::Periodic);

struct CoarsenessPoint
{
    std::size_t window = 1; // side of the observation window, full-resolution pixels
    double value = 1.0;     // C* = sigma(window) / sqrt(phi0 phi1)
};

/// Variance of the local fraction of phase j over tiled window x window blocks.
double local_fraction_variance(const BinaryImage& img, std::size_t window, Phase j);

/// Normalized coarseness over tiled 2^k x 2^k blocks of a full-resolution image.
CoarsenessPoint coarseness(const BinaryImage& img, int k);

} // namespace microstat
