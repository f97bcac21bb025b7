#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "microstat/error.hpp"
#include "microstat/image.hpp"

namespace microstat {

enum class DiskVariant { Impenetrable, Overlapping };

/// Order in which the radius multiset is placed.
enum class PlacementOrder {
    Shuffled,     // uniformly shuffled multiset
    LargestFirst, // descending radius; dense impenetrable packings need it
};

std::string_view placement_order_name(PlacementOrder order);
PlacementOrder parse_placement_order(std::string_view name);

/// Polydisperse disks in a periodic L x L square. Radii follow a discrete
/// folded-normal law over r_t = r_min + t, t = 0 .. r_max - r_min.
struct DiskMaterialSpec
{
    DiskVariant variant = DiskVariant::Overlapping;
    int disk_count = 640;
    /// Count the rounded radius histogram is evaluated at; 0 means disk_count.
    /// Area-rescaled materials keep the full-scale count here and take a
    /// proportional share of its radius multiset.
    int reference_count = 0;
    PlacementOrder order = PlacementOrder::Shuffled;
    int r_min = 1;
    int r_max = 250;
    double mu = 50.0;
    double sigma = 60.0;
    int side = 4096;
    std::uint64_t seed = 0;

    void validate() const;
    int histogram_count() const { return reference_count > 0 ? reference_count : disk_count; }
};

/// Uniform 8-bit noise blurred with a normalized Laplacian-of-Gaussian kernel and level-cut.
struct LogMaterialSpec
{
    int kernel_size = 75;
    double threshold = 127.5;
    int side = 4096;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Disk
{
    double x = 0.0;
    double y = 0.0;
    int radius = 0;
};

struct RadiusBin
{
    int radius = 0;
    double expected = 0.0; // I * folded-normal weight, before rounding
    long count = 0;        // nearest integer, ties to even
};

/// Retry budget of candidate centers per disk.
inline constexpr long kPlacementBudget = 1'000'000;

/// Rejection sampling ran out of candidates for one disk.
class PlacementError : public DataError
{
public:
    PlacementError(std::size_t disk_index, std::size_t placed, long attempts);
    std::size_t disk_index() const { return disk_index_; }
    std::size_t placed() const { return placed_; }
    long attempts() const { return attempts_; }

private:
    std::size_t disk_index_;
    std::size_t placed_;
    long attempts_;
};

/// Round to nearest integer; exact .5 ties go to the even neighbour.
long round_half_even(double value);

/// Per-bin radius counts round(I * sqrt(2/(pi sigma^2)) exp(-(r^2+mu^2)/(2 sigma^2)) cosh(r mu / sigma^2)),
/// with I = spec.histogram_count().
std::vector<RadiusBin> radius_histogram(const DiskMaterialSpec& spec);

/// Radius multiset handed to the placement loop.
struct RadiusDraw
{
    std::vector<int> radii;   // placement order; its size is the achieved disk count
    long histogram_total = 0; // sum of rounded bin counts at the reference count
};

/**
 * Expands the rounded histogram into a radius multiset and shuffles it with
 * the spec's seed, or sorts it for LargestFirst. The achieved count is the histogram total, which need not
 * equal I. With a reference count I_ref != I the multiset is scaled by
 * I / I_ref: whole copies of the histogram plus a random subset without
 * replacement. Throws DataError if the histogram rounds to zero disks.
 */
RadiusDraw draw_radii(const DiskMaterialSpec& spec);

/// Sets every pixel whose center (n + 1/2, m + 1/2) lies within r_i of a disk
/// center, wrapping periodically in both axes.
BinaryImage rasterize_disks(int side, const std::vector<Disk>& disks);

/// Squared periodic minimum-image distance between two centers.
double periodic_distance_sq(const Disk& a, const Disk& b, double side);

struct DiskPacking
{
    BinaryImage image;
    std::vector<Disk> disks;
    RadiusDraw draw;
};

/// Random sequential placement under the variant's pairwise distance constraint.
DiskPacking place_disks(const DiskMaterialSpec& spec);

/// Normalized b x b LoG weights, row-major, offsets -b/2 .. b/2.
std::vector<double> log_kernel(int kernel_size);

/// Row-major L x L intensities in [0, 255], drawn from the seeded stream.
std::vector<std::uint8_t> uniform_noise(int side, std::uint64_t seed);

/// Periodic convolution of the spec's noise with the LoG kernel.
std::vector<double> log_blurred_field(const LogMaterialSpec& spec);

BinaryImage generate_log(const LogMaterialSpec& spec);

using MaterialSpec = std::variant<DiskMaterialSpec, LogMaterialSpec>;

/// Named materials: id, od (disk counts rescaled by area from 4096^2; id is
/// placed largest first),
/// logk1/logk2/logk3 (b = 75, a0 = 127.50 / 127.00 / 126.75).
MaterialSpec material_preset(std::string_view name, int side);

struct GeneratedMaterial
{
    BinaryImage image;
    std::vector<Disk> disks;
    RadiusDraw draw;
};

GeneratedMaterial generate_material(MaterialSpec spec, std::uint64_t seed);

} // namespace microstat
