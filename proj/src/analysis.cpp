#include "microstat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "microstat/error.hpp"

namespace microstat {

double deviation(const DescriptorCurve& reference, const DescriptorCurve& decimated)
{
    if (reference.beta != decimated.beta || reference.phase != decimated.phase)
        throw DataError("deviation compares different descriptors");
    if (reference.pixel_size == 0 || decimated.pixel_size % reference.pixel_size != 0)
        throw DataError("distance grid mismatch: pixel size " + std::to_string(decimated.pixel_size) +
                        " is not a multiple of the reference " + std::to_string(reference.pixel_size));
    const std::size_t stride = decimated.pixel_size / reference.pixel_size;
    const std::size_t count = decimated.range_limit();
    if (count == 0)
        return 0.0;
    if (stride * count > reference.range_limit())
        throw DataError("distance grid mismatch: reference stops at r = " +
                        std::to_string(reference.range_limit() * reference.pixel_size) + ", needs " +
                        std::to_string(stride * count * reference.pixel_size));
    double sum = 0.0;
    for (std::size_t l = 1; l <= count; ++l) {
        const double d = reference.values[stride * l] - decimated.values[l];
        sum += d * d;
    }
    return sum / static_cast<double>(count);
}

double global_error(const std::array<double, 6>& deviations)
{
    double total = 0.0;
    for (double e : deviations)
        total += e;
    return total;
}

Moments ensemble_moments(std::span<const double> values)
{
    if (values.empty())
        return {};
    const auto w = static_cast<double>(values.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : values) {
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / w;
    const double var = sum_sq / w - mean * mean;
    return {mean, std::sqrt(std::max(var, 0.0))};
}

CorrelationLength correlation_length(const DescriptorCurve& curve, double band)
{
    for (std::size_t l = 0; l < curve.values.size(); ++l)
        if (std::fabs(curve.values[l]) <= band)
            return {curve.distances[l], true};
    return {curve.distances.empty() ? 0.0 : curve.distances.back(), false};
}

bool LengthTable::all_reached() const
{
    return std::all_of(lengths.begin(), lengths.end(), [](const CorrelationLength& c) { return c.reached; });
}

LengthTable correlation_lengths(const std::array<DescriptorCurve, 6>& curves, double band)
{
    LengthTable table;
    double total = 0.0;
    table.min = std::numeric_limits<double>::infinity();
    table.max = 0.0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        table.lengths[i] = correlation_length(curves[i], band);
        const double len = table.lengths[i].length;
        table.min = std::min(table.min, len);
        table.max = std::max(table.max, len);
        total += len;
    }
    table.mean = total / static_cast<double>(curves.size());
    return table;
}

namespace {

/// Largest z with 2^z * target <= size.
int halvings_to(std::size_t size, std::size_t target)
{
    int z = 0;
    while (z < 62 && (target << (z + 1)) <= size)
        ++z;
    return z;
}

} // namespace

int optimal_steps(double ell, std::size_t rows0, std::size_t cols0)
{
    if (!(ell > 0.0) || rows0 == 0 || cols0 == 0)
        throw DataError("optimal step needs a positive length and image size");
    const auto rows_z = static_cast<std::size_t>(std::ceil(3.0 * static_cast<double>(rows0) / ell));
    const auto cols_z = static_cast<std::size_t>(std::ceil(3.0 * static_cast<double>(cols0) / ell));
    // M_Z > M0 means log2(M0/M_Z) < 0: do not decimate.
    if (rows_z > rows0 || cols_z > cols0)
        return 0;
    return std::min(halvings_to(rows0, rows_z), halvings_to(cols0, cols_z));
}

std::vector<CoarsenessPoint> coarseness_trace(const BinaryImage& full_resolution, int max_step)
{
    std::vector<CoarsenessPoint> trace;
    trace.reserve(static_cast<std::size_t>(max_step) + 1);
    for (int k = 0; k <= max_step; ++k)
        trace.push_back(coarseness(full_resolution, k));
    return trace;
}

LadderAnalysis analyze_ladder(const DecimationLadder& ladder, Boundary boundary, const DescriptorSet* reference)
{
    LadderAnalysis out;
    if (ladder.images.empty())
        return out;
    out.descriptors.reserve(ladder.images.size());
    out.descriptors.push_back(reference ? *reference : compute_descriptors(ladder.images.front(), boundary));
    for (std::size_t k = 1; k < ladder.images.size(); ++k)
        out.descriptors.push_back(compute_descriptors(ladder.images[k], boundary));

    const auto& ref = out.descriptors.front();
    for (std::size_t k = 0; k < ladder.images.size(); ++k) {
        const auto& img = ladder.images[k];
        const auto& set = out.descriptors[k];
        StepRecord rec;
        rec.step = static_cast<int>(k);
        rec.rows = img.rows();
        rec.cols = img.cols();
        rec.pixel_size = img.pixel_size();
        rec.phi = set.phi;
        rec.s = set.s;
        for (std::size_t j = 0; j < 2; ++j)
            rec.s_over_phi[j] = set.phi[j] > 0.0 ? set.s / set.phi[j] : 0.0;
        for (std::size_t i = 0; i < set.curves.size(); ++i) {
            rec.deviations[i] = deviation(ref.curves[i], set.curves[i]);
            rec.all_defined = rec.all_defined && set.curves[i].defined;
        }
        rec.global_error = global_error(rec.deviations);
        out.steps.push_back(rec);
    }
    return out;
}

DescriptorCurve average_curves(std::span<const DescriptorCurve> curves)
{
    if (curves.empty())
        throw DataError("cannot average an empty set of curves");
    DescriptorCurve mean = curves.front();
    std::vector<double> phi;
    std::vector<double> sp;
    for (std::size_t w = 1; w < curves.size(); ++w) {
        const auto& c = curves[w];
        if (c.beta != mean.beta || c.phase != mean.phase || c.distances != mean.distances)
            throw DataError("averaged curves must share descriptor, phase and distance grid");
        for (std::size_t l = 0; l < mean.values.size(); ++l)
            mean.values[l] += c.values[l];
        mean.defined = mean.defined && c.defined;
    }
    const auto w = static_cast<double>(curves.size());
    for (auto& v : mean.values)
        v /= w;
    double phi_sum = 0.0;
    double sp_sum = 0.0;
    for (const auto& c : curves) {
        phi_sum += c.phi;
        sp_sum += c.s_over_phi;
    }
    mean.phi = phi_sum / w;
    mean.s_over_phi = sp_sum / w;
    return mean;
}

AutoDecimateResult auto_decimate(const BinaryImage& img, const DecimationMethod& method,
                                 const AutoDecimateOptions& options)
{
    if (img.count(Phase::Void) == 0 || img.count(Phase::Solid) == 0)
        throw NumericError("statistically sensitive decimation needs a two-phase image");

    AutoDecimateReport report;
    report.rows0 = img.rows();
    report.cols0 = img.cols();

    // Steps 1-4: reference descriptors, correlation lengths, ell = min, Z.
    const auto reference = compute_descriptors(img, options.boundary);
    report.lengths = correlation_lengths(reference.curves, options.band);
    report.ell = report.lengths.min;
    for (std::size_t i = 0; i < report.lengths.lengths.size(); ++i)
        if (!report.lengths.lengths[i].reached)
            report.notices.push_back("descriptor " + std::string(descriptor_name(reference.curves[i].beta)) +
                                     " of phase " + std::to_string(index(reference.curves[i].phase)) +
                                     " never entered the band; domain is small relative to the structure");
    report.optimal_step = optimal_steps(std::max(report.ell, 1.0), img.rows(), img.cols());
    const int z = report.optimal_step;

    // Step 5: Z halvings, plus verification rungs for the report.
    BinaryImage base = img;
    const std::size_t unit = std::size_t{1} << z;
    if (img.rows() % unit != 0 || img.cols() % unit != 0) {
        if (!options.crop)
            throw DataError("image " + std::to_string(img.rows()) + "x" + std::to_string(img.cols()) +
                            " is not divisible by 2^" + std::to_string(z) + " (use crop)");
        base = crop_to_multiple(img, z);
        report.notices.push_back("cropped to " + std::to_string(base.rows()) + "x" + std::to_string(base.cols()));
    }
    report.cropped_rows = base.rows();
    report.cropped_cols = base.cols();
    const DescriptorSet* ref_ptr = &reference;
    DescriptorSet cropped_reference;
    if (!(base == img)) {
        cropped_reference = compute_descriptors(base, options.boundary);
        ref_ptr = &cropped_reference;
    }

    int depth = z;
    {
        std::size_t rows = base.rows() >> z;
        std::size_t cols = base.cols() >> z;
        for (int extra = 0; extra < options.verify_steps && rows % 2 == 0 && cols % 2 == 0 && rows >= 2 && cols >= 2;
             ++extra) {
            ++depth;
            rows /= 2;
            cols /= 2;
        }
    }
    auto ladder = build_ladder(base, method, depth);
    auto analysis = analyze_ladder(ladder, options.boundary, ref_ptr);
    report.steps = std::move(analysis.steps);
    report.descriptors = std::move(analysis.descriptors);
    report.coarseness = coarseness_trace(base, depth);
    if (z == 0)
        report.notices.push_back("Z = 0: the image is returned unchanged");

    return {ladder.images[static_cast<std::size_t>(z)], std::move(report)};
}

} // namespace microstat
