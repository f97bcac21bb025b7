#include "microstat/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "microstat/error.hpp"
#include "microstat/rng.hpp"

namespace microstat {

std::uint64_t member_seed(std::uint64_t ensemble_seed, int member)
{
    return derive_seed(ensemble_seed, static_cast<std::uint64_t>(member));
}

std::uint64_t decimation_seed(std::uint64_t seed) { return derive_seed(seed, 0xdec1a7e); }

MemberResult run_member(const MaterialSpec& material, std::uint64_t seed, const ExperimentConfig& config)
{
    const auto generated = generate_material(material, seed);
    const auto& image = generated.image;

    MemberResult member;
    member.seed = seed;
    member.reference = compute_descriptors(image, Boundary::Periodic);
    member.lengths = correlation_lengths(member.reference.curves, config.band);
    member.optimal_step = optimal_steps(std::max(member.lengths.min, 1.0), image.rows(), image.cols());
    member.coarseness = coarseness_trace(image, config.max_step);
    for (auto kind : config.methods) {
        const DecimationMethod method{kind, kind == DecimationKind::Random ? decimation_seed(seed) : 0};
        const auto ladder = build_ladder(image, method, config.max_step);
        member.steps.push_back(analyze_ladder(ladder, Boundary::Periodic, &member.reference).steps);
    }
    return member;
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    if (config.realizations < 1)
        throw DataError("an ensemble needs at least one realization");
    if (config.methods.empty())
        throw DataError("no decimation methods selected");
    const auto material = material_preset(config.material, config.size);

    ExperimentResult result;
    result.config = config;
    result.members.resize(static_cast<std::size_t>(config.realizations));

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int w = next++; w < config.realizations; w = next++) {
            try {
                result.members[static_cast<std::size_t>(w)] =
                    run_member(material, member_seed(config.seed, w), config);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const unsigned threads = std::clamp<unsigned>(config.threads, 1, static_cast<unsigned>(config.realizations));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    const auto steps = static_cast<std::size_t>(config.max_step) + 1;
    std::vector<double> sample(result.members.size());
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
        std::vector<Moments> per_k;
        for (std::size_t k = 0; k < steps; ++k) {
            for (std::size_t w = 0; w < result.members.size(); ++w)
                sample[w] = result.members[w].steps[m][k].global_error;
            per_k.push_back(ensemble_moments(sample));
        }
        result.errors.push_back(std::move(per_k));
    }
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t w = 0; w < result.members.size(); ++w)
            sample[w] = result.members[w].coarseness[k].value;
        result.coarseness.push_back(ensemble_moments(sample));
    }
    for (std::size_t j = 0; j < 2; ++j) {
        for (std::size_t w = 0; w < result.members.size(); ++w)
            sample[w] = result.members[w].reference.phi[j];
        result.phi[j] = ensemble_moments(sample);
    }

    std::vector<DescriptorCurve> bucket;
    for (std::size_t i = 0; i < result.mean_curves.size(); ++i) {
        bucket.clear();
        for (const auto& member : result.members)
            bucket.push_back(member.reference.curves[i]);
        result.mean_curves[i] = average_curves(bucket);
    }
    result.lengths = correlation_lengths(result.mean_curves, config.band);
    const auto side = static_cast<std::size_t>(config.size);
    result.optimal_steps = {optimal_steps(std::max(result.lengths.min, 1.0), side, side),
                            optimal_steps(std::max(result.lengths.mean, 1.0), side, side),
                            optimal_steps(std::max(result.lengths.max, 1.0), side, side)};
    return result;
}

} // namespace microstat
