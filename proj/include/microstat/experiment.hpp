#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "microstat/analysis.hpp"
#include "microstat/generators.hpp"

namespace microstat {

/// An ensemble of W realizations of one material, each decimated K times by
/// every requested method.
struct ExperimentConfig
{
    std::string material = "od";
    int size = 1024;
    int realizations = 20;
    std::vector<DecimationKind> methods{DecimationKind::Random, DecimationKind::Bilinear, DecimationKind::Bicubic};
    int max_step = 8;
    std::uint64_t seed = 1;
    double band = kCorrelationBand;
    unsigned threads = 1;
};

struct MemberResult
{
    std::uint64_t seed = 0;
    DescriptorSet reference;
    LengthTable lengths;          // from this member's own A_0 curves
    int optimal_step = 0;         // Z from lengths.min
    std::vector<CoarsenessPoint> coarseness;
    std::vector<std::vector<StepRecord>> steps; // [method][k]
};

struct ExperimentResult
{
    ExperimentConfig config;
    std::vector<MemberResult> members;
    std::vector<std::vector<Moments>> errors;    // [method][k]: <E_k>, sigma
    std::array<DescriptorCurve, 6> mean_curves;  // <F_{beta,j,0}>
    LengthTable lengths;                         // from mean_curves
    std::array<int, 3> optimal_steps{};          // Z from min, mean, max length
    std::vector<Moments> coarseness;             // [k]
    std::array<Moments, 2> phi;
};

/// Seed of member w: derived from the ensemble seed so members are independent.
std::uint64_t member_seed(std::uint64_t ensemble_seed, int member);

/// Seed of the random decimation stream used on a member.
std::uint64_t decimation_seed(std::uint64_t member_seed);

MemberResult run_member(const MaterialSpec& material, std::uint64_t seed, const ExperimentConfig& config);

/// Members may run on several threads; the reduction does not depend on scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config);

} // namespace microstat
