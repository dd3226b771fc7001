#ifndef RELBOUND_SAMPLER_HPP
#define RELBOUND_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <relbound/box.hpp>
#include <relbound/parser.hpp>
#include <relbound/precision.hpp>

namespace relbound
{

struct SamplerOptions {
    long n = 100000;
    std::uint64_t seed = 1;
    bool corners = true; // add the 2^n corners when n <= 16
    int jobs = 1;
};

// Observed (not guaranteed) worst errors. Values are certified lower bounds on
// the error at the sampled points: any sqrt enclosure radius is subtracted.
struct SampleReport {
    Rational max_abs;
    std::optional<Rational> max_rel; // absent when no point had |f| > 2^-512
    long samples = 0;
    std::uint64_t seed = 0;
    long skipped = 0; // NaN / infinity / tiny |f| points
    std::vector<Rational> argmax_abs;
    std::vector<Rational> argmax_rel;
};

SampleReport underapprox(const FunctionSpec &spec, const PrecisionSpec &prec, const SamplerOptions &opts = {});

// One sample stream over spec.domain; each point also counts towards every
// given sub-box that contains it. Returns one report per box.
std::vector<SampleReport> underapprox_partitioned(const FunctionSpec &spec, const PrecisionSpec &prec,
                                                  const std::vector<Box> &boxes, const SamplerOptions &opts = {});

} // namespace relbound

#endif
