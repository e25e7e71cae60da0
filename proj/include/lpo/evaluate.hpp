#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpo/gateway.hpp"
#include "lpo/prompt.hpp"
#include "lpo/task.hpp"

namespace lpo {

struct EvalFailure {
    Example example;
    std::string model_output;
    std::string extracted;  // empty when nothing matched
};

// Aggregate of exact-match scoring over a batch of examples.
struct EvalResult {
    double accuracy = 0.0;               // mean over evaluated examples
    std::size_t n = 0;                   // evaluated example count
    std::vector<EvalFailure> failures;   // evaluated and wrong, input order
    std::vector<std::uint8_t> per_example;  // 1 bit per input example
    std::vector<std::uint8_t> evaluated;    // mask; all 1s unless partial
    bool partial = false;                // a provider error interrupted the batch
    std::string error;                   // message when partial
};

struct EvalOptions {
    int workers = 1;  // per-example fan-out limit
};

// Renders the task template for every example, asks the task model, extracts
// and scores. per_example follows input order regardless of completion order.
// Recoverable provider failures mark the batch partial instead of aborting;
// deterministic failures (replay miss) propagate.
EvalResult evaluate(const Prompt& prompt, const std::vector<Example>& examples,
                    const TaskSpec& spec, Gateway& gateway,
                    const EvalOptions& options = {});

// Seeded uniform sample without replacement, deterministic for a fixed seed.
std::vector<Example> sample_minibatch(const std::vector<Example>& examples,
                                      std::size_t size, std::uint64_t seed);

}  // namespace lpo
