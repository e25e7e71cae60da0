#include "lpo/evaluate.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "lpo/detail/rng.hpp"
#include "lpo/errors.hpp"

namespace lpo {

EvalResult evaluate(const Prompt& prompt, const std::vector<Example>& examples,
                    const TaskSpec& spec, Gateway& gateway,
                    const EvalOptions& options) {
    if (examples.empty()) throw SizeError("evaluate: no examples");
    spec.validate();

    const std::size_t n = examples.size();
    std::vector<std::string> outputs(n);
    std::vector<std::uint8_t> done(n, 0);
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> stop{false};
    std::mutex error_mutex;
    std::string recoverable_error;
    std::exception_ptr fatal;

    auto worker = [&] {
        while (!stop.load()) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= n) return;
            ChatRequest request = gateway.make_request(
                Role::Task,
                {{Speaker::User, spec.render(prompt.text(), examples[i].input)}});
            try {
                outputs[i] = gateway.complete(request).content;
                done[i] = 1;
            } catch (const ProviderError& e) {
                std::lock_guard lock(error_mutex);
                if (!e.recoverable() && !fatal) fatal = std::current_exception();
                if (recoverable_error.empty()) recoverable_error = e.what();
                stop.store(true);
                return;
            }
        }
    };

    int workers = std::max(1, options.workers);
    if (workers == 1 || n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (fatal) std::rethrow_exception(fatal);

    EvalResult result;
    result.per_example.assign(n, 0);
    result.evaluated = done;
    result.partial = stop.load();
    result.error = recoverable_error;

    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!done[i]) continue;
        ++result.n;
        auto extracted = extract_answer(outputs[i], spec.answer_kind);
        int score = score_example(extracted, examples[i].gold, spec.answer_kind);
        result.per_example[i] = static_cast<std::uint8_t>(score);
        if (score) {
            ++correct;
        } else {
            result.failures.push_back(
                {examples[i], outputs[i], extracted.value_or("")});
        }
    }
    result.accuracy = result.n == 0
                          ? 0.0
                          : static_cast<double>(correct) / static_cast<double>(result.n);
    return result;
}

std::vector<Example> sample_minibatch(const std::vector<Example>& examples,
                                      std::size_t size, std::uint64_t seed) {
    if (size > examples.size())
        throw SizeError("minibatch size " + std::to_string(size) +
                        " exceeds population " + std::to_string(examples.size()));
    std::vector<std::size_t> indices(examples.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    detail::Rng rng(detail::derive_seed(seed, "minibatch"));
    // partial Fisher-Yates: the first `size` entries are the sample
    for (std::size_t i = 0; i < size; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(indices.size() - i));
        std::swap(indices[i], indices[j]);
    }
    std::vector<Example> out;
    out.reserve(size);
    for (std::size_t i = 0; i < size; ++i) out.push_back(examples[indices[i]]);
    return out;
}

}  // namespace lpo
