#include "actdet/scoring.hpp"

#include <stdexcept>
#include <string>

namespace actdet {

WordModel derive_word_weights(const std::vector<TrainingHistogram>& examples, double bias,
                              int vocab_size) {
    int k = vocab_size;
    if (k < 0) {
        if (examples.empty())
            throw std::invalid_argument(
                "derive_word_weights: vocab_size must be given when no examples are provided");
        k = static_cast<int>(examples[0].counts.size());
    }
    if (k < 1) throw std::invalid_argument("derive_word_weights: vocab_size must be >= 1");

    WordModel model;
    model.bias = bias;
    model.weights.assign(static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const auto& ex = examples[i];
        if (static_cast<int>(ex.counts.size()) != k)
            throw std::invalid_argument("derive_word_weights: histogram " + std::to_string(i) +
                                        " has " + std::to_string(ex.counts.size()) +
                                        " bins, expected " + std::to_string(k));
        for (int j = 0; j < k; ++j)
            model.weights[static_cast<std::size_t>(j)] += ex.dual_coefficient * ex.counts[j];
    }
    return model;
}

namespace {

std::vector<long long> word_histogram(const std::vector<QuantizedFeature>& features,
                                      const WordModel& model) {
    std::vector<long long> counts(model.weights.size(), 0);
    for (std::size_t i = 0; i < features.size(); ++i) {
        const int word = features[i].word;
        if (word < 0 || word >= model.vocab_size())
            throw std::out_of_range("feature " + std::to_string(i) + " has word index " +
                                    std::to_string(word) + ", model vocabulary is " +
                                    std::to_string(model.vocab_size()));
        ++counts[static_cast<std::size_t>(word)];
    }
    return counts;
}

}  // namespace

double score_feature_set(const std::vector<QuantizedFeature>& features, const WordModel& model,
                         bool include_bias) {
    const auto counts = word_histogram(features, model);
    double score = include_bias ? model.bias : 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j)
        if (counts[j] != 0) score += static_cast<double>(counts[j]) * model.weights[j];
    return score;
}

double normalized_window_score(const std::vector<QuantizedFeature>& features,
                               const WordModel& model, int window_length) {
    if (window_length < 1)
        throw std::invalid_argument("normalized_window_score: window_length must be >= 1");
    if (features.empty()) return 0.0;
    const auto counts = word_histogram(features, model);
    const double total = static_cast<double>(features.size());
    double score = 0.0;
    for (std::size_t j = 0; j < counts.size(); ++j)
        if (counts[j] != 0) score += (static_cast<double>(counts[j]) / total) * model.weights[j];
    return score * window_length;
}

}  // namespace actdet
