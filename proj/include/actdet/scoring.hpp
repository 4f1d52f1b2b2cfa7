#pragma once

#include <cstddef>
#include <vector>

#include "actdet/types.hpp"

namespace actdet {

/// One quantized local descriptor occurrence: where it sits in space-time
/// and which visual word it maps to.
struct QuantizedFeature {
    int t = 0;
    int x = 0;
    int y = 0;
    int word = 0;

    bool operator==(const QuantizedFeature&) const = default;
};

/// Linear additive classifier: one weight per visual word plus a bias.
/// The score of any feature set decomposes into per-occurrence word weights,
/// which is what lets graph nodes carry a single weight each.
struct WordModel {
    std::vector<double> weights;
    double bias = 0.0;

    int vocab_size() const { return static_cast<int>(weights.size()); }
};

/// A training example reduced to its word-count histogram and the signed
/// dual coefficient the trained classifier assigned to it.
struct TrainingHistogram {
    std::vector<int> counts;
    double dual_coefficient = 0.0;
};

/// Collapse dual coefficients and histograms into per-word weights:
/// weight[j] = sum_i alpha_i * counts_i[j]. `vocab_size` must be given when
/// `examples` is empty; otherwise it defaults to the histogram length and
/// every histogram must match it.
WordModel derive_word_weights(const std::vector<TrainingHistogram>& examples, double bias,
                              int vocab_size = -1);

/// Classifier response for a feature set: optional bias plus the sum of the
/// features' word weights. Accumulates through a word histogram, so the
/// result is independent of feature order.
double score_feature_set(const std::vector<QuantizedFeature>& features, const WordModel& model,
                         bool include_bias);

/// Score of the L1-normalized word histogram, re-weighted by the window
/// length in frames. Zero features scores 0. Used by the normalized sliding
/// window ranking only; the bias is not involved.
double normalized_window_score(const std::vector<QuantizedFeature>& features,
                               const WordModel& model, int window_length);

}  // namespace actdet
