// Copyright 2026 The cskit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CSKIT_INTERP_HPP
#define CSKIT_INTERP_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ngram.hpp"

namespace cskit {

/// Static linear mixture of component models: P(w|h) = sum_i w_i P_i(w|h),
/// every component evaluated with its own backoff. Words missing from a
/// component's vocabulary contribute 0 unless that component maps them to
/// "<unk>".
class InterpolatedLm final : public LanguageModel {
 public:
  InterpolatedLm(std::vector<LmPtr> components, std::vector<double> weights);

  std::size_t order() const override;
  std::vector<std::string> vocabulary() const override;
  bool in_vocab(std::string_view word) const override;
  std::optional<double> try_logprob(std::span<const std::string> history,
                                    std::string_view word) const override;
  // Forwards to every component.
  void set_unk_enabled(bool enabled) override;
  bool unk_enabled() const override;

  const std::vector<LmPtr>& components() const { return components_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<LmPtr> components_;
  std::vector<double> weights_;
};

LmPtr interpolate(std::vector<LmPtr> components, std::vector<double> weights);

struct WeightFit {
  std::vector<double> weights;
  std::vector<double> ppl_trace;  // dev perplexity, initial weights first
  int iterations = 0;
  bool converged = false;
};

/// EM for fixed-mixture weights on development data. The trace is
/// non-increasing; iteration stops when the perplexity improvement drops
/// below `tol` or after `max_iter` updates.
WeightFit fit_weights_em(std::span<const LmPtr> components, const Corpus& dev,
                         std::optional<std::vector<double>> init = std::nullopt,
                         double tol = 1e-4, int max_iter = 100);

/// Exhaustive simplex-grid alternative to EM (resolution `step`).
WeightFit fit_weights_grid(std::span<const LmPtr> components, const Corpus& dev,
                           double step = 0.05);

struct FiveLingualBuild {
  std::shared_ptr<InterpolatedLm> recognition;  // mixture of `order` models
  std::shared_ptr<InterpolatedLm> rescoring;    // same weights, higher order
  WeightFit fit;
};

/// The end-to-end recipe: train Kneser-Ney models on the merged CS text,
/// the merged African monolingual text and the English text, learn mixture
/// weights on dev with the recognition-order components, and reuse the
/// weights for the rescoring-order mixture.
FiveLingualBuild build_5lingual(const Corpus& cs, const Corpus& african_mono,
                                const Corpus& english_mono, const Corpus& dev,
                                int order, int rescoring_order,
                                double tol = 1e-4, int max_iter = 100,
                                std::vector<std::string>* warnings = nullptr);

/// Mixture persistence: {"weights": [...], "components": ["a.arpa", ...]}.
/// Component paths are stored relative to the weight file where possible and
/// resolved against its directory on load.
void write_mixture_file(const std::string& path,
                        std::span<const std::string> component_paths,
                        std::span<const double> weights);
LmPtr read_mixture_file(const std::string& path);

/// Loads either an ARPA model or a mixture weight file (sniffs the format).
LmPtr read_lm_auto(const std::string& path);

}  // namespace cskit

#endif  // CSKIT_INTERP_HPP
