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

#include "interp.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include <json.hpp>

namespace cskit {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

void check_simplex(std::span<const double> weights) {
  if (weights.empty()) {
    throw Error(ErrorCode::invalid_argument, "mixture needs at least one weight");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw Error(ErrorCode::validation, "mixture weights must be >= 0");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::validation,
                "mixture weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

}  // namespace

InterpolatedLm::InterpolatedLm(std::vector<LmPtr> components,
                               std::vector<double> weights)
    : components_(std::move(components)), weights_(std::move(weights)) {
  if (components_.empty()) {
    throw Error(ErrorCode::invalid_argument, "mixture needs at least one component");
  }
  for (const auto& c : components_) {
    if (!c) throw Error(ErrorCode::invalid_argument, "null mixture component");
  }
  if (components_.size() != weights_.size()) {
    throw Error(ErrorCode::invalid_argument,
                "got " + std::to_string(weights_.size()) + " weights for " +
                    std::to_string(components_.size()) + " components");
  }
  check_simplex(weights_);
}

std::size_t InterpolatedLm::order() const {
  std::size_t n = 0;
  for (const auto& c : components_) n = std::max(n, c->order());
  return n;
}

std::vector<std::string> InterpolatedLm::vocabulary() const {
  std::set<std::string> uni;
  for (const auto& c : components_) {
    for (auto& w : c->vocabulary()) uni.insert(std::move(w));
  }
  return {uni.begin(), uni.end()};
}

bool InterpolatedLm::in_vocab(std::string_view word) const {
  for (const auto& c : components_) {
    if (c->in_vocab(word)) return true;
  }
  return false;
}

std::optional<double> InterpolatedLm::try_logprob(
    std::span<const std::string> history, std::string_view word) const {
  double p = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    auto lp = components_[i]->try_logprob(history, word);
    if (lp) {
      any = true;
      p += weights_[i] * std::pow(10.0, *lp);
    }
  }
  if (!any) return std::nullopt;
  return std::log10(p);  // -inf when every reachable component gives 0
}

void InterpolatedLm::set_unk_enabled(bool enabled) {
  for (const auto& c : components_) c->set_unk_enabled(enabled);
}

bool InterpolatedLm::unk_enabled() const {
  for (const auto& c : components_) {
    if (!c->unk_enabled()) return false;
  }
  return true;
}

LmPtr interpolate(std::vector<LmPtr> components, std::vector<double> weights) {
  return std::make_shared<InterpolatedLm>(std::move(components),
                                          std::move(weights));
}

namespace {

// Per-event component probabilities for the dev corpus, in corpus order.
std::vector<std::vector<double>> event_probs(std::span<const LmPtr> components,
                                             const Corpus& dev) {
  std::vector<std::vector<double>> probs;
  std::vector<std::string> words;
  for (const auto& utt : dev.utterances) {
    std::size_t ctx = 0;
    for (const auto& c : components) ctx = std::max(ctx, c->order() - 1);
    words.assign(ctx, std::string(kBos));
    for (const auto& tok : utt.tokens) words.push_back(lm_word(tok));
    words.emplace_back(kEos);
    for (std::size_t i = ctx; i < words.size(); ++i) {
      std::span<const std::string> history(words.data(), i);
      std::vector<double> row(components.size(), 0.0);
      double total = 0.0;
      for (std::size_t c = 0; c < components.size(); ++c) {
        auto lp = components[c]->try_logprob(history, words[i]);
        if (lp && std::isfinite(*lp)) {
          row[c] = std::pow(10.0, *lp);
          total += row[c];
        }
      }
      if (total <= 0.0) {
        throw Error(ErrorCode::validation,
                    "dev event '" + words[i] + "' in utterance '" + utt.id +
                        "' has zero probability under every component");
      }
      probs.push_back(std::move(row));
    }
  }
  if (probs.empty()) {
    throw Error(ErrorCode::validation, "development corpus is empty");
  }
  return probs;
}

double mixture_ppl(const std::vector<std::vector<double>>& probs,
                   std::span<const double> weights) {
  double log10_total = 0.0;
  for (const auto& row : probs) {
    double p = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) p += weights[i] * row[i];
    log10_total += std::log10(p);
  }
  return std::pow(10.0, -log10_total / static_cast<double>(probs.size()));
}

}  // namespace

WeightFit fit_weights_em(std::span<const LmPtr> components, const Corpus& dev,
                         std::optional<std::vector<double>> init, double tol,
                         int max_iter) {
  const std::size_t m = components.size();
  if (m == 0) {
    throw Error(ErrorCode::invalid_argument, "no components to fit");
  }
  std::vector<double> weights;
  if (init) {
    if (init->size() != m) {
      throw Error(ErrorCode::invalid_argument,
                  "initial weights must match component count");
    }
    check_simplex(*init);
    weights = *init;
  } else {
    weights.assign(m, 1.0 / static_cast<double>(m));
  }

  auto probs = event_probs(components, dev);
  WeightFit fit;
  fit.weights = weights;
  fit.ppl_trace.push_back(mixture_ppl(probs, weights));
  if (m == 1) {
    fit.converged = true;
    return fit;
  }

  const double n_events = static_cast<double>(probs.size());
  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<double> next(m, 0.0);
    for (const auto& row : probs) {
      double denom = 0.0;
      for (std::size_t i = 0; i < m; ++i) denom += weights[i] * row[i];
      for (std::size_t i = 0; i < m; ++i) {
        next[i] += weights[i] * row[i] / denom;
      }
    }
    for (double& w : next) w /= n_events;

    double ppl = mixture_ppl(probs, next);
    double prev = fit.ppl_trace.back();
    if (ppl > prev) {
      // EM cannot worsen the likelihood; a rise means floating-point noise
      // at convergence. Keep the previous weights.
      fit.converged = true;
      break;
    }
    weights = std::move(next);
    fit.weights = weights;
    fit.ppl_trace.push_back(ppl);
    ++fit.iterations;
    if (prev - ppl < tol) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

WeightFit fit_weights_grid(std::span<const LmPtr> components, const Corpus& dev,
                           double step) {
  const std::size_t m = components.size();
  if (m == 0) {
    throw Error(ErrorCode::invalid_argument, "no components to fit");
  }
  if (!(step > 0.0) || step > 1.0) {
    throw Error(ErrorCode::invalid_argument, "grid step must be in (0, 1]");
  }
  auto probs = event_probs(components, dev);
  const int ticks = static_cast<int>(std::lround(1.0 / step));

  std::vector<double> best;
  double best_ppl = std::numeric_limits<double>::infinity();
  std::vector<int> part(m, 0);
  // Enumerate all compositions of `ticks` into m parts.
  auto evaluate = [&](const std::vector<int>& p) {
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) {
      w[i] = static_cast<double>(p[i]) / static_cast<double>(ticks);
    }
    double ppl = mixture_ppl(probs, w);
    if (ppl < best_ppl) {
      best_ppl = ppl;
      best = std::move(w);
    }
  };
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int left) {
    if (idx + 1 == m) {
      part[idx] = left;
      evaluate(part);
      return;
    }
    for (int t = 0; t <= left; ++t) {
      part[idx] = t;
      rec(idx + 1, left - t);
    }
  };
  rec(0, ticks);

  WeightFit fit;
  fit.weights = best;
  fit.ppl_trace.push_back(best_ppl);
  fit.converged = true;
  return fit;
}

FiveLingualBuild build_5lingual(const Corpus& cs, const Corpus& african_mono,
                                const Corpus& english_mono, const Corpus& dev,
                                int order, int rescoring_order, double tol,
                                int max_iter, std::vector<std::string>* warnings) {
  if (dev.utterances.empty()) {
    throw Error(ErrorCode::validation, "development corpus is empty");
  }
  auto train = [&](const Corpus& c, int o) -> LmPtr {
    return std::make_shared<NGramLm>(
        estimate_kn(count_ngrams(c, o), {}, warnings));
  };
  std::vector<LmPtr> recog = {train(cs, order), train(african_mono, order),
                              train(english_mono, order)};
  WeightFit fit = fit_weights_em(recog, dev, std::nullopt, tol, max_iter);

  std::vector<LmPtr> resc = {train(cs, rescoring_order),
                             train(african_mono, rescoring_order),
                             train(english_mono, rescoring_order)};
  FiveLingualBuild out;
  out.recognition = std::make_shared<InterpolatedLm>(std::move(recog), fit.weights);
  out.rescoring = std::make_shared<InterpolatedLm>(std::move(resc), fit.weights);
  out.fit = std::move(fit);
  return out;
}

void write_mixture_file(const std::string& path,
                        std::span<const std::string> component_paths,
                        std::span<const double> weights) {
  if (component_paths.size() != weights.size() || component_paths.empty()) {
    throw Error(ErrorCode::invalid_argument,
                "mixture file needs matching component and weight lists");
  }
  check_simplex(weights);
  fs::path base = fs::absolute(fs::path(path)).parent_path();
  json out;
  out["weights"] = std::vector<double>(weights.begin(), weights.end());
  json comps = json::array();
  for (const auto& p : component_paths) {
    std::error_code ec;
    fs::path rel = fs::relative(fs::absolute(p), base, ec);
    comps.push_back(ec || rel.empty() ? fs::absolute(p).string() : rel.string());
  }
  out["components"] = std::move(comps);
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::io, "cannot open output file: " + path);
  f << out.dump(2) << "\n";
  if (!f) throw Error(ErrorCode::io, "failed writing " + path);
}

LmPtr read_mixture_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io, "cannot open input file: " + path);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, path + ": malformed mixture file: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array() ||
      !doc.contains("components") || !doc["components"].is_array()) {
    throw Error(ErrorCode::parse,
                path + ": mixture file must contain weights and components");
  }
  std::vector<double> weights;
  for (const auto& w : doc["weights"]) {
    if (!w.is_number()) {
      throw Error(ErrorCode::parse, path + ": weights must be numbers");
    }
    weights.push_back(w.get<double>());
  }
  fs::path base = fs::absolute(fs::path(path)).parent_path();
  std::vector<LmPtr> comps;
  for (const auto& c : doc["components"]) {
    if (!c.is_string()) {
      throw Error(ErrorCode::parse, path + ": component paths must be strings");
    }
    fs::path p(c.get<std::string>());
    if (p.is_relative()) p = base / p;
    comps.push_back(read_lm_auto(p.string()));
  }
  return std::make_shared<InterpolatedLm>(std::move(comps), std::move(weights));
}

LmPtr read_lm_auto(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io, "cannot open input file: " + path);
  char c = 0;
  while (f.get(c) && (c == ' ' || c == '\t' || c == '\n' || c == '\r')) {
  }
  if (c == '{') return read_mixture_file(path);
  return std::make_shared<NGramLm>(read_arpa_file(path));
}

}  // namespace cskit
