#include "newsframe/metrics.hpp"

#include <map>

#include "newsframe/error.hpp"

namespace newsframe {

void ConfusionCounts::add(bool predicted, bool actual) {
  if (predicted && actual) {
    ++tp;
  } else if (predicted) {
    ++fp;
  } else if (actual) {
    ++fn;
  } else {
    ++tn;
  }
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

Prf1 prf1(const ConfusionCounts& c) {
  if (c.tp + c.fp == 0 && c.fn == 0) return {1.0, 1.0, 1.0};
  Prf1 out;
  const double tp = static_cast<double>(c.tp);
  out.precision = c.tp + c.fp > 0 ? tp / static_cast<double>(c.tp + c.fp) : 0.0;
  out.recall = c.tp + c.fn > 0 ? tp / static_cast<double>(c.tp + c.fn) : 1.0;
  const double denom = out.precision + out.recall;
  out.f1 = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
  return out;
}

double accuracy(const ConfusionCounts& c) {
  if (c.total() == 0) throw Error(Errc::EmptyCounts, "accuracy of zero observations");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double cohens_kappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) throw Error(Errc::LengthMismatch, "coders rated different numbers of items");
  if (a.empty()) throw Error(Errc::InvalidArgument, "kappa of zero items");
  const double n = static_cast<double>(a.size());
  std::map<std::string, std::pair<double, double>> marginals;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    marginals[a[i]].first += 1.0;
    marginals[b[i]].second += 1.0;
  }
  const double po = agree / n;
  double pe = 0.0;
  for (const auto& [cat, m] : marginals) pe += (m.first / n) * (m.second / n);
  if (pe >= 1.0) return 1.0;  // one shared category: agreement is perfect
  return (po - pe) / (1.0 - pe);
}

}  // namespace newsframe
