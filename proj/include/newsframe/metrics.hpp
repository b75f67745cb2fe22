#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace newsframe {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
  void add(bool predicted, bool actual);
  ConfusionCounts& operator+=(const ConfusionCounts& o);
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Prf1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// With no predicted and no actual positives, precision = recall = F1 = 1.
// With no predicted positives but some actual ones, precision = 0.
Prf1 prf1(const ConfusionCounts& c);

// (tp + tn) / total; throws EmptyCounts when total == 0.
double accuracy(const ConfusionCounts& c);

// Chance-corrected agreement between two coders. 1 when both coders agree on
// a single category throughout. Throws LengthMismatch / InvalidArgument.
double cohens_kappa(std::span<const std::string> codes_a, std::span<const std::string> codes_b);

}  // namespace newsframe
