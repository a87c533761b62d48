#include "sdr/types.hpp"

#include <string>

namespace sdr {

GroupSpec::GroupSpec(int dimension, std::vector<std::vector<int>> groups)
    : dimension_(dimension), groups_(std::move(groups)) {
  if (dimension_ < 1)
    fail(ErrorKind::invalid_argument, "GroupSpec: dimension must be >= 1");
  if (groups_.empty())
    fail(ErrorKind::invalid_argument, "GroupSpec: at least one group required");
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    const auto& s = groups_[j];
    if (s.empty())
      fail(ErrorKind::invalid_argument,
           "GroupSpec: group " + std::to_string(j) + " is empty");
    std::vector<bool> seen(static_cast<std::size_t>(dimension_), false);
    for (int idx : s) {
      if (idx < 0 || idx >= dimension_)
        fail(ErrorKind::invalid_index,
             "GroupSpec: index " + std::to_string(idx) + " of group " +
                 std::to_string(j) + " outside [0, " +
                 std::to_string(dimension_) + ")");
      if (seen[static_cast<std::size_t>(idx)])
        fail(ErrorKind::invalid_index,
             "GroupSpec: duplicate index " + std::to_string(idx) +
                 " in group " + std::to_string(j));
      seen[static_cast<std::size_t>(idx)] = true;
    }
  }
}

std::span<const int> GroupSpec::group(std::size_t j) const {
  if (j >= groups_.size())
    fail(ErrorKind::invalid_index,
         "GroupSpec: group index " + std::to_string(j) + " out of range");
  return groups_[j];
}

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  if (samples_.empty())
    fail(ErrorKind::invalid_argument, "Dataset: must contain >= 1 sample");
  dimension_ = static_cast<int>(samples_[0].features.size());
  if (dimension_ < 1)
    fail(ErrorKind::invalid_argument, "Dataset: samples must have dimension >= 1");
  sq_norms_.reserve(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (s.features.size() != dimension_)
      fail(ErrorKind::dimension_mismatch,
           "Dataset: sample " + std::to_string(i) + " has dimension " +
               std::to_string(s.features.size()) + ", expected " +
               std::to_string(dimension_));
    if (s.label != 1 && s.label != -1)
      fail(ErrorKind::invalid_argument,
           "Dataset: sample " + std::to_string(i) + " label must be -1 or +1");
    if (!s.features.allFinite())
      fail(ErrorKind::invalid_argument,
           "Dataset: sample " + std::to_string(i) + " has non-finite features");
    sq_norms_.push_back(s.features.squaredNorm());
  }
}

std::size_t draw_index(const Dataset& data, SeededRng& rng) {
  return rng.next_index(data.size());
}

const Sample& draw_sample(const Dataset& data, SeededRng& rng) {
  return data[draw_index(data, rng)];
}

}  // namespace sdr
