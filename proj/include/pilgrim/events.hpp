#pragma once

#include <span>
#include <vector>

namespace pilgrim {

// Distinct event times in increasing order with their multiplicities and the
// number of events strictly beyond each one.
struct TieSummary {
  std::vector<double> times;
  std::vector<long> occupancy;
  std::vector<long> risk_after;  // R(t_r) = #{i : T_i > t_r}

  long size() const noexcept { return static_cast<long>(times.size()); }
  long total() const noexcept;
};

class EventSequence {
 public:
  EventSequence() = default;
  explicit EventSequence(std::vector<double> times);

  long size() const noexcept { return static_cast<long>(times_.size()); }
  bool empty() const noexcept { return times_.empty(); }
  double operator[](long i) const { return times_.at(static_cast<std::size_t>(i)); }
  const std::vector<double>& values() const noexcept { return times_; }
  EventSequence prefix(long n) const;

  // ties are exact floating-point equality
  TieSummary ties() const;

 private:
  std::vector<double> times_;
};

}  // namespace pilgrim
