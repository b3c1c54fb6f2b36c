#include "pilgrim/events.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pilgrim {

long TieSummary::total() const noexcept { return std::accumulate(occupancy.begin(), occupancy.end(), 0L); }

EventSequence::EventSequence(std::vector<double> times) : times_(std::move(times)) {
  for (double t : times_) {
    if (!std::isfinite(t) || !(t > 0.0)) throw std::invalid_argument("event times must be finite and positive");
  }
}

EventSequence EventSequence::prefix(long n) const {
  if (n < 0 || n > size()) throw std::out_of_range("prefix length");
  return EventSequence(std::vector<double>(times_.begin(), times_.begin() + n));
}

TieSummary EventSequence::ties() const {
  std::vector<double> sorted = times_;
  std::sort(sorted.begin(), sorted.end());
  TieSummary s;
  const long n = size();
  long seen = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const long d = static_cast<long>(j - i);
    seen += d;
    s.times.push_back(sorted[i]);
    s.occupancy.push_back(d);
    s.risk_after.push_back(n - seen);
    i = j;
  }
  return s;
}

}  // namespace pilgrim
