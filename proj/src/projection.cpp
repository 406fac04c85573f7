#include "d2dcache/projection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace d2dcache {

namespace {

constexpr double kFeasTol = 1e-12;

double clip01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Smallest theta >= 0 with phi(theta) = sum_n clip(v_n - theta, 0, 1) = C.
// phi is continuous, piecewise linear and non-increasing, with breakpoints
// at v_n - 1 (coordinate leaves the upper bound) and at v_n (coordinate
// hits zero). Sweeping the sorted breakpoints keeps phi linear on each
// segment, so the crossing is solved exactly in O(N log N).
double solve_shift(std::span<const double> v, double capacity) {
  struct Event {
    double theta;
    double value;  // the v_n involved
    bool to_interior;  // true: saturated -> interior, false: interior -> zero
  };
  int saturated = 0;
  int interior = 0;
  double interior_sum = 0.0;
  std::vector<Event> events;
  events.reserve(2 * v.size());
  for (double x : v) {
    if (x > 1.0) {
      ++saturated;
      events.push_back({x - 1.0, x, true});
    } else if (x > 0.0) {
      ++interior;
      interior_sum += x;
    }
    if (x > 0.0) events.push_back({x, x, false});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.theta < b.theta; });

  double lo = 0.0;
  std::size_t e = 0;
  while (true) {
    // phi(theta) = saturated + interior_sum - theta * interior on this segment
    const double phi_lo = saturated + interior_sum - lo * interior;
    if (phi_lo <= capacity + kFeasTol) return lo;
    const double hi = e < events.size() ? events[e].theta : lo;
    if (interior > 0) {
      const double theta = (saturated + interior_sum - capacity) / interior;
      if (theta <= hi || e >= events.size()) return theta;
    }
    if (e >= events.size()) return lo;
    const double at = events[e].theta;
    while (e < events.size() && events[e].theta == at) {
      const Event& ev = events[e];
      if (ev.to_interior) {
        --saturated;
        ++interior;
        interior_sum += ev.value;
      } else {
        --interior;
        interior_sum -= ev.value;
      }
      ++e;
    }
    lo = at;
  }
}

}  // namespace

ProjectionResult project_capped_box(std::span<const double> v,
                                    double capacity) {
  if (capacity < 0.0)
    throw std::invalid_argument("capacity must be non-negative");
  if (capacity > static_cast<double>(v.size()))
    throw std::invalid_argument("capacity exceeds the box (C > N)");

  ProjectionResult result;
  result.y.resize(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    result.y[i] = clip01(v[i]);
    sum += result.y[i];
  }
  if (sum <= capacity + kFeasTol) return result;  // theta = 0

  const double theta = solve_shift(v, capacity);
  for (std::size_t i = 0; i < v.size(); ++i)
    result.y[i] = clip01(v[i] - theta);
  result.theta = theta;
  result.saturated_capacity = true;
  return result;
}

double project_capped_box_inplace(std::span<double> values, double capacity) {
  auto r = project_capped_box(values, capacity);
  std::copy(r.y.begin(), r.y.end(), values.begin());
  return r.theta;
}

}  // namespace d2dcache
