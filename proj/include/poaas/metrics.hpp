#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace poaas::metrics {

// Minimal Prometheus-style registry: counters (optionally labeled) and
// fixed-bucket histograms, exposed in the text exposition format. Updates are
// atomic; registration is mutex-guarded.
class Registry {
 public:
  void counter_add(const std::string& name, std::uint64_t delta = 1);
  void counter_add(const std::string& name, const std::string& label_key,
                   const std::string& label_value, std::uint64_t delta = 1);

  // Histogram buckets are fixed at first registration.
  void register_histogram(const std::string& name, std::vector<double> upper_bounds);
  void observe(const std::string& name, double value);

  std::uint64_t counter_value(const std::string& name) const;
  std::uint64_t counter_value(const std::string& name, const std::string& label_key,
                              const std::string& label_value) const;

  // Prometheus text exposition, series sorted by name for stable scrapes.
  std::string expose() const;

 private:
  struct Histogram {
    std::vector<double> bounds;                         // ascending, +Inf implicit
    std::vector<std::unique_ptr<std::atomic<std::uint64_t>>> buckets;  // bounds.size() + 1
    std::atomic<std::uint64_t> count{0};
    std::atomic<double> sum{0.0};
  };

  mutable std::mutex mutex_;
  std::map<std::string, std::map<std::string, std::unique_ptr<std::atomic<std::uint64_t>>>>
      counters_;  // name -> rendered label string ("" for none) -> value
  std::map<std::string, std::unique_ptr<Histogram>> histograms_;
};

}  // namespace poaas::metrics
