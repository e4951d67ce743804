#include "poaas/metrics.hpp"

#include <cmath>
#include <sstream>

namespace poaas::metrics {

namespace {

std::string render_label(const std::string& key, const std::string& value) {
  if (key.empty()) return "";
  std::string escaped;
  for (char c : value) {
    if (c == '\\' || c == '"') escaped.push_back('\\');
    escaped.push_back(c);
  }
  return "{" + key + "=\"" + escaped + "\"}";
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "+Inf" : "-Inf";
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

void Registry::counter_add(const std::string& name, std::uint64_t delta) {
  counter_add(name, "", "", delta);
}

void Registry::counter_add(const std::string& name, const std::string& label_key,
                           const std::string& label_value, std::uint64_t delta) {
  std::atomic<std::uint64_t>* cell = nullptr;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto& series = counters_[name][render_label(label_key, label_value)];
    if (!series) series = std::make_unique<std::atomic<std::uint64_t>>(0);
    cell = series.get();
  }
  cell->fetch_add(delta, std::memory_order_relaxed);
}

void Registry::register_histogram(const std::string& name, std::vector<double> upper_bounds) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& h = histograms_[name];
  if (h) return;
  h = std::make_unique<Histogram>();
  h->bounds = std::move(upper_bounds);
  for (std::size_t i = 0; i <= h->bounds.size(); ++i) {
    h->buckets.push_back(std::make_unique<std::atomic<std::uint64_t>>(0));
  }
}

void Registry::observe(const std::string& name, double value) {
  Histogram* h = nullptr;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = histograms_.find(name);
    if (it == histograms_.end()) return;
    h = it->second.get();
  }
  std::size_t idx = h->bounds.size();
  for (std::size_t i = 0; i < h->bounds.size(); ++i) {
    if (value <= h->bounds[i]) {
      idx = i;
      break;
    }
  }
  h->buckets[idx]->fetch_add(1, std::memory_order_relaxed);
  h->count.fetch_add(1, std::memory_order_relaxed);
  double cur = h->sum.load(std::memory_order_relaxed);
  while (!h->sum.compare_exchange_weak(cur, cur + value, std::memory_order_relaxed)) {
  }
}

std::uint64_t Registry::counter_value(const std::string& name) const {
  return counter_value(name, "", "");
}

std::uint64_t Registry::counter_value(const std::string& name, const std::string& label_key,
                                      const std::string& label_value) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = counters_.find(name);
  if (it == counters_.end()) return 0;
  auto series = it->second.find(render_label(label_key, label_value));
  if (series == it->second.end()) return 0;
  return series->second->load(std::memory_order_relaxed);
}

std::string Registry::expose() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::ostringstream out;
  for (const auto& [name, series] : counters_) {
    out << "# TYPE " << name << " counter\n";
    for (const auto& [labels, value] : series) {
      out << name << labels << " " << value->load(std::memory_order_relaxed) << "\n";
    }
  }
  for (const auto& [name, h] : histograms_) {
    out << "# TYPE " << name << " histogram\n";
    std::uint64_t cumulative = 0;
    for (std::size_t i = 0; i < h->bounds.size(); ++i) {
      cumulative += h->buckets[i]->load(std::memory_order_relaxed);
      out << name << "_bucket{le=\"" << format_double(h->bounds[i]) << "\"} " << cumulative
          << "\n";
    }
    cumulative += h->buckets[h->bounds.size()]->load(std::memory_order_relaxed);
    out << name << "_bucket{le=\"+Inf\"} " << cumulative << "\n";
    out << name << "_sum " << h->sum.load(std::memory_order_relaxed) << "\n";
    out << name << "_count " << h->count.load(std::memory_order_relaxed) << "\n";
  }
  return out.str();
}

}  // namespace poaas::metrics
