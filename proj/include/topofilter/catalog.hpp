#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "topofilter/filter.hpp"
#include "topofilter/io.hpp"

namespace topofilter {

/// Named graphs plus a bounded LRU cache of derived filter views.
///
/// Readers take an immutable snapshot; uploads build a new map and swap it
/// in, so a reader never sees a half-inserted document.
class Catalog {
 public:
  struct Entry {
    std::shared_ptr<const GraphDocument> document;
    std::uint64_t generation = 0;
  };
  using Snapshot = std::map<std::string, Entry>;

  explicit Catalog(std::size_t cache_capacity = 64)
      : snapshot_(std::make_shared<const Snapshot>()), capacity_(cache_capacity) {}

  std::shared_ptr<const Snapshot> snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return snapshot_;
  }

  std::optional<Entry> find(const std::string& name) const {
    const auto snap = snapshot();
    const auto it = snap->find(name);
    if (it == snap->end()) return std::nullopt;
    return it->second;
  }

  /// Adds or replaces a document.
  void put(GraphDocument doc) {
    auto shared = std::make_shared<const GraphDocument>(std::move(doc));
    std::lock_guard write(write_mutex_);
    auto next = std::make_shared<Snapshot>(*snapshot());
    (*next)[shared->name] = Entry{shared, ++generation_};
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = std::move(next);
  }

  /// Filtered view of a catalog entry, computed on a miss.
  std::shared_ptr<const SubgraphResult> view(const Entry& entry, const FilterSpec& spec) {
    const std::string key = std::to_string(entry.generation) + "|" +
                            std::string(to_string(spec.mode)) + "|" + std::to_string(spec.d);
    {
      std::lock_guard lock(cache_mutex_);
      if (const auto it = cache_.find(key); it != cache_.end()) {
        order_.splice(order_.begin(), order_, it->second.second);
        ++hits_;
        return it->second.first;
      }
    }
    // Computed outside the lock; a concurrent miss on the same key computes
    // the same value.
    auto result =
        std::make_shared<const SubgraphResult>(apply_filter(entry.document->graph, spec));
    std::lock_guard lock(cache_mutex_);
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second.first;
    order_.push_front(key);
    cache_.emplace(key, std::make_pair(result, order_.begin()));
    while (cache_.size() > capacity_) {
      cache_.erase(order_.back());
      order_.pop_back();
    }
    return result;
  }

  std::size_t cache_size() const {
    std::lock_guard lock(cache_mutex_);
    return cache_.size();
  }
  std::size_t cache_hits() const {
    std::lock_guard lock(cache_mutex_);
    return hits_;
  }

 private:
  mutable std::mutex snapshot_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::uint64_t generation_ = 0;

  mutable std::mutex cache_mutex_;
  std::size_t capacity_;
  std::list<std::string> order_;  // most recent first
  std::unordered_map<std::string,
                     std::pair<std::shared_ptr<const SubgraphResult>, std::list<std::string>::iterator>>
      cache_;
  std::size_t hits_ = 0;
};

}  // namespace topofilter
