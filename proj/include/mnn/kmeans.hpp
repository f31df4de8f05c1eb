// Copyright 2026 The mnn-assoc Authors
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
//
// Forgy-initialized k-means over feature vectors, majority-vote naming of
// clusters, and nearest-centroid classification.

#ifndef MNN_KMEANS_HPP_
#define MNN_KMEANS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mnn/linalg.hpp"

namespace mnn {

struct KMeansResult {
  std::vector<std::size_t> assignments;
  std::vector<Vector> centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
  // Within-cluster SSE after each iteration's mean update; non-increasing.
  std::vector<double> inertia_trace;
};

// Forgy initialization: k distinct points (by index) drawn seeded, then Lloyd
// iterations until assignments stop changing or max_iters is hit, then a
// single-point exchange refinement that only ever lowers the SSE (the result
// remains a Lloyd fixed point). Empty clusters are reseeded to the point
// farthest from its assigned centroid. Ties in assignment go to the lowest
// cluster index. Deterministic given seed.
KMeansResult forgy_kmeans(const std::vector<Vector>& points, std::size_t k,
                          std::uint64_t seed, std::size_t max_iters);

// Runs `restarts` seeded attempts (sub-seed r derived from base_seed) and
// keeps the lowest inertia, earliest restart on ties.
KMeansResult best_of_restarts(const std::vector<Vector>& points,
                              std::size_t k, std::uint64_t base_seed,
                              std::size_t restarts, std::size_t max_iters);

// Majority label per cluster; ties break to the lexicographically smallest
// label, clusters with no members get the globally most frequent label.
std::vector<std::string> assign_groups(
    const std::vector<std::size_t>& assignments,
    const std::vector<std::string>& true_labels, std::size_t k);

// Fraction of points whose cluster's majority label equals their own label.
double cluster_purity(const std::vector<std::size_t>& assignments,
                      const std::vector<std::string>& labels, std::size_t k);

struct KMeansModel {
  std::size_t k = 0;
  std::vector<Vector> centroids;
  std::vector<std::string> cluster_to_group;
  double inertia = 0.0;

  // Nearest centroid by Euclidean distance (ties to the lowest cluster
  // index); returns the mapped group label and the cluster index.
  std::pair<std::string, std::size_t> classify(const Vector& f) const;

  // Fraction of items whose classify() label matches the true label.
  double accuracy(const std::vector<Vector>& features,
                  const std::vector<std::string>& labels) const;

  friend bool operator==(const KMeansModel& a, const KMeansModel& b) = default;
};

// Builds a model from a clustering run plus the training labels.
KMeansModel make_kmeans_model(const KMeansResult& result,
                              const std::vector<std::string>& labels);

// Exhaustive global-minimum SSE over all assignments of `points` into at
// most k clusters. Desk scale only (k^n assignments); written with plain
// loops, independent of the kernel-backed k-means path it cross-checks.
double exhaustive_min_sse(const std::vector<Vector>& points, std::size_t k);

}  // namespace mnn

#endif  // MNN_KMEANS_HPP_
